//! Series instances `Σ (α)_{a+n}(1-α)_{b+n} / (n! Γ(c+n+1))` and their
//! closed-form values `(α)_a (1-α)_b Γ(c-a-b) / ((α)_{c-b}(1-α)_{c-a}) · sin(πα)/π`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shifted_factorial::{factorial, poch, poch_parts};

/// A rational `α = p/q` strictly inside `(0, 1)`, in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAlpha {
    p: u64,
    q: u64,
}

impl RationalAlpha {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p == 0 || p >= q {
            return Err(Error::Domain(format!("alpha = {p}/{q} is not inside (0, 1)")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::Domain(format!("alpha = {p}/{q} is not in lowest terms")));
        }
        Ok(RationalAlpha { p, q })
    }

    /// Accepts any fraction that reduces into `(0, 1)`, e.g. `"2/4"`.
    pub fn reduced(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("alpha has zero denominator".into()));
        }
        let g = p.gcd(&q).max(1);
        Self::new(p / g, q / g)
    }

    pub fn numer(&self) -> u64 {
        self.p
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.p), BigInt::from(self.q))
    }

    /// `1 - α`.
    pub fn complement(&self) -> Self {
        RationalAlpha {
            p: self.q - self.p,
            q: self.q,
        }
    }
}

impl fmt::Display for RationalAlpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for RationalAlpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => return Err(Error::Parse(format!("expected p/q, got {s:?}"))),
        };
        let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q: u64 = q
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        Self::reduced(p, q)
    }
}

impl Serialize for RationalAlpha {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalAlpha {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One validated instance `(α; a, b, c)` with `c ≥ 0` and `c - a - b ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeriesSpec {
    alpha: RationalAlpha,
    a: i64,
    b: i64,
    c: i64,
}

/// Validates the parameters of a series instance.
pub fn build_spec(alpha: RationalAlpha, a: i64, b: i64, c: i64) -> Result<SeriesSpec> {
    SeriesSpec::new(alpha, a, b, c)
}

impl SeriesSpec {
    pub fn new(alpha: RationalAlpha, a: i64, b: i64, c: i64) -> Result<Self> {
        if c < 0 {
            return Err(Error::Domain(format!("c = {c} must be nonnegative")));
        }
        if c - a - b < 1 {
            return Err(Error::Domain(format!(
                "c - a - b = {} must be at least 1 for convergence",
                c - a - b
            )));
        }
        Ok(SeriesSpec { alpha, a, b, c })
    }

    pub fn alpha(&self) -> RationalAlpha {
        self.alpha
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// Decay exponent: terms behave like `n^{-s}` with `s = c - a - b + 1 ≥ 2`.
    pub fn decay_exponent(&self) -> i64 {
        self.c - self.a - self.b + 1
    }

    /// Number of leading terms carrying a negative Pochhammer shift.
    pub fn negative_shift_terms(&self) -> u64 {
        (-self.a).max(-self.b).max(0) as u64
    }

    /// The same series written with `(α, a, b) → (1-α, b, a)`.
    pub fn swapped(&self) -> SeriesSpec {
        SeriesSpec {
            alpha: self.alpha.complement(),
            a: self.b,
            b: self.a,
            c: self.c,
        }
    }

    /// `(α)_{a+n} (1-α)_{b+n} / (n! (c+n)!)`.
    pub fn term(&self, n: u64) -> BigRational {
        let n_i = n as i64;
        let (p, q) = (BigInt::from(self.alpha.p), BigInt::from(self.alpha.q));
        // α is not an integer, so no shift of it or of 1-α can hit a pole.
        let no_pole = "non-integer alpha has no poles";
        let (na, da) = poch_parts(&p, &q, self.a + n_i).expect(no_pole);
        let (nb, db) = poch_parts(&(&q - &p), &q, self.b + n_i).expect(no_pole);
        let den = da * db * BigInt::from(factorial(n) * factorial(self.c as u64 + n));
        BigRational::new(na * nb, den)
    }

    /// Integer numerator and denominator of `term(n+1)/term(n)`:
    /// `(p + (a+n)q)(q - p + (b+n)q)` over `q²(n+1)(c+n+1)`.
    pub fn ratio_factors(&self, n: u64) -> (BigInt, BigInt) {
        let p = BigInt::from(self.alpha.p);
        let q = BigInt::from(self.alpha.q);
        let n = BigInt::from(n);
        let num = (&p + (BigInt::from(self.a) + &n) * &q) * (&q - &p + (BigInt::from(self.b) + &n) * &q);
        let den = &q * &q * (&n + 1u32) * (&n + BigInt::from(self.c) + 1u32);
        (num, den)
    }

    /// `((α+a+n)(1-α+b+n)) / ((n+1)(c+n+1))`.
    pub fn term_ratio(&self, n: u64) -> BigRational {
        let (num, den) = self.ratio_factors(n);
        BigRational::new(num, den)
    }

    pub fn rhs_constant(&self) -> ClosedFormRHS {
        rhs_constant(self)
    }

    /// The term sequence starting at index 0.
    pub fn rule(&self) -> TermRule {
        TermRule::new(*self, 0)
    }
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(alpha={}, a={}, b={}, c={})", self.alpha, self.a, self.b, self.c)
    }
}

/// The terms of a spec from index `offset` on, re-indexed to start at zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TermRule {
    pub spec: SeriesSpec,
    pub offset: u64,
}

impl TermRule {
    pub fn new(spec: SeriesSpec, offset: u64) -> Self {
        TermRule { spec, offset }
    }

    pub fn term(&self, m: u64) -> BigRational {
        self.spec.term(self.offset + m)
    }

    pub fn ratio_factors(&self, m: u64) -> (BigInt, BigInt) {
        self.spec.ratio_factors(self.offset + m)
    }

    /// Leading local indices whose terms involve negative shifts.
    pub fn irregular_terms(&self) -> u64 {
        self.spec.negative_shift_terms().saturating_sub(self.offset)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurdKind {
    One,
    Half,
    SimpleSurd,
    ScaledSurdSum,
    NestedSurd,
    NumericOnly,
}

/// `coefficient · √radicand`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdTerm {
    pub coefficient: BigRational,
    pub radicand: BigRational,
}

/// Exact `sin(πα)` where a closed form is tabulated.
///
/// The value is `rational_part + Σ coefficient·√(radicand)`; for
/// [`SurdKind::NestedSurd`] the single radicand is `radicand + inner` with
/// `inner` itself a surd term, e.g. `√(10 - 2√5)/4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdConstant {
    pub alpha: RationalAlpha,
    pub kind: SurdKind,
    pub rational_part: BigRational,
    pub radicands: Vec<SurdTerm>,
    pub inner: Option<SurdTerm>,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn surd(coefficient: BigRational, radicand: i64) -> SurdTerm {
    SurdTerm {
        coefficient,
        radicand: BigRational::from_integer(radicand.into()),
    }
}

/// `sin(πα)` as a tabulated surd for denominators 2, 3, 4, 5, 6, 10.
pub fn sin_pi_rational(alpha: RationalAlpha) -> SurdConstant {
    // sin(πα) = sin(π(1-α)); tabulate on the lower half.
    let folded = if 2 * alpha.p > alpha.q {
        alpha.complement()
    } else {
        alpha
    };
    let base = |kind, rational_part, radicands, inner| SurdConstant {
        alpha,
        kind,
        rational_part,
        radicands,
        inner,
    };
    match (folded.p, folded.q) {
        (1, 2) => base(SurdKind::One, BigRational::one(), vec![], None),
        (1, 6) => base(SurdKind::Half, q(1, 2), vec![], None),
        (1, 3) => base(SurdKind::SimpleSurd, BigRational::zero(), vec![surd(q(1, 2), 3)], None),
        (1, 4) => base(SurdKind::SimpleSurd, BigRational::zero(), vec![surd(q(1, 2), 2)], None),
        (1, 10) => base(SurdKind::ScaledSurdSum, q(-1, 4), vec![surd(q(1, 4), 5)], None),
        (3, 10) => base(SurdKind::ScaledSurdSum, q(1, 4), vec![surd(q(1, 4), 5)], None),
        (1, 5) => base(
            SurdKind::NestedSurd,
            BigRational::zero(),
            vec![surd(q(1, 4), 10)],
            Some(surd(q(-2, 1), 5)),
        ),
        (2, 5) => base(
            SurdKind::NestedSurd,
            BigRational::zero(),
            vec![surd(q(1, 4), 10)],
            Some(surd(q(2, 1), 5)),
        ),
        _ => base(SurdKind::NumericOnly, BigRational::zero(), vec![], None),
    }
}

impl SurdConstant {
    /// Split as `factor × core` with `core` free of a rational multiplier,
    /// returning `(factor, core_latex, core_text)`. Empty core means `1`.
    pub fn factored(&self) -> (BigRational, String, String) {
        match self.kind {
            SurdKind::One | SurdKind::Half => (self.rational_part.clone(), String::new(), String::new()),
            SurdKind::SimpleSurd => {
                let t = &self.radicands[0];
                let r = t.radicand.to_integer();
                (t.coefficient.clone(), format!("\\sqrt{{{r}}}"), format!("√{r}"))
            }
            SurdKind::ScaledSurdSum => {
                let t = &self.radicands[0];
                let g = t.coefficient.clone();
                let rest = &self.rational_part / &g;
                let r = t.radicand.to_integer();
                let sign = if rest.is_negative() { "-" } else { "+" };
                let k = rest.abs();
                (g, format!("(\\sqrt{{{r}}}{sign}{k})"), format!("(√{r}{sign}{k})"))
            }
            SurdKind::NestedSurd => {
                let t = &self.radicands[0];
                let inner = self.inner.as_ref().expect("nested surd has an inner term");
                let r = t.radicand.to_integer();
                let ir = inner.radicand.to_integer();
                let sign = if inner.coefficient.is_negative() { "-" } else { "+" };
                let k = inner.coefficient.abs();
                (
                    t.coefficient.clone(),
                    format!("\\sqrt{{{r}{sign}{k}\\sqrt{{{ir}}}}}"),
                    format!("√({r}{sign}{k}√{ir})"),
                )
            }
            SurdKind::NumericOnly => (
                BigRational::one(),
                format!("\\sin\\frac{{{}\\pi}}{{{}}}", self.alpha.p, self.alpha.q),
                format!("sin({}π/{})", self.alpha.p, self.alpha.q),
            ),
        }
    }

    /// True when both describe the same number by the same closed form.
    pub fn same_value(&self, other: &SurdConstant) -> bool {
        self.kind == other.kind
            && self.rational_part == other.rational_part
            && self.radicands == other.radicands
            && self.inner == other.inner
            && (self.kind != SurdKind::NumericOnly || {
                let fold = |a: RationalAlpha| if 2 * a.p > a.q { a.complement() } else { a };
                fold(self.alpha) == fold(other.alpha)
            })
    }
}

/// `rational_part × sin(πα) / π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormRHS {
    pub rational_part: BigRational,
    pub sine: SurdConstant,
}

/// Exact aggregate `(α)_a (1-α)_b (c-a-b-1)! / ((α)_{c-b} (1-α)_{c-a})`
/// together with the `sin(πα)` surd.
pub fn rhs_constant(spec: &SeriesSpec) -> ClosedFormRHS {
    let alpha = spec.alpha.value();
    let beta = spec.alpha.complement().value();
    let no_pole = "non-integer alpha has no poles";
    let gamma = BigRational::from_integer(BigInt::from(factorial((spec.c - spec.a - spec.b - 1) as u64)));
    let num = poch(&alpha, spec.a).expect(no_pole) * poch(&beta, spec.b).expect(no_pole) * gamma;
    let den = poch(&alpha, spec.c - spec.b).expect(no_pole) * poch(&beta, spec.c - spec.a).expect(no_pole);
    ClosedFormRHS {
        rational_part: num / den,
        sine: sin_pi_rational(spec.alpha),
    }
}

impl ClosedFormRHS {
    pub fn scaled(&self, factor: &BigRational) -> ClosedFormRHS {
        ClosedFormRHS {
            rational_part: &self.rational_part * factor,
            sine: self.sine.clone(),
        }
    }

    /// Coefficient in front of the surd core, and the core in both notations.
    fn display_parts(&self) -> (BigRational, String, String) {
        let (g, latex, text) = self.sine.factored();
        (&self.rational_part * g, latex, text)
    }

    /// Display-style LaTeX, e.g. `\frac{9\sqrt{3}}{4\pi}`.
    pub fn to_latex(&self) -> String {
        let (k, core, _) = self.display_parts();
        let sign = if k.is_negative() { "-" } else { "" };
        let num = k.numer().abs();
        let den = k.denom();
        let numer = match (num.is_one(), core.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => core,
            (false, _) => format!("{num}{core}"),
        };
        let denom = if den.is_one() {
            "\\pi".to_string()
        } else {
            format!("{den}\\pi")
        };
        format!("{sign}\\frac{{{numer}}}{{{denom}}}")
    }

    /// Plain-text form, e.g. `8√2/(3π)`.
    pub fn display(&self) -> String {
        let (k, _, core) = self.display_parts();
        let sign = if k.is_negative() { "-" } else { "" };
        let num = k.numer().abs();
        let den = k.denom();
        let joint = if self.sine.kind == SurdKind::NumericOnly {
            "·"
        } else {
            ""
        };
        let numer = match (num.is_one(), core.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => core,
            (false, _) => format!("{num}{joint}{core}"),
        };
        if den.is_one() {
            format!("{sign}{numer}/π")
        } else {
            format!("{sign}{numer}/({den}π)")
        }
    }
}

/// A series rewritten as `scale × Σ = head + scale × Σ_{m≥0} term(tail_start + m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedIdentity {
    pub spec: SeriesSpec,
    pub head: BigRational,
    pub scale: BigRational,
    /// Original index of the first tail term.
    pub tail_start: u64,
    pub tail: TermRule,
    /// Right-hand side already multiplied by `scale`.
    pub rhs: ClosedFormRHS,
}

/// Peels the first `head_terms` terms into an exact head and multiplies the
/// identity through by `scale`.
///
/// `head_terms` must cover every term with a negative Pochhammer shift so the
/// tail is a positive series.
pub fn normalize_identity(spec: &SeriesSpec, scale: &BigRational, head_terms: u64) -> Result<NormalizedIdentity> {
    if scale.is_zero() {
        return Err(Error::Domain("normalization scale must be nonzero".into()));
    }
    let min = spec.negative_shift_terms();
    if head_terms < min {
        return Err(Error::Domain(format!(
            "head must contain the {min} negative-shift terms, got {head_terms}"
        )));
    }
    let raw: BigRational = (0..head_terms).map(|n| spec.term(n)).sum();
    Ok(NormalizedIdentity {
        spec: *spec,
        head: raw * scale,
        scale: scale.clone(),
        tail_start: head_terms,
        tail: TermRule::new(*spec, head_terms),
        rhs: spec.rhs_constant().scaled(scale),
    })
}

impl NormalizedIdentity {
    /// `scale × term(tail_start + m)`.
    pub fn tail_term(&self, m: u64) -> BigRational {
        &self.scale * self.tail.term(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(p: u64, q: u64) -> RationalAlpha {
        RationalAlpha::new(p, q).unwrap()
    }

    fn spec(p: u64, q: u64, a: i64, b: i64, c: i64) -> SeriesSpec {
        SeriesSpec::new(alpha(p, q), a, b, c).unwrap()
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn build_spec_domain() {
        assert!(build_spec(alpha(1, 2), 0, 0, 1).is_ok());
        assert!(matches!(build_spec(alpha(1, 2), 1, 1, 1), Err(Error::Domain(_))));
        assert!(build_spec(alpha(1, 3), -1, -1, 0).is_ok());
        assert!(matches!(build_spec(alpha(1, 2), -3, 0, -1), Err(Error::Domain(_))));
    }

    #[test]
    fn alpha_validation() {
        assert!(RationalAlpha::new(2, 4).is_err());
        assert!(RationalAlpha::new(0, 3).is_err());
        assert!(RationalAlpha::new(3, 3).is_err());
        assert_eq!("2/4".parse::<RationalAlpha>().unwrap(), alpha(1, 2));
        assert!("3/2".parse::<RationalAlpha>().is_err());
        assert!("1/0".parse::<RationalAlpha>().is_err());
        assert!("x".parse::<RationalAlpha>().is_err());
    }

    #[test]
    fn term_values() {
        let s = spec(1, 2, 0, 0, 1);
        assert_eq!(s.term(0), int(1));
        // ((1/2)_2)² / (2!·3!) = (3/4)²/12.
        assert_eq!(s.term(2), q(3, 64));
        assert_eq!(spec(1, 2, -1, -1, 0).term(0), int(4));
    }

    #[test]
    fn term_ratio_values() {
        let s = spec(1, 2, 0, 0, 1);
        assert_eq!(s.term_ratio(0), q(1, 8));
        assert_eq!(s.term_ratio(0), s.term(1) / s.term(0));
        let r = s.term_ratio(1_000_000);
        assert!((r - int(1)).abs() < q(1, 100_000));
    }

    #[test]
    fn ratio_matches_consecutive_terms() {
        for s in [spec(1, 2, -2, -2, 0), spec(2, 7, 3, -1, 5), spec(5, 12, -3, 2, 4)] {
            for n in 0..60 {
                assert_eq!(s.term(n + 1), s.term(n) * s.term_ratio(n), "{s} n={n}");
            }
        }
    }

    #[test]
    fn sine_table() {
        assert_eq!(sin_pi_rational(alpha(1, 2)).kind, SurdKind::One);
        let third = sin_pi_rational(alpha(1, 3));
        assert_eq!(third.radicands, vec![surd(q(1, 2), 3)]);
        let tenth = sin_pi_rational(alpha(1, 10));
        assert_eq!(tenth.rational_part, q(-1, 4));
        assert_eq!(tenth.radicands, vec![surd(q(1, 4), 5)]);
        let fifth = sin_pi_rational(alpha(1, 5));
        assert_eq!(fifth.kind, SurdKind::NestedSurd);
        assert_eq!(fifth.inner, Some(surd(int(-2), 5)));
        let sixth = sin_pi_rational(alpha(1, 6));
        assert_eq!(sixth.rational_part, q(1, 2));
        assert!(sixth.radicands.is_empty());
        assert_eq!(sin_pi_rational(alpha(2, 7)).kind, SurdKind::NumericOnly);
        assert!(sin_pi_rational(alpha(9, 10)).same_value(&tenth));
    }

    #[test]
    fn rhs_constants() {
        let r = spec(1, 2, 0, 0, 1).rhs_constant();
        assert_eq!(r.rational_part, int(4));
        assert_eq!(r.display(), "4/π");
        assert_eq!(spec(1, 2, 0, 0, 2).rhs_constant().rational_part, q(16, 9));
        let third = spec(1, 3, -1, -1, 0).rhs_constant();
        assert_eq!(third.rational_part, q(81, 4));
        assert_eq!(third.display(), "81√3/(8π)");
        assert_eq!(third.to_latex(), "\\frac{81\\sqrt{3}}{8\\pi}");
    }

    #[test]
    fn normalization_heads() {
        let n = normalize_identity(&spec(1, 2, -1, -1, 0), &int(1), 2).unwrap();
        assert_eq!(n.head, int(5));
        assert_eq!(n.rhs.display(), "16/π");
        let n = normalize_identity(&spec(1, 2, -1, -1, 1), &int(2), 2).unwrap();
        assert_eq!(n.head, int(9));
        assert_eq!(n.rhs.display(), "256/(9π)");
        let n = normalize_identity(&spec(1, 2, -2, -2, 0), &int(36), 3).unwrap();
        assert_eq!(n.head, int(217));
        assert_eq!(n.rhs.display(), "2048/(3π)");
        let n = normalize_identity(&spec(1, 4, -1, -1, 0), &q(3, 16), 1).unwrap();
        assert_eq!(n.head, int(1));
        assert_eq!(n.rhs.display(), "8√2/(3π)");
        let n = normalize_identity(&spec(1, 10, -1, -1, 0), &q(9, 100), 1).unwrap();
        assert_eq!(n.rhs.display(), "25(√5-1)/(9π)");
        let n = normalize_identity(&spec(1, 5, -1, -1, 0), &q(4, 25), 1).unwrap();
        assert_eq!(n.rhs.display(), "25√(10-2√5)/(16π)");
        assert_eq!(n.rhs.to_latex(), "\\frac{25\\sqrt{10-2\\sqrt{5}}}{16\\pi}");
    }

    #[test]
    fn normalization_errors() {
        let s = spec(1, 2, -1, -1, 0);
        assert!(matches!(normalize_identity(&s, &int(0), 2), Err(Error::Domain(_))));
        assert!(matches!(normalize_identity(&s, &int(1), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn head_polynomials() {
        for k in 0..=5i64 {
            let scale = BigRational::from_integer(factorial(k as u64 + 1).into());
            let n = normalize_identity(&spec(1, 2, -1, -1, k), &scale, 2).unwrap();
            assert_eq!(n.head, int(4 * k + 5));
            let scale = BigRational::from_integer((factorial(k as u64 + 2) * 18u32).into());
            let n = normalize_identity(&spec(1, 2, -2, -2, k), &scale, 3).unwrap();
            assert_eq!(n.head, int(32 * k * k + 168 * k + 217));
        }
    }
}
