//! Numerical verification of series identities against their closed forms.

use num_rational::BigRational;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::bigfloat::{decimal_digits_for_bits, BigFloat};
use crate::error::Result;
use crate::pi_reference::{eval_surd, pi_at_bits};
use crate::series::{ClosedFormRHS, NormalizedIdentity, RationalAlpha, SeriesSpec, TermRule};
use crate::summation::{sum_rule_to_digits, SumMethod, SumMode, SumOptions, SumResult};

/// Slack allowed for rounding in the right-hand side, in ulps.
pub const RHS_SLACK_ULPS: i64 = 4;

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub spec: SeriesSpec,
    pub method: SumMethod,
    pub terms_used: u64,
    pub working_precision_bits: u32,
    pub lhs: BigFloat,
    pub tail_bound: Option<BigFloat>,
    pub rhs: BigFloat,
    pub abs_error: BigFloat,
    pub rel_error: BigFloat,
    pub digits_agreed: usize,
    pub pass: bool,
    pub elapsed_ms: u64,
    /// Significant digits used when rendering `lhs` and `rhs`.
    pub display_digits: usize,
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct SpecJson {
            alpha: String,
            a: i64,
            b: i64,
            c: i64,
        }
        let mut st = serializer.serialize_struct("VerificationReport", 12)?;
        st.serialize_field(
            "spec",
            &SpecJson {
                alpha: self.spec.alpha().to_string(),
                a: self.spec.a(),
                b: self.spec.b(),
                c: self.spec.c(),
            },
        )?;
        st.serialize_field("method", self.method.as_str())?;
        st.serialize_field("terms_used", &self.terms_used)?;
        st.serialize_field("working_precision_bits", &self.working_precision_bits)?;
        st.serialize_field("lhs", &self.lhs.to_decimal_string(self.display_digits))?;
        st.serialize_field("rhs", &self.rhs.to_decimal_string(self.display_digits))?;
        st.serialize_field("abs_error", &self.abs_error.to_decimal_string(6))?;
        st.serialize_field("rel_error", &self.rel_error.to_decimal_string(6))?;
        st.serialize_field("digits_agreed", &self.digits_agreed)?;
        st.serialize_field("tail_bound", &self.tail_bound.as_ref().map(|b| b.to_decimal_string(6)))?;
        st.serialize_field("pass", &self.pass)?;
        st.serialize_field("elapsed_ms", &self.elapsed_ms)?;
        st.end()
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub sum: SumOptions,
    /// Added to the rational part of the right-hand side; negative controls.
    pub rhs_offset: Option<BigRational>,
}

impl VerifyOptions {
    pub fn new(digits: usize, mode: SumMode) -> Self {
        VerifyOptions {
            sum: SumOptions::for_digits(digits).with_mode(mode),
            rhs_offset: None,
        }
    }
}

pub fn verify_spec(spec: &SeriesSpec, digits: usize, mode: SumMode) -> Result<VerificationReport> {
    verify_spec_with(spec, digits, &VerifyOptions::new(digits, mode))
}

pub fn verify_spec_with(spec: &SeriesSpec, digits: usize, options: &VerifyOptions) -> Result<VerificationReport> {
    let unit = BigRational::from_integer(1.into());
    let zero = BigRational::from_integer(0.into());
    verify_parts(spec, &spec.rule(), &zero, &unit, &spec.rhs_constant(), digits, options)
}

/// Checks `scale × (closed form) = head + scale × tail`.
pub fn verify_normalized(identity: &NormalizedIdentity, digits: usize, mode: SumMode) -> Result<VerificationReport> {
    verify_normalized_with(identity, digits, &VerifyOptions::new(digits, mode))
}

pub fn verify_normalized_with(
    identity: &NormalizedIdentity,
    digits: usize,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    verify_parts(
        &identity.spec,
        &identity.tail,
        &identity.head,
        &identity.scale,
        &identity.rhs,
        digits,
        options,
    )
}

/// Gauss's summation theorem at `(α+a, 1-α+b; c+1; 1)` is the same equality
/// after dividing by `Γ(α)Γ(1-α)`, so the check is the series check itself.
/// Only rational `α` with integer shifts is covered.
pub fn verify_gauss_reduced(alpha: RationalAlpha, a: i64, b: i64, c: i64, digits: usize) -> Result<VerificationReport> {
    let spec = SeriesSpec::new(alpha, a, b, c)?;
    let mode = SumOptions::for_digits(digits).mode;
    verify_spec(&spec, digits, mode)
}

/// True when every spec agrees exactly with its `(1-α, b, a)` swap on terms
/// `0..=200` and on the closed form.
pub fn verify_symmetry(specs: &[SeriesSpec]) -> bool {
    specs.iter().all(|s| pair_agrees(s, &s.swapped()))
}

/// Exact term-by-term and closed-form comparison of two specs.
pub fn pair_agrees(x: &SeriesSpec, y: &SeriesSpec) -> bool {
    if (0..=200).any(|n| x.term(n) != y.term(n)) {
        return false;
    }
    let (rx, ry) = (x.rhs_constant(), y.rhs_constant());
    rx.rational_part == ry.rational_part && rx.sine.same_value(&ry.sine)
}

fn verify_parts(
    spec: &SeriesSpec,
    rule: &TermRule,
    head: &BigRational,
    scale: &BigRational,
    closed_form: &ClosedFormRHS,
    digits: usize,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let clock = Clock::start();
    let sum: SumResult = sum_rule_to_digits(rule, digits, &options.sum)?;
    let precision = sum.working_precision_bits.max(options.sum.working_precision(digits));

    let series = sum
        .value
        .to_bigfloat(precision)
        .mul(&BigFloat::from_rational(scale, precision));
    let lhs = BigFloat::from_rational(head, precision).add(&series);

    let mut rational_part = closed_form.rational_part.clone();
    if let Some(offset) = &options.rhs_offset {
        rational_part += offset;
    }
    let rhs = BigFloat::from_rational(&rational_part, precision)
        .mul(&eval_surd(&closed_form.sine, precision))
        .div(&pi_at_bits(precision));

    let abs_error = lhs.sub(&rhs).abs();
    let rel_error = if rhs.is_zero() {
        abs_error.clone()
    } else {
        abs_error.div(&rhs.abs())
    };
    let max_digits = decimal_digits_for_bits(precision);
    let digits_agreed = if rel_error.is_zero() {
        max_digits
    } else {
        ((-rel_error.log2_abs() * std::f64::consts::LOG10_2).floor().max(0.0) as usize).min(max_digits)
    };

    let tolerance = BigFloat::from_rational(&crate::summation::ten_pow_neg(digits), 64);
    let tail_bound = sum
        .rigorous_tail_bound
        .as_ref()
        .map(|b| b.mul(&BigFloat::from_rational(&abs_rational(scale), b.precision())));
    let mut pass = rel_error <= tolerance;
    if let Some(bound) = &tail_bound {
        let slack = rhs.ulp().mul_int(&RHS_SLACK_ULPS.into());
        pass &= abs_error <= bound.add(&slack);
    }

    Ok(VerificationReport {
        spec: *spec,
        method: sum.method,
        terms_used: sum.terms_used,
        working_precision_bits: precision,
        lhs,
        tail_bound,
        rhs,
        abs_error,
        rel_error,
        digits_agreed,
        pass,
        elapsed_ms: clock.elapsed_ms(),
        display_digits: digits + 5,
    })
}

fn abs_rational(x: &BigRational) -> BigRational {
    if x < &BigRational::from_integer(0.into()) {
        -x
    } else {
        x.clone()
    }
}

/// Wall-clock timer; reads zero where no clock is available.
struct Clock {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Clock {
    fn start() -> Self {
        Clock {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn elapsed_ms(&self) -> u64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.start.elapsed().as_millis() as u64;
        #[cfg(target_arch = "wasm32")]
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::normalize_identity;

    fn spec(p: u64, q: u64, a: i64, b: i64, c: i64) -> SeriesSpec {
        SeriesSpec::new(RationalAlpha::new(p, q).unwrap(), a, b, c).unwrap()
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn four_over_pi() {
        let r = verify_spec(&spec(1, 2, 0, 0, 1), 20, SumMode::Accelerated).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.digits_agreed >= 20);
        assert!(r.rhs.to_decimal_string(12).starts_with("1.2732395447"));
    }

    #[test]
    fn sixteen_over_nine_pi() {
        let s = spec(1, 2, 0, 0, 2);
        assert_eq!(s.rhs_constant().display(), "16/(9π)");
        assert!(verify_spec(&s, 20, SumMode::Accelerated).unwrap().pass);
    }

    #[test]
    fn perturbed_rhs_fails_near_six_digits() {
        let opts = VerifyOptions {
            rhs_offset: Some(BigRational::new(1.into(), 1_000_000.into())),
            ..VerifyOptions::new(20, SumMode::Accelerated)
        };
        let r = verify_spec_with(&spec(1, 2, 0, 0, 1), 20, &opts).unwrap();
        assert!(!r.pass);
        assert!((5..=7).contains(&r.digits_agreed), "{}", r.digits_agreed);
    }

    #[test]
    fn normalized_forms() {
        let sixteen = normalize_identity(&spec(1, 2, -1, -1, 0), &int(1), 2).unwrap();
        assert_eq!(sixteen.head, int(5));
        assert!(verify_normalized(&sixteen, 20, SumMode::Accelerated).unwrap().pass);
        let big = normalize_identity(&spec(1, 2, -2, -2, 0), &int(36), 3).unwrap();
        assert_eq!(big.head, int(217));
        assert!(verify_normalized(&big, 20, SumMode::Accelerated).unwrap().pass);
    }

    #[test]
    fn rigorous_report_carries_bound() {
        let r = verify_spec(&spec(1, 2, 0, 0, 1), 4, SumMode::Rigorous).unwrap();
        assert!(r.pass);
        assert_eq!(r.method, SumMethod::DirectExact);
        assert!(r.abs_error <= r.tail_bound.clone().unwrap());
    }

    #[test]
    fn gauss_reduced_matches_spec_check() {
        let alpha = RationalAlpha::new(1, 2).unwrap();
        let g = verify_gauss_reduced(alpha, 0, 0, 2, 15).unwrap();
        let s = verify_spec(&spec(1, 2, 0, 0, 2), 15, SumOptions::for_digits(15).mode).unwrap();
        assert!(g.pass);
        assert_eq!(g.lhs, s.lhs);
        assert_eq!(g.rhs, s.rhs);
    }

    #[test]
    fn symmetry_and_broken_swap() {
        let specs = [spec(1, 3, 2, -1, 4), spec(2, 7, 0, 3, 5), spec(1, 2, 1, 1, 3)];
        assert!(verify_symmetry(&specs));
        let s = spec(1, 3, 2, -1, 4);
        let broken = spec(1, 3, -1, 2, 4);
        assert!(!pair_agrees(&s, &broken));
    }

    #[test]
    fn json_keys() {
        let r = verify_spec(&spec(1, 2, 0, 0, 1), 10, SumMode::Accelerated).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        for k in [
            "spec",
            "method",
            "terms_used",
            "working_precision_bits",
            "lhs",
            "rhs",
            "abs_error",
            "rel_error",
            "digits_agreed",
            "tail_bound",
            "pass",
            "elapsed_ms",
        ] {
            assert!(keys.contains(&k), "{k}");
        }
        assert_eq!(v["spec"]["alpha"], "1/2");
        assert_eq!(v["method"], "levin-u");
        assert!(v["tail_bound"].is_null());
        assert!(v["lhs"].as_str().unwrap().starts_with("1.27323954"));
    }
}
