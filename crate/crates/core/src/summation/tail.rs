//! Rigorous remainder bounds.
//!
//! From index `N` on, the term ratio `r(n) = (n+α+a)(n+1-α+b) / ((n+1)(n+c+1))`
//! is dominated by `(n+g)/(n+g+s)` with `s = c-a-b+1`, for the smallest
//! admissible `g ≥ 0`. The dominating tail
//! `t_N Σ_k (1)_k (N+g)_k / ((N+g+s)_k k!)` is a Gauss sum with value
//! `t_N (N+g+s-1)/(s-1)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::bigfloat::{BigFloat, Rounding};
use crate::error::{Error, Result};
use crate::series::{SeriesSpec, TermRule};

/// Largest dominating shift `g` tried.
pub const DEFAULT_G_MAX: u64 = 64;
/// How far [`tail_bound_threshold`] searches for the first admissible index.
pub const THRESHOLD_SEARCH_CAP: u64 = 10_000;
/// Precision of the returned (upward-rounded) bound.
pub const BOUND_PRECISION: u32 = 128;

type Poly = Vec<BigInt>;

fn poly_mul(x: &Poly, y: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_sub(x: &Poly, y: &Poly) -> Poly {
    let n = x.len().max(y.len());
    (0..n)
        .map(|i| {
            let a = x.get(i).cloned().unwrap_or_default();
            let b = y.get(i).cloned().unwrap_or_default();
            a - b
        })
        .collect()
}

/// `slope·m + constant` as a polynomial in `m`.
fn linear(slope: &BigInt, constant: BigInt) -> Poly {
    vec![constant, slope.clone()]
}

/// Coefficients in `m` of
/// `q²(N+m+g)(N+m+1)(N+m+c+1) - q(N+m+α+a) · q(N+m+1-α+b) · (N+m+g+s)`.
///
/// All coefficients nonnegative means the dominating-ratio inequality holds
/// for every index `n = N + m ≥ N`.
fn slack_polynomial(spec: &SeriesSpec, n: u64, g: u64) -> Poly {
    let p = BigInt::from(spec.alpha().numer());
    let q = BigInt::from(spec.alpha().denom());
    let one = BigInt::from(1);
    let n = BigInt::from(n);
    let g = BigInt::from(g);
    let s = BigInt::from(spec.decay_exponent());
    let (a, b, c) = (BigInt::from(spec.a()), BigInt::from(spec.b()), BigInt::from(spec.c()));

    let q2 = vec![&q * &q];
    let dominating = poly_mul(
        &poly_mul(&poly_mul(&q2, &linear(&one, &n + &g)), &linear(&one, &n + 1)),
        &linear(&one, &n + &c + 1),
    );
    let actual = poly_mul(
        &poly_mul(&linear(&q, &q * (&n + &a) + &p), &linear(&q, &q * (&n + &b + 1) - &p)),
        &linear(&one, &n + &g + &s),
    );
    poly_sub(&dominating, &actual)
}

/// Smallest `g ≤ g_max` whose dominating ratio holds from index `n` on, or
/// `None`. Requires every term from `n` on to be positive.
pub fn dominating_shift(spec: &SeriesSpec, n: u64, g_max: u64) -> Option<u64> {
    if n < spec.negative_shift_terms() {
        return None;
    }
    (0..=g_max).find(|&g| slack_polynomial(spec, n, g).iter().all(|c| !c.is_negative()))
}

/// First index from which a bound is available, searched up to
/// [`THRESHOLD_SEARCH_CAP`].
pub fn tail_bound_threshold(spec: &SeriesSpec, g_max: u64) -> Result<u64> {
    let start = spec.negative_shift_terms();
    // Admissibility is monotone in n, so bisect once an admissible index is found.
    let mut hi = start;
    let mut step = 1;
    while dominating_shift(spec, hi, g_max).is_none() {
        if hi >= THRESHOLD_SEARCH_CAP {
            return Err(Error::BoundUnavailable(format!(
                "no dominating ratio with g <= {g_max} below index {THRESHOLD_SEARCH_CAP} for {spec}"
            )));
        }
        hi = (hi + step).min(THRESHOLD_SEARCH_CAP);
        step *= 2;
    }
    let mut lo = start;
    if dominating_shift(spec, lo, g_max).is_some() {
        return Ok(lo);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if dominating_shift(spec, mid, g_max).is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Exact upper bound on `Σ_{n≥N} term(n)`, together with the shift `g` used.
pub fn tail_bound_exact(spec: &SeriesSpec, n: u64, g_max: u64) -> Result<(BigRational, u64)> {
    let g = dominating_shift(spec, n, g_max).ok_or_else(|| {
        let threshold = tail_bound_threshold(spec, g_max)
            .map(|t| t.to_string())
            .unwrap_or_else(|_| "none".into());
        Error::BoundUnavailable(format!(
            "index {n} is below the first admissible index ({threshold}) for {spec}"
        ))
    })?;
    let s = spec.decay_exponent();
    let factor = BigRational::new(
        BigInt::from(n) + BigInt::from(g) + BigInt::from(s - 1),
        BigInt::from(s - 1),
    );
    Ok((spec.term(n) * factor, g))
}

/// Rigorous upper bound on the remainder `Σ_{n≥N} term(n)`, rounded upward.
pub fn tail_bound(spec: &SeriesSpec, n: u64) -> Result<BigFloat> {
    tail_bound_with(spec, n, DEFAULT_G_MAX)
}

pub fn tail_bound_with(spec: &SeriesSpec, n: u64, g_max: u64) -> Result<BigFloat> {
    let (exact, _) = tail_bound_exact(spec, n, g_max)?;
    Ok(BigFloat::from_rational_rounded(&exact, BOUND_PRECISION, Rounding::Up))
}

/// Bound on the remainder of a rule after its first `m` terms.
pub fn tail_bound_rule(rule: &TermRule, m: u64, g_max: u64) -> Result<BigFloat> {
    tail_bound_with(&rule.spec, rule.offset + m, g_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::RationalAlpha;
    use crate::summation::exact::partial_sum_exact;

    fn spec(p: u64, q: u64, a: i64, b: i64, c: i64) -> SeriesSpec {
        SeriesSpec::new(RationalAlpha::new(p, q).unwrap(), a, b, c).unwrap()
    }

    #[test]
    fn slack_is_linear() {
        // Cubic and quadratic parts cancel identically.
        for s in [spec(1, 2, 0, 0, 1), spec(2, 7, 3, -2, 6), spec(1, 3, -1, -1, 0)] {
            for g in 0..5 {
                let p = slack_polynomial(&s, 10, g);
                assert!(p[2].is_zero() && p[3].is_zero(), "{s} g={g}");
            }
        }
    }

    #[test]
    fn dominating_inequality_spot_checks() {
        let s = spec(3, 8, 2, -1, 3);
        let n0 = tail_bound_threshold(&s, DEFAULT_G_MAX).unwrap();
        let g = dominating_shift(&s, n0, DEFAULT_G_MAX).unwrap();
        let sp = BigRational::from_integer(s.decay_exponent().into());
        for n in n0..n0 + 500 {
            let nn = BigRational::from_integer(n.into());
            let gg = BigRational::from_integer(g.into());
            let dom = (&nn + &gg) / (&nn + &gg + &sp);
            assert!(s.term_ratio(n) <= dom, "n={n}");
        }
    }

    #[test]
    fn below_threshold_is_an_error() {
        let s = spec(1, 2, -2, -2, 0);
        assert!(matches!(tail_bound(&s, 0), Err(Error::BoundUnavailable(_))));
        assert!(tail_bound(&s, 2).is_ok());
    }

    #[test]
    fn bound_dominates_deep_remainder() {
        let s = spec(1, 2, 0, 0, 1);
        let n = 200;
        let bound = tail_bound(&s, n).unwrap().to_rational();
        let rem = partial_sum_exact(&s.rule(), 20 * n) - partial_sum_exact(&s.rule(), n);
        assert!(rem < bound);
        // And it is not wildly loose: remainder is within 10% of the bound.
        assert!(rem * BigRational::new(11.into(), 10.into()) > bound);
    }

    #[test]
    fn bound_decreases() {
        let s = spec(1, 3, -1, -1, 0);
        let a = tail_bound(&s, 1000).unwrap();
        let b = tail_bound(&s, 2000).unwrap();
        assert!(b < a);
    }
}
