//! Self-validated constants: π from two independent arctangent formulas,
//! square roots, and numeric values of the `sin(πα)` surds.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bigfloat::{bits_for_decimal_digits, decimal_digits_for_bits, floor_log10, BigFloat, Rounding};
use crate::error::{Error, Result};
use crate::series::{RationalAlpha, SurdConstant, SurdKind};

/// Largest digit count [`compute_pi`] accepts by default.
pub const DEFAULT_MAX_PI_DIGITS: usize = 10_000;

/// A high-precision π whose digits were confirmed by a second formula.
#[derive(Clone, Debug)]
pub struct PiReference {
    pub digits: usize,
    pub value: BigFloat,
    pub agreement_digits: usize,
}

impl PiReference {
    /// `digits` significant decimal digits, rounded.
    pub fn to_decimal_string(&self) -> String {
        self.value.to_decimal_string(self.digits)
    }
}

/// `arctan(1/k)` summed exactly to within `2^-bits`.
///
/// Binary splitting over `Σ_j (-1)^j / ((2j+1) k^{2j+1})`; the alternating
/// tail is bounded by the first omitted term.
fn arctan_inv(k: u64, bits: u32) -> BigRational {
    let log2k = (k as f64).log2();
    let terms = ((bits as f64 + 2.0) / (2.0 * log2k)).ceil() as u64 + 1;
    let k2 = BigInt::from(k) * BigInt::from(k);
    let split = split_arctan(0, terms, k, &k2);
    BigRational::new(split.t, split.b * split.q)
}

struct Split {
    p: BigInt,
    q: BigInt,
    b: BigInt,
    t: BigInt,
}

/// `Σ_{j=lo}^{hi-1} (1/b(j)) Π_{i≤j} p(i)/q(i)` with `p(0)=1, q(0)=k`,
/// `p(i)=-1, q(i)=k²`, `b(j)=2j+1`; result is `t / (b·q)`.
fn split_arctan(lo: u64, hi: u64, k: u64, k2: &BigInt) -> Split {
    if hi - lo == 1 {
        let (p, q) = if lo == 0 {
            (BigInt::one(), BigInt::from(k))
        } else {
            (BigInt::from(-1), k2.clone())
        };
        return Split {
            t: p.clone(),
            p,
            q,
            b: BigInt::from(2 * lo + 1),
        };
    }
    let mid = lo + (hi - lo) / 2;
    let (l, r) = join(|| split_arctan(lo, mid, k, k2), || split_arctan(mid, hi, k, k2));
    Split {
        t: &r.b * &r.q * &l.t + &l.b * &l.p * &r.t,
        p: l.p * r.p,
        q: l.q * r.q,
        b: l.b * r.b,
    }
}

#[cfg(feature = "parallel")]
fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    rayon::join(a, b)
}

#[cfg(not(feature = "parallel"))]
fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA,
    B: FnOnce() -> RB,
{
    (a(), b())
}

/// `π = 16·arctan(1/5) − 4·arctan(1/239)`.
fn pi_machin(bits: u32) -> BigRational {
    let a = arctan_inv(5, bits + 6);
    let b = arctan_inv(239, bits + 6);
    BigRational::from_integer(16.into()) * a - BigRational::from_integer(4.into()) * b
}

/// `π = 4·arctan(1/2) + 4·arctan(1/3)`.
fn pi_euler(bits: u32) -> BigRational {
    let a = arctan_inv(2, bits + 6);
    let b = arctan_inv(3, bits + 6);
    BigRational::from_integer(4.into()) * (a + b)
}

/// π to `digits` significant digits, cross-checked by a second formula.
pub fn compute_pi(digits: usize) -> Result<PiReference> {
    compute_pi_with_limit(digits, DEFAULT_MAX_PI_DIGITS)
}

pub fn compute_pi_with_limit(digits: usize, max_digits: usize) -> Result<PiReference> {
    if digits == 0 {
        return Err(Error::Domain("pi digits must be positive".into()));
    }
    if digits > max_digits {
        return Err(Error::BudgetExceeded(format!(
            "{digits} pi digits requested, limit is {max_digits}"
        )));
    }
    let bits = bits_for_decimal_digits(digits);
    let (a, b) = join(|| pi_machin(bits), || pi_euler(bits));
    let diff = (&a - &b).abs();
    let working = decimal_digits_for_bits(bits);
    let agreement_digits = if diff.is_zero() {
        working
    } else {
        // π has one integer digit, so agreed significant digits equal the
        // count of agreeing decimals plus one.
        ((-floor_log10(&diff) - 1).max(0) as usize + 1).min(working)
    };
    if agreement_digits < digits {
        return Err(Error::AgreementFailure {
            agreed: agreement_digits,
            requested: digits,
        });
    }
    Ok(PiReference {
        digits,
        value: BigFloat::from_rational(&a, bits),
        agreement_digits,
    })
}

/// π correctly rounded from a value accurate far beyond `precision` bits.
/// Memoized per precision, so repeated calls are bit-identical.
pub fn pi_at_bits(precision: u32) -> BigFloat {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigFloat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&precision) {
        return v.clone();
    }
    let exact = pi_machin(precision + 64);
    let v = BigFloat::from_rational(&exact, precision);
    cache.lock().unwrap().insert(precision, v.clone());
    v
}

/// Correctly rounded `√x` at `precision` bits (integer Newton iteration on a
/// scaled value, then one rounding).
pub fn sqrt_big(x: &BigRational, precision: u32) -> Result<BigFloat> {
    if x.is_negative() {
        return Err(Error::Domain(format!("square root of negative value {x}")));
    }
    if x.is_zero() {
        return Ok(BigFloat::zero(precision));
    }
    let num: &BigUint = x.numer().magnitude();
    let den: &BigUint = x.denom().magnitude();
    // Choose an even scale 2k so that floor(x·4^k) has at least
    // 2(precision+2) bits; its square root then has precision+2 bits.
    let want = 2 * (precision as i64 + 2) + 2;
    let k = ((want - num.bits() as i64 + den.bits() as i64 + 1) / 2).max(0);
    let scaled_num = num << (2 * k) as usize;
    let (floor, rem) = scaled_num.div_rem(den);
    let root = floor.sqrt();
    let sticky = !rem.is_zero() || &root * &root != floor;
    Ok(BigFloat::from_parts(
        false,
        root,
        -k,
        sticky,
        precision,
        Rounding::NearestEven,
    ))
}

/// `sin(πα)` by argument reduction to `[0, 1/4]` and a Taylor series.
pub fn sin_pi(alpha: &BigRational, precision: u32) -> BigFloat {
    let wp = precision + 32;
    // Reduce into [0, 2), then use sin(π(1+y)) = -sin(πy) and symmetry.
    let two = BigRational::from_integer(2.into());
    let one = BigRational::one();
    let mut y = alpha - (alpha / &two).floor() * &two;
    let mut negate = false;
    if y >= one {
        y -= &one;
        negate = true;
    }
    if y > BigRational::new(1.into(), 2.into()) {
        y = &one - &y;
    }
    let quarter = BigRational::new(1.into(), 4.into());
    let pi = pi_at_bits(wp);
    let value = if y <= quarter {
        let theta = pi.mul(&BigFloat::from_rational(&y, wp));
        taylor_sin(&theta, wp)
    } else {
        let z = BigRational::new(1.into(), 2.into()) - y;
        let theta = pi.mul(&BigFloat::from_rational(&z, wp));
        taylor_cos(&theta, wp)
    };
    let value = value.with_precision(precision);
    if negate {
        value.neg()
    } else {
        value
    }
}

/// Alternating series with terms decreasing in magnitude (|θ| < 1), so the
/// truncation error is below the first omitted term.
fn taylor_series(theta: &BigFloat, first: BigFloat, start: u64, wp: u32) -> BigFloat {
    let theta2 = theta.mul(theta);
    let eps = BigFloat::pow2(-(wp as i64) - 4, wp);
    let mut term = first;
    let mut sum = term.clone();
    let mut k = start;
    loop {
        term = term
            .mul(&theta2)
            .mul_ratio(&BigInt::from(-1), &BigInt::from((k + 1) * (k + 2)));
        k += 2;
        if term.abs() < eps {
            return sum;
        }
        sum = sum.add(&term);
    }
}

fn taylor_sin(theta: &BigFloat, wp: u32) -> BigFloat {
    taylor_series(theta, theta.clone(), 1, wp)
}

fn taylor_cos(theta: &BigFloat, wp: u32) -> BigFloat {
    taylor_series(theta, BigFloat::one(wp), 0, wp)
}

/// Numeric value of a `sin(πα)` constant.
pub fn eval_surd(s: &SurdConstant, precision: u32) -> BigFloat {
    let wp = precision + 32;
    let sqrt = |x: &BigRational| sqrt_big(x, wp).expect("tabulated radicands are positive");
    let value = match s.kind {
        SurdKind::One | SurdKind::Half => BigFloat::from_rational(&s.rational_part, wp),
        SurdKind::SimpleSurd | SurdKind::ScaledSurdSum => {
            let mut acc = BigFloat::from_rational(&s.rational_part, wp);
            for t in &s.radicands {
                let root = sqrt(&t.radicand);
                acc = acc.add(&root.mul_ratio(t.coefficient.numer(), t.coefficient.denom()));
            }
            acc
        }
        SurdKind::NestedSurd => {
            let outer = &s.radicands[0];
            let inner = s.inner.as_ref().expect("nested surd has an inner term");
            let inner_val = sqrt(&inner.radicand).mul_ratio(inner.coefficient.numer(), inner.coefficient.denom());
            let radicand = BigFloat::from_rational(&outer.radicand, wp).add(&inner_val);
            let root = radicand.sqrt();
            BigFloat::from_rational(&s.rational_part, wp)
                .add(&root.mul_ratio(outer.coefficient.numer(), outer.coefficient.denom()))
        }
        SurdKind::NumericOnly => sin_pi(&s.alpha.value(), wp),
    };
    value.with_precision(precision)
}

/// Direct numeric `sin(πα)`, independent of the surd table.
pub fn sin_pi_alpha(alpha: RationalAlpha, precision: u32) -> BigFloat {
    sin_pi(&alpha.value(), precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::sin_pi_rational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    const PI_50: &str = "3.1415926535897932384626433832795028841971693993751";

    #[test]
    fn pi_ten_digits() {
        let p = compute_pi(10).unwrap();
        assert_eq!(p.to_decimal_string(), "3.141592654");
        assert!(p.agreement_digits >= 10);
    }

    #[test]
    fn pi_fifty_digits_match_embedded_string() {
        let p = compute_pi(50).unwrap();
        assert!(p.agreement_digits >= 50);
        assert_eq!(p.to_decimal_string(), PI_50);
    }

    #[test]
    fn pi_rejects_zero_and_oversized_requests() {
        assert!(matches!(compute_pi(0), Err(Error::Domain(_))));
        assert!(matches!(compute_pi_with_limit(20, 10), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn pi_at_bits_is_deterministic() {
        assert_eq!(pi_at_bits(300), pi_at_bits(300));
        assert_eq!(pi_at_bits(53).to_f64(), std::f64::consts::PI);
    }

    #[test]
    fn sqrt_values() {
        for bits in [8, 64, 256, 1000] {
            assert_eq!(sqrt_big(&q(4, 1), bits).unwrap().to_rational(), q(2, 1));
        }
        assert_eq!(sqrt_big(&q(9, 4), 53).unwrap().to_f64(), 1.5);
        let r = sqrt_big(&q(2, 1), 256).unwrap();
        let err = (r.to_rational() * r.to_rational() - q(2, 1)).abs();
        assert!(err < BigFloat::pow2(-250, 64).to_rational());
        assert!(matches!(sqrt_big(&q(-1, 1), 64), Err(Error::Domain(_))));
        assert_eq!(sqrt_big(&q(2, 1), 53).unwrap().to_f64(), 2f64.sqrt());
    }

    #[test]
    fn nested_surd_self_check() {
        let s5 = sqrt_big(&q(5, 1), 300).unwrap();
        let inner = BigFloat::from_i64(10, 300).sub(&s5.mul_int(&2.into()));
        let r = inner.sqrt().with_precision(256);
        let back = r
            .mul(&r)
            .with_precision(600)
            .add(&s5.mul_int(&2.into()).with_precision(600));
        let err = back.sub(&BigFloat::from_i64(10, 600)).abs();
        assert!(err < BigFloat::pow2(-248, 64), "{err:?}");
    }

    #[test]
    fn sqrt_refinement_keeps_leading_digits() {
        let lo = sqrt_big(&q(3, 1), 128).unwrap().to_decimal_string(30);
        let hi = sqrt_big(&q(3, 1), 256).unwrap().to_decimal_string(30);
        assert_eq!(lo, hi);
    }

    #[test]
    fn sine_matches_f64() {
        for (p, d) in [(1, 7), (3, 8), (5, 6), (1, 2), (11, 12), (7, 5)] {
            let v = sin_pi(&q(p, d), 60).to_f64();
            let expect = (std::f64::consts::PI * p as f64 / d as f64).sin();
            assert!((v - expect).abs() < 1e-15, "{p}/{d}: {v} vs {expect}");
        }
    }

    #[test]
    fn surds_match_direct_sine() {
        for (p, d) in [
            (1, 2),
            (1, 3),
            (1, 4),
            (1, 5),
            (1, 6),
            (1, 10),
            (3, 10),
            (2, 5),
            (2, 3),
            (4, 5),
        ] {
            let alpha = RationalAlpha::new(p, d).unwrap();
            for bits in [128u32, 256] {
                let surd = eval_surd(&sin_pi_rational(alpha), bits);
                let direct = sin_pi_alpha(alpha, bits);
                let err = surd.sub(&direct).abs();
                assert!(err <= BigFloat::pow2(4 - bits as i64, 64), "alpha={alpha} bits={bits}");
            }
        }
        assert_eq!(
            eval_surd(&sin_pi_rational(RationalAlpha::new(1, 2).unwrap()), 64).to_f64(),
            1.0
        );
    }
}
