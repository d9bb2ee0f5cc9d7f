//! Rising shifted factorials `(z)_n = Γ(z+n)/Γ(z)` at rational `z` and integer
//! `n` of either sign, plus exact half-integer gamma coefficients.
//!
//! Nothing here evaluates a gamma function: positive shifts are the product
//! `z(z+1)⋯(z+n-1)` and negative shifts the reciprocal `1/((z-1)⋯(z-n))`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Balanced product tree; keeps operands of similar size so multiplication
/// stays sub-quadratic on long products.
pub(crate) fn product<T>(factors: &[T]) -> T
where
    T: Clone + One,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    match factors.len() {
        0 => T::one(),
        1 => factors[0].clone(),
        n => {
            let (lo, hi) = factors.split_at(n / 2);
            &product(lo) * &product(hi)
        }
    }
}

/// Product of the integers `lo..=hi` (1 when the range is empty).
pub(crate) fn range_product(lo: u64, hi: u64) -> BigUint {
    if lo > hi {
        return BigUint::one();
    }
    if hi - lo < 16 {
        return (lo..=hi).fold(BigUint::one(), |acc, k| acc * k);
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

/// Exact `n!`.
pub fn factorial(n: u64) -> BigUint {
    range_product(1, n)
}

/// The rising shifted factorial `(z)_n` for any integer shift.
///
/// Fails with [`Error::Pole`] when `n < 0` and some `z - k` (1 ≤ k ≤ |n|)
/// vanishes.
pub fn poch(z: &BigRational, n: i64) -> Result<BigRational> {
    let (num, den) = poch_parts(z.numer(), z.denom(), n).ok_or_else(|| Error::Pole {
        z: z.to_string(),
        shift: n,
        k: pole_index(z.numer(), z.denom(), n),
    })?;
    Ok(BigRational::new(num, den))
}

/// `(u/v)_n` as an unreduced integer pair, or `None` at a pole.
pub(crate) fn poch_parts(u: &BigInt, v: &BigInt, n: i64) -> Option<(BigInt, BigInt)> {
    if n >= 0 {
        let factors: Vec<BigInt> = (0..n).map(|j| u + v * BigInt::from(j)).collect();
        return Some((product(&factors), num_traits::pow(v.clone(), n as usize)));
    }
    let m = n.unsigned_abs() as usize;
    let factors: Vec<BigInt> = (1..=m as i64).map(|k| u - v * BigInt::from(k)).collect();
    if factors.iter().any(|f| f.is_zero()) {
        return None;
    }
    Some((num_traits::pow(v.clone(), m), product(&factors)))
}

fn pole_index(u: &BigInt, v: &BigInt, n: i64) -> i64 {
    (1..=n.unsigned_abs() as i64)
        .find(|&k| (u - v * BigInt::from(k)).is_zero())
        .unwrap_or(0)
}

/// A half-integer gamma value as an exact rational multiple of `√π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfGamma {
    pub coefficient: BigRational,
}

/// `Γ(n + 1/2)` as a multiple of `√π`.
///
/// For `n ≥ 0` this is `(2n)!/(4^n n!)`; for `n < 0` it is
/// `Γ(1/2 - |n|) = (-1)^|n| 4^|n| |n|!/(2|n|)!`. Half-integers are never poles.
pub fn gamma_half(n: i64) -> HalfGamma {
    let m = n.unsigned_abs();
    let two_m_fact = BigInt::from(factorial(2 * m));
    let four_pow_m_fact = BigInt::from(factorial(m)) << (2 * m) as usize;
    let coefficient = if n >= 0 {
        BigRational::new(two_m_fact, four_pow_m_fact)
    } else {
        let c = BigRational::new(four_pow_m_fact, two_m_fact);
        if m % 2 == 1 {
            -c
        } else {
            c
        }
    };
    HalfGamma { coefficient }
}

impl HalfGamma {
    pub fn is_negative(&self) -> bool {
        self.coefficient.is_negative()
    }
}
