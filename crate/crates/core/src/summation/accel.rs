//! Nonlinear sequence transformations for slowly converging partial sums.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};

/// Fewest partial sums [`accelerate`] accepts.
pub const MIN_PARTIALS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AccelerationScheme {
    LevinU,
    WynnEpsilon,
}

/// Extrapolated limit and a heuristic error: the gap between the last two
/// transformation columns.
pub fn accelerate(partials: &[BigFloat], scheme: AccelerationScheme) -> Result<(BigFloat, BigFloat)> {
    if partials.len() < MIN_PARTIALS {
        return Err(Error::InsufficientData {
            needed: MIN_PARTIALS,
            got: partials.len(),
        });
    }
    match scheme {
        AccelerationScheme::LevinU => levin_u(partials),
        AccelerationScheme::WynnEpsilon => wynn_epsilon(partials),
    }
}

/// Levin's u-transform with `β = 1` and remainder estimates
/// `ω_j = (j+1)·(s_j - s_{j-1})`:
///
/// ```text
/// L_k = Σ_j w_j s_j/ω_j / Σ_j w_j/ω_j,   w_j = (-1)^j C(k,j) (j+1)^{k-1}
/// ```
///
/// The common factor `(k+1)^{k-1}` cancels, leaving integer weights.
fn levin_u(partials: &[BigFloat]) -> Result<(BigFloat, BigFloat)> {
    let k = partials.len() - 1;
    let last = levin_column(partials, k)?;
    let prev = levin_column(&partials[..k], k - 1)?;
    let err = last.sub(&prev).abs();
    Ok((last, err))
}

fn levin_column(partials: &[BigFloat], k: usize) -> Result<BigFloat> {
    let precision = partials[0].precision();
    let mut num = BigFloat::zero(precision);
    let mut den = BigFloat::zero(precision);
    let mut binom = BigInt::from(1);
    for j in 0..=k {
        let term = if j == 0 {
            partials[0].clone()
        } else {
            partials[j].sub(&partials[j - 1])
        };
        if term.is_zero() {
            return Err(Error::NumericBreakdown(format!(
                "levin-u: partial sum {j} equals its predecessor"
            )));
        }
        let omega = term.mul_int(&BigInt::from(j as u64 + 1));
        let mut weight = &binom * num_traits::pow(BigInt::from(j as u64 + 1), k.saturating_sub(1));
        if j % 2 == 1 {
            weight = -weight;
        }
        let w = BigFloat::from_int(&weight, precision).div(&omega);
        num = num.add(&w.mul(&partials[j]));
        den = den.add(&w);
        binom = binom * BigInt::from((k - j) as u64) / BigInt::from(j as u64 + 1);
    }
    if den.is_zero() {
        return Err(Error::NumericBreakdown("levin-u: vanishing denominator".into()));
    }
    Ok(num.div(&den))
}

/// Wynn's ε-algorithm; the estimate is the deepest even column entry.
///
/// On logarithmically convergent input the gap between the last two even
/// columns badly understates the error, so the reported error is the larger
/// of that gap and the shift from the estimate built on the first half of
/// the partials.
fn wynn_epsilon(partials: &[BigFloat]) -> Result<(BigFloat, BigFloat)> {
    let (est, gap) = wynn_table(partials)?;
    let half = partials.len() / 2;
    if half < MIN_PARTIALS {
        return Ok((est, gap));
    }
    let (coarse, _) = wynn_table(&partials[..half])?;
    let shift = est.sub(&coarse).abs();
    let err = if shift > gap { shift } else { gap };
    Ok((est, err))
}

fn wynn_table(partials: &[BigFloat]) -> Result<(BigFloat, BigFloat)> {
    let precision = partials[0].precision();
    // `prev` holds column k-1, `cur` column k; column -1 is all zeros.
    let mut prev: Vec<BigFloat> = vec![BigFloat::zero(precision); partials.len() + 1];
    let mut cur: Vec<BigFloat> = partials.to_vec();
    let mut even_estimates = vec![partials[partials.len() - 1].clone()];
    let mut column = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for n in 0..cur.len() - 1 {
            let diff = cur[n + 1].sub(&cur[n]);
            let (hi, lo) = (cur[n + 1].abs(), cur[n].abs());
            let scale = if hi > lo { hi } else { lo };
            if diff.is_zero() || underflows(&diff, &scale, precision) {
                return Err(Error::NumericBreakdown(format!(
                    "wynn-epsilon: difference underflows in column {column}"
                )));
            }
            next.push(prev[n + 1].add(&BigFloat::one(precision).div(&diff)));
        }
        column += 1;
        prev = cur;
        cur = next;
        if column.is_multiple_of(2) {
            even_estimates.push(cur[cur.len() - 1].clone());
        }
    }
    let n = even_estimates.len();
    if n < 2 {
        return Err(Error::InsufficientData {
            needed: MIN_PARTIALS,
            got: partials.len(),
        });
    }
    let est = even_estimates[n - 1].clone();
    let err = est.sub(&even_estimates[n - 2]).abs();
    Ok((est, err))
}

fn underflows(diff: &BigFloat, scale: &BigFloat, precision: u32) -> bool {
    match (diff.top_bit(), scale.top_bit()) {
        (Some(d), Some(s)) => d < s - precision as i64,
        _ => false,
    }
}
