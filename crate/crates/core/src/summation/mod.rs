//! Evaluation of series values: exact partial sums, rigorous remainders,
//! compensated floating sums, and accelerated high-digit estimates.

pub mod accel;
pub mod exact;
pub mod float;
pub mod tail;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::series::{SeriesSpec, TermRule};

pub use accel::{accelerate, AccelerationScheme, MIN_PARTIALS};
pub use exact::{partial_sum_exact, partial_sum_naive, partial_sums_exact};
pub use float::{partial_sum_f64, partial_sum_float, CompensatedF64, CompensatedSum};
pub use tail::{
    dominating_shift, tail_bound, tail_bound_exact, tail_bound_rule, tail_bound_threshold, tail_bound_with,
    DEFAULT_G_MAX,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumMethod {
    DirectExact,
    DirectFloat,
    LevinU,
    WynnEpsilon,
}

impl SumMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SumMethod::DirectExact => "direct-exact",
            SumMethod::DirectFloat => "direct-float",
            SumMethod::LevinU => "levin-u",
            SumMethod::WynnEpsilon => "wynn-epsilon",
        }
    }

    pub fn is_rigorous(&self) -> bool {
        matches!(self, SumMethod::DirectExact | SumMethod::DirectFloat)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumMode {
    Rigorous,
    Accelerated,
}

impl std::str::FromStr for SumMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rigorous" => Ok(SumMode::Rigorous),
            "accelerated" => Ok(SumMode::Accelerated),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum SumValue {
    Exact(BigRational),
    Float(BigFloat),
}

impl SumValue {
    pub fn to_bigfloat(&self, precision: u32) -> BigFloat {
        match self {
            SumValue::Exact(r) => BigFloat::from_rational(r, precision),
            SumValue::Float(f) => f.with_precision(precision),
        }
    }
}

/// Value of a series together with how it was obtained. Only direct methods
/// carry a rigorous tail bound; accelerated ones carry a heuristic error.
#[derive(Clone, Debug)]
pub struct SumResult {
    pub value: SumValue,
    pub terms_used: u64,
    pub method: SumMethod,
    pub working_precision_bits: u32,
    pub rigorous_tail_bound: Option<BigFloat>,
    pub heuristic_error: Option<BigFloat>,
}

#[derive(Clone, Debug)]
pub struct SumOptions {
    pub mode: SumMode,
    /// Hard ceiling on the number of terms summed.
    pub max_terms: u64,
    /// Working precision; `None` picks `max(256, 4·digits + 64)`.
    pub precision_bits: Option<u32>,
    pub g_max: u64,
    /// Partial sums used by the first accelerated estimate; `None` picks
    /// `max(16, 2·digits)`. Each retry doubles it.
    pub initial_partials: Option<usize>,
    pub scheme: AccelerationScheme,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions {
            mode: SumMode::Accelerated,
            max_terms: 1_000_000,
            precision_bits: None,
            g_max: DEFAULT_G_MAX,
            initial_partials: None,
            scheme: AccelerationScheme::LevinU,
        }
    }
}

impl SumOptions {
    /// Rigorous for small digit counts, accelerated above six digits.
    pub fn for_digits(digits: usize) -> Self {
        SumOptions {
            mode: if digits > 6 {
                SumMode::Accelerated
            } else {
                SumMode::Rigorous
            },
            ..SumOptions::default()
        }
    }

    pub fn with_mode(mut self, mode: SumMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn working_precision(&self, digits: usize) -> u32 {
        let floor = 4 * digits as u32 + 64;
        self.precision_bits.unwrap_or(floor.max(256)).max(4 * digits as u32)
    }
}

/// `10^-digits` as an exact rational.
pub(crate) fn ten_pow_neg(digits: usize) -> BigRational {
    BigRational::new(1.into(), num_traits::pow(BigInt::from(10), digits))
}

/// Sums a series to `digits` correct digits.
///
/// Rigorous mode returns an exact partial sum whose certified remainder is
/// below `10^-digits · min(1, |S_N|)`. Accelerated mode runs the selected
/// transform over exact partial sums and accepts the estimate once doubling
/// the number of partial sums moves it by less than `10^-digits` relative.
pub fn sum_to_digits(spec: &SeriesSpec, digits: usize, options: &SumOptions) -> Result<SumResult> {
    sum_rule_to_digits(&spec.rule(), digits, options)
}

pub fn sum_rule_to_digits(rule: &TermRule, digits: usize, options: &SumOptions) -> Result<SumResult> {
    if digits == 0 {
        return Err(Error::Domain("digits must be positive".into()));
    }
    match options.mode {
        SumMode::Rigorous => rigorous(rule, digits, options),
        SumMode::Accelerated => accelerated(rule, digits, options),
    }
}

fn rigorous(rule: &TermRule, digits: usize, options: &SumOptions) -> Result<SumResult> {
    let spec = &rule.spec;
    let threshold = tail_bound_threshold(spec, options.g_max)?;
    let start = threshold.saturating_sub(rule.offset).max(16);
    let tol = ten_pow_neg(digits);
    let one = BigRational::from_integer(1.into());
    let bound_at = |m: u64| -> Result<BigRational> { Ok(tail_bound_exact(spec, rule.offset + m, options.g_max)?.0) };
    let over_budget = |m: u64| -> Result<()> {
        if m > options.max_terms {
            return Err(Error::BudgetExceeded(format!(
                "rigorous sum to {digits} digits needs more than {} terms for {spec}",
                options.max_terms
            )));
        }
        Ok(())
    };

    // Rough magnitude from a double-precision sum; the exact check follows.
    let mut target_scale = {
        let approx = partial_sum_f64(rule, start.max(64)).abs();
        let approx = BigRational::from_float(approx * (1.0 - 1e-6)).unwrap_or_else(BigRational::zero);
        if approx.is_zero() || approx > one {
            one.clone()
        } else {
            approx
        }
    };
    let mut m = start;
    loop {
        let target = &tol * &target_scale;
        // Doubling search, then bisection for the smallest admissible count.
        let mut hi = m;
        while bound_at(hi)? > target {
            over_budget(hi)?;
            hi *= 2;
        }
        over_budget(hi)?;
        let mut lo = (hi / 2).max(start);
        if bound_at(lo)? <= target {
            hi = lo;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if bound_at(mid)? <= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let sum = partial_sum_exact(rule, hi);
        let (bound, _) = tail_bound_exact(spec, rule.offset + hi, options.g_max)?;
        let scale = if sum.abs() > one { one.clone() } else { sum.abs() };
        if !scale.is_zero() && bound <= &tol * &scale {
            return Ok(SumResult {
                value: SumValue::Exact(sum),
                terms_used: hi,
                method: SumMethod::DirectExact,
                working_precision_bits: options.working_precision(digits),
                rigorous_tail_bound: Some(BigFloat::from_rational_rounded(
                    &bound,
                    tail::BOUND_PRECISION,
                    crate::bigfloat::Rounding::Up,
                )),
                heuristic_error: None,
            });
        }
        // The magnitude guess was too optimistic; tighten and continue.
        target_scale = if scale.is_zero() {
            &target_scale / BigRational::from_integer(1024.into())
        } else {
            scale / BigRational::from_integer(2.into())
        };
        m = hi;
    }
}

/// Exact partial sums converted to `precision` bits.
fn float_partials(exact: &[BigRational], precision: u32) -> Vec<BigFloat> {
    exact.iter().map(|s| BigFloat::from_rational(s, precision)).collect()
}

/// Levin's transform loses roughly 1.7 bits per partial sum to cancellation,
/// so the partials are carried with two extra bits each.
fn transform_precision(precision: u32, partials: usize) -> u32 {
    precision + 2 * partials as u32
}

fn accelerated(rule: &TermRule, digits: usize, options: &SumOptions) -> Result<SumResult> {
    let precision = options.working_precision(digits);
    // Terms with negative shifts are summed exactly; the transform only sees
    // the regular positive tail.
    let head_len = rule.irregular_terms();
    let head: BigRational = (0..head_len).map(|m| rule.term(m)).sum();
    let regular = TermRule::new(rule.spec, rule.offset + head_len);
    let head_f = BigFloat::from_rational(&head, precision);

    let mut count = options
        .initial_partials
        .unwrap_or((2 * digits).max(16))
        .max(MIN_PARTIALS);
    let tol = BigFloat::from_rational(&ten_pow_neg(digits), 64);
    loop {
        let total = 2 * count as u64 + head_len;
        if total > options.max_terms {
            return Err(Error::BudgetExceeded(format!(
                "accelerated sum to {digits} digits needs more than {} terms for {}",
                options.max_terms, rule.spec
            )));
        }
        let exact = partial_sums_exact(&regular, 2 * count as u64);
        let partials = float_partials(&exact, transform_precision(precision, 2 * count));
        let (coarse, _) = accelerate(&partials[..count], options.scheme)?;
        let (fine, fine_err) = accelerate(&partials, options.scheme)?;
        let value = head_f.add(&fine).with_precision(precision);
        let shift = fine.sub(&coarse).abs();
        if shift <= value.abs().mul(&tol) {
            let heuristic = if shift > fine_err { shift } else { fine_err };
            return Ok(SumResult {
                value: SumValue::Float(value),
                terms_used: total,
                method: match options.scheme {
                    AccelerationScheme::LevinU => SumMethod::LevinU,
                    AccelerationScheme::WynnEpsilon => SumMethod::WynnEpsilon,
                },
                working_precision_bits: transform_precision(precision, 2 * count),
                rigorous_tail_bound: None,
                heuristic_error: Some(heuristic),
            });
        }
        count *= 2;
    }
}
