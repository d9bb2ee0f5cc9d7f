//! Compensated floating-point partial sums.

use num_traits::ToPrimitive;

use crate::bigfloat::BigFloat;
use crate::series::TermRule;

/// Neumaier's variant of Kahan summation over [`BigFloat`]. Every operation
/// rounds to nearest, so `(sum - t) + x` recovers each addition's error
/// exactly.
#[derive(Clone, Debug)]
pub struct CompensatedSum {
    sum: BigFloat,
    carry: BigFloat,
}

impl CompensatedSum {
    pub fn new(precision: u32) -> Self {
        CompensatedSum {
            sum: BigFloat::zero(precision),
            carry: BigFloat::zero(precision),
        }
    }

    pub fn add(&mut self, x: &BigFloat) {
        let t = self.sum.add(x);
        let err = if self.sum.abs() >= x.abs() {
            self.sum.sub(&t).add(x)
        } else {
            x.sub(&t).add(&self.sum)
        };
        self.carry = self.carry.add(&err);
        self.sum = t;
    }

    pub fn value(&self) -> BigFloat {
        self.sum.add(&self.carry)
    }
}

/// Neumaier summation in native doubles.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedF64 {
    sum: f64,
    carry: f64,
}

impl CompensatedF64 {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `Σ_{m<n} rule.term(m)` with terms generated by the ratio recurrence at
/// `precision` bits (one rounding per step) and summed with compensation.
///
/// At 53 bits the work runs in native `f64`; the result is the same kind of
/// value either way.
pub fn partial_sum_float(rule: &TermRule, n: u64, precision: u32) -> BigFloat {
    assert!(precision >= 53, "partial_sum_float needs at least 53 bits");
    if precision == 53 {
        return BigFloat::from_f64(partial_sum_f64(rule, n), 53);
    }
    let first = rule.term(0);
    let mut term = BigFloat::from_rational(&first, precision);
    let mut acc = CompensatedSum::new(precision);
    for m in 0..n {
        acc.add(&term);
        if m + 1 < n {
            let (p, q) = rule.ratio_factors(m);
            term = term.mul_ratio(&p, &q);
        }
    }
    acc.value()
}

/// Double-precision version of [`partial_sum_float`].
pub fn partial_sum_f64(rule: &TermRule, n: u64) -> f64 {
    f64_terms(rule, 0, n)
        .fold(CompensatedF64::default(), |mut acc, t| {
            acc.add(t);
            acc
        })
        .value()
}

/// Terms `start..end` of a rule in double precision, seeded from the exact
/// term at `start`.
pub fn f64_terms(rule: &TermRule, start: u64, end: u64) -> impl Iterator<Item = f64> + '_ {
    let mut term = BigFloat::from_rational(&rule.term(start), 53).to_f64();
    (start..end).map(move |m| {
        let current = term;
        let (p, q) = rule.ratio_factors(m);
        let ratio = p.to_f64().unwrap_or(f64::NAN) / q.to_f64().unwrap_or(f64::NAN);
        term *= ratio;
        current
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{RationalAlpha, SeriesSpec};
    use crate::summation::exact::partial_sum_exact;
    use num_traits::Signed;

    fn rule(p: u64, q: u64, a: i64, b: i64, c: i64) -> TermRule {
        SeriesSpec::new(RationalAlpha::new(p, q).unwrap(), a, b, c)
            .unwrap()
            .rule()
    }

    #[test]
    fn single_term_is_exact_when_representable() {
        let r = rule(1, 2, -1, -1, 0);
        assert_eq!(partial_sum_float(&r, 1, 128).to_f64(), 4.0);
        assert_eq!(partial_sum_float(&r, 1, 53).to_f64(), 4.0);
    }

    #[test]
    fn compensation_recovers_small_addends() {
        let mut acc = CompensatedF64::default();
        acc.add(1.0);
        for _ in 0..10 {
            acc.add(1e-16);
        }
        assert_eq!(acc.value(), 1.0 + 1e-15);
    }

    #[test]
    fn within_stated_bound_of_exact() {
        let n = 2000u64;
        for r in [rule(1, 2, 0, 0, 1), rule(1, 5, -1, -1, 0), rule(2, 9, 1, -2, 3)] {
            let exact = partial_sum_exact(&r, n);
            for bits in [53u32, 128] {
                let approx = partial_sum_float(&r, n, bits).to_rational();
                let tol = BigFloat::pow2(8 - bits as i64, 64).to_rational()
                    * num_rational::BigRational::from_integer(n.into())
                    * exact.clone();
                assert!((approx - &exact).abs() <= tol, "bits={bits}");
            }
        }
    }
}
