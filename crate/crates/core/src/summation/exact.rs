//! Exact partial sums by binary splitting over the term-ratio recurrence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::series::TermRule;
use crate::shifted_factorial::poch_parts;

/// Ranges shorter than this are combined sequentially.
const PARALLEL_CUTOFF: u64 = 512;

struct Split {
    p: BigInt,
    q: BigInt,
    t: BigInt,
}

/// For `[lo, hi)`: `t/q = Σ_{k=lo}^{hi-1} Π_{j=lo}^{k-1} p(j)/q(j)` and
/// `p/q = Π_{j=lo}^{hi-1} p(j)/q(j)`.
fn split(rule: &TermRule, lo: u64, hi: u64) -> Split {
    if hi - lo == 1 {
        let (p, q) = rule.ratio_factors(lo);
        return Split { t: q.clone(), p, q };
    }
    let mid = lo + (hi - lo) / 2;
    let (l, r) = if hi - lo >= PARALLEL_CUTOFF {
        join(|| split(rule, lo, mid), || split(rule, mid, hi))
    } else {
        (split(rule, lo, mid), split(rule, mid, hi))
    };
    Split {
        t: &l.t * &r.q + &l.p * &r.t,
        p: l.p * r.p,
        q: l.q * r.q,
    }
}

#[cfg(feature = "parallel")]
fn join<A, B>(a: A, b: B) -> (Split, Split)
where
    A: FnOnce() -> Split + Send,
    B: FnOnce() -> Split + Send,
{
    rayon::join(a, b)
}

#[cfg(not(feature = "parallel"))]
fn join<A, B>(a: A, b: B) -> (Split, Split)
where
    A: FnOnce() -> Split,
    B: FnOnce() -> Split,
{
    (a(), b())
}

/// `Σ_{m=0}^{n-1} rule.term(m)`, exact. Integer products are kept unreduced
/// through the recursion and reduced once at the end, so the result does not
/// depend on how the range was split.
pub fn partial_sum_exact(rule: &TermRule, n: u64) -> BigRational {
    if n == 0 {
        return BigRational::zero();
    }
    let first = rule.term(0);
    let s = split(rule, 0, n);
    first * BigRational::new(s.t, s.q)
}

/// Exact partial sums `S_1, …, S_n` by accumulating the recurrence.
pub fn partial_sums_exact(rule: &TermRule, n: u64) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n as usize);
    if n == 0 {
        return out;
    }
    let mut term = rule.term(0);
    let mut sum = BigRational::zero();
    for m in 0..n {
        sum += &term;
        out.push(sum.clone());
        if m + 1 < n {
            let (p, q) = rule.ratio_factors(m);
            term *= BigRational::new(p, q);
        }
    }
    out
}

/// The same sum with every term built from its factor definition
/// `(α)_{a+k}(1-α)_{b+k}/(k!(c+k)!)` and no recurrence; a slow reference.
///
/// Each term is scaled to one common denominator by exact integer division,
/// so only the final result is reduced.
pub fn partial_sum_naive(rule: &TermRule, n: u64) -> BigRational {
    if n == 0 {
        return BigRational::zero();
    }
    let spec = &rule.spec;
    let (u, v) = (BigInt::from(spec.alpha().numer()), BigInt::from(spec.alpha().denom()));
    let w = &v - &u;
    let last = (rule.offset + n - 1) as i64;
    let pos = |shift: i64| (shift + last).max(0) as usize;
    let common = num_traits::pow(v.clone(), pos(spec.a()) + pos(spec.b()))
        * negative_part(&u, &v, spec.a()).abs()
        * negative_part(&w, &v, spec.b()).abs()
        * BigInt::from(factorial_big(last as u64) * factorial_big((spec.c() + last) as u64));
    let mut total = BigInt::zero();
    for k in rule.offset as i64..=last {
        let (na, da) = poch_parts(&u, &v, spec.a() + k).expect("non-integer alpha has no poles");
        let (nb, db) = poch_parts(&w, &v, spec.b() + k).expect("non-integer alpha has no poles");
        let den = da * db * BigInt::from(factorial_big(k as u64) * factorial_big((spec.c() + k) as u64));
        let (quot, rem) = num_integer::Integer::div_rem(&common, &den);
        debug_assert!(rem.is_zero());
        total += na * nb * quot;
    }
    BigRational::new(total, common)
}

/// `Π_{j=1}^{-m} (u - j v)` for `m < 0`, else 1.
fn negative_part(u: &BigInt, v: &BigInt, m: i64) -> BigInt {
    (1..=(-m).max(0)).fold(BigInt::from(1), |acc, j| acc * (u - v * j))
}

fn factorial_big(n: u64) -> num_bigint::BigUint {
    crate::shifted_factorial::factorial(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{RationalAlpha, SeriesSpec};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn rule(p: u64, d: u64, a: i64, b: i64, c: i64) -> TermRule {
        SeriesSpec::new(RationalAlpha::new(p, d).unwrap(), a, b, c)
            .unwrap()
            .rule()
    }

    #[test]
    fn small_partial_sums() {
        let r = rule(1, 2, 0, 0, 1);
        assert_eq!(partial_sum_exact(&r, 1), q(1, 1));
        assert_eq!(partial_sum_exact(&r, 2), q(9, 8));
        assert_eq!(partial_sum_exact(&r, 3), q(75, 64));
    }

    #[test]
    fn matches_naive_with_negative_shifts() {
        for r in [rule(1, 2, -2, -2, 0), rule(3, 7, 2, -3, 1), rule(1, 12, -1, 3, 5)] {
            for n in [1, 2, 3, 7, 64, 700] {
                assert_eq!(partial_sum_exact(&r, n), partial_sum_naive(&r, n));
            }
        }
    }

    #[test]
    fn offset_rules() {
        let spec = SeriesSpec::new(RationalAlpha::new(1, 2).unwrap(), -1, -1, 0).unwrap();
        let tail = TermRule::new(spec, 2);
        let full = spec.rule();
        assert_eq!(
            partial_sum_exact(&full, 52),
            partial_sum_exact(&full, 2) + partial_sum_exact(&tail, 50)
        );
    }

    #[test]
    fn accumulated_prefix_sums() {
        let r = rule(1, 3, -1, -1, 2);
        let sums = partial_sums_exact(&r, 40);
        for (i, s) in sums.iter().enumerate() {
            assert_eq!(*s, partial_sum_exact(&r, i as u64 + 1));
        }
    }
}
