use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use rampi::pi_reference::sqrt_big;
use rampi::series::TermRule;
use rampi::summation::{partial_sum_naive, partial_sums_exact};
use rampi::{
    factorial, gamma_half, normalize_identity, partial_sum_exact, poch, verify_symmetry, RationalAlpha, SeriesSpec,
};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..40, 1i64..13).prop_map(|(n, d)| ratio(n, d))
}

fn alpha() -> impl Strategy<Value = RationalAlpha> {
    (2u64..=12)
        .prop_flat_map(|q| (1..q, Just(q)))
        .prop_map(|(p, q)| RationalAlpha::reduced(p, q).unwrap())
}

fn spec() -> impl Strategy<Value = SeriesSpec> {
    (alpha(), -3i64..=3, -3i64..=3, 0i64..=8)
        .prop_filter("convergent", |(_, a, b, c)| c - a - b >= 1)
        .prop_map(|(al, a, b, c)| SeriesSpec::new(al, a, b, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn poch_recurrence(z in rational(), n in -12i64..12) {
        if let (Ok(cur), Ok(next)) = (poch(&z, n), poch(&z, n + 1)) {
            prop_assert_eq!(next, cur * (&z + BigRational::from_integer(n.into())));
        }
    }

    #[test]
    fn poch_composition(z in rational(), n in -8i64..8, m in -8i64..8) {
        let shifted = &z + BigRational::from_integer(n.into());
        if let (Ok(x), Ok(y), Ok(xy)) = (poch(&z, n), poch(&shifted, m), poch(&z, n + m)) {
            prop_assert_eq!(x * y, xy);
        }
    }

    #[test]
    fn poch_inversion(z in rational(), n in 1i64..12) {
        let back = &z - BigRational::from_integer(n.into());
        if let (Ok(x), Ok(y)) = (poch(&z, -n), poch(&back, n)) {
            prop_assert!((x * y).is_one());
        }
    }

    #[test]
    fn symmetry(s in spec()) {
        prop_assert!(verify_symmetry(&[s]));
    }

    #[test]
    fn positivity_past_negative_shifts(s in spec(), extra in 0u64..60) {
        let n = s.negative_shift_terms() + extra;
        prop_assert!(s.term(n) > BigRational::zero());
    }

    #[test]
    fn normalization_is_a_rewrite(
        s in spec(),
        extra_head in 0u64..3,
        num in 1i64..50,
        den in 1i64..50,
        n_extra in 0u64..40,
    ) {
        let head_terms = s.negative_shift_terms() + extra_head;
        let scale = ratio(num, den);
        let id = normalize_identity(&s, &scale, head_terms).unwrap();
        let n = head_terms + n_extra;
        let tail: BigRational = (0..n - head_terms).map(|m| id.tail_term(m)).sum();
        prop_assert_eq!(&scale * partial_sum_exact(&s.rule(), n), &id.head + tail);
    }

    #[test]
    fn half_alpha_closed_form_via_gamma(a in -3i64..=3, b in -3i64..=3, c in 0i64..=8) {
        prop_assume!(c - a - b >= 1);
        let s = SeriesSpec::new(RationalAlpha::new(1, 2).unwrap(), a, b, c).unwrap();
        // Γ(a+1/2)Γ(b+1/2)(c-a-b-1)! / (Γ(c-a+1/2)Γ(c-b+1/2)); the √π factors cancel.
        let g = |n: i64| gamma_half(n).coefficient;
        let fact = BigRational::from_integer(BigInt::from(factorial((c - a - b - 1) as u64)));
        let via_gamma = g(a) * g(b) * fact / (g(c - a) * g(c - b));
        prop_assert_eq!(s.rhs_constant().rational_part, via_gamma);
    }

    #[test]
    fn sqrt_refinement_is_stable(num in 1i64..10_000, den in 1i64..10_000, bits in 64u32..400) {
        let x = ratio(num, den);
        let coarse = sqrt_big(&x, bits).unwrap();
        let fine = sqrt_big(&x, 2 * bits).unwrap();
        prop_assert!(coarse.sub(&fine).abs() <= coarse.ulp());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn binary_splitting_matches_naive(s in spec(), n in 1u64..=2000) {
        prop_assert_eq!(partial_sum_exact(&s.rule(), n), partial_sum_naive(&s.rule(), n));
    }
}

#[test]
fn half_gamma_reflection() {
    for n in 0..40i64 {
        let product = gamma_half(n).coefficient * gamma_half(-n).coefficient;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(product, BigRational::from_integer(sign.into()), "n={n}");
    }
}

#[test]
fn half_poch_is_central_binomial_ratio() {
    let half = ratio(1, 2);
    for n in 0..60u64 {
        let expect = BigRational::new(
            BigInt::from(factorial(2 * n)),
            BigInt::from(factorial(n)) << (2 * n) as usize,
        );
        assert_eq!(poch(&half, n as i64).unwrap(), expect, "n={n}");
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let s = SeriesSpec::new(RationalAlpha::new(3, 8).unwrap(), 2, -1, 4).unwrap();
    let rule = TermRule::new(s, 1);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                let exact = partial_sum_exact(&rule, 6000);
                let acc = rampi::sum_to_digits(&s, 30, &rampi::SumOptions::default()).unwrap();
                (exact, acc.value.to_bigfloat(acc.working_precision_bits).to_rational())
            })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn prefix_sums_agree_with_split_sums() {
    let s = SeriesSpec::new(RationalAlpha::new(1, 6).unwrap(), -1, -1, 3).unwrap();
    let sums = partial_sums_exact(&s.rule(), 300);
    for n in [1usize, 17, 128, 300] {
        assert_eq!(sums[n - 1], partial_sum_exact(&s.rule(), n as u64));
    }
}
