use num_traits::{One, Zero};
use proptest::prelude::*;
use qcf_core::expand::{c_fraction_expand, CExpansion, CTerm};
use qcf_core::scalar::{rat, ratio};
use qcf_core::{CFrac, Rational, Series};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let r = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=7));
        if !(nonzero && r.is_zero()) {
            return r;
        }
    }
}

/// `P_k Q_{k-1} - P_{k-1} Q_k = (-1)^{k-1} a_1 ... a_k` on 100 random fractions.
#[test]
fn determinant_identity_on_random_fractions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let terms: Vec<(Rational, Rational)> = (0..20)
            .map(|_| (random_rational(&mut rng, false), random_rational(&mut rng, false)))
            .collect();
        let cf = CFrac::from_terms(random_rational(&mut rng, false), terms.clone());
        let conv = cf.convergents(20).unwrap();
        let (mut p_prev, mut q_prev) = (Rational::zero(), Rational::one());
        let mut prod = Rational::one();
        for (k, c) in conv.iter().enumerate() {
            prod *= &terms[k].0;
            let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
            assert_eq!(&c.p * &q_prev - &p_prev * &c.q, sign * &prod, "k = {}", k + 1);
            p_prev = c.p.clone();
            q_prev = c.q.clone();
        }
    }
}

fn positive_terms() -> impl Strategy<Value = Vec<(Rational, Rational)>> {
    prop::collection::vec(((1i64..9, 1i64..5), (1i64..9, 1i64..5)), 3..16).prop_map(|v| {
        v.into_iter()
            .map(|((an, ad), (bn, bd))| (ratio(an, ad), ratio(bn, bd)))
            .collect()
    })
}

proptest! {
    #[test]
    fn equivalence_scaling_preserves_every_convergent(
        terms in positive_terms(),
        scales in prop::collection::vec((1i64..7, 1i64..7), 16),
    ) {
        let n = terms.len();
        let cf = CFrac::from_terms(rat(1), terms);
        let r: Vec<Rational> = scales.into_iter().map(|(a, b)| ratio(a, b)).collect();
        let scaled = cf.equivalence_scale(move |k| r[k - 1].clone());
        for k in 1..=n {
            prop_assert_eq!(cf.convergent_value(k).unwrap(), scaled.convergent_value(k).unwrap());
        }
        prop_assert_eq!(cf.eval_at_depth(n).unwrap(), scaled.eval_at_depth(n).unwrap());
    }

    #[test]
    fn odd_part_interleaves_convergents(terms in positive_terms()) {
        let n = terms.len();
        let cf = CFrac::from_terms(ratio(1, 2), terms);
        let odd = cf.odd_part().unwrap();
        prop_assert_eq!(odd.len(), Some((n - 1) / 2));
        prop_assert_eq!(odd.convergent_value(0).unwrap(), cf.convergent_value(1).unwrap());
        for k in 1..=(n - 1) / 2 {
            prop_assert_eq!(odd.convergent_value(k).unwrap(), cf.convergent_value(2 * k + 1).unwrap());
        }
    }

    #[test]
    fn c_fraction_round_trip(raw in prop::collection::vec(((-5i64..=5), 1i64..4, 1usize..4), 1..7)) {
        let terms: Vec<CTerm<Rational>> = raw
            .into_iter()
            .filter(|(n, _, _)| *n != 0)
            .map(|(n, d, power)| CTerm { coeff: ratio(n, d), power })
            .collect();
        let order = terms.iter().map(|t| t.power).sum::<usize>() + 4;
        let built = CExpansion { terms: terms.clone(), terminated: true, remaining_order: 0 }
            .to_cfrac(order)
            .limit_series(order)
            .unwrap();
        let back = c_fraction_expand(&built, terms.len() + 2).unwrap();
        prop_assert!(back.terminated);
        prop_assert_eq!(back.terms, terms);
    }

    #[test]
    fn formal_limit_is_stable_in_the_order(c in (-4i64..=4, 1i64..4), n in 5usize..25) {
        let c = ratio(c.0, c.1);
        let cf: CFrac<Series> = CFrac::new(Series::zero(n + 10), None, move |k| {
            (Series::monomial(c.clone(), k, n + 10), Series::one(n + 10))
        });
        let lo = cf.limit_series(n).unwrap();
        let hi = cf.limit_series(n + 10).unwrap();
        prop_assert_eq!(lo, hi.truncate(n));
    }
}

/// Greedy expansion of `G(q)/H(q)` recovers the partial numerators `q^k`.
#[test]
fn rogers_ramanujan_terms_are_rediscovered() {
    let order = 80;
    let rr_sum = |s: usize| {
        // sum_k q^{k^2 + s k} / (q; q)_k, with (q; q)_k expanded directly
        let mut acc = Series::zero(order);
        let mut k = 0;
        while k * k + s * k <= order {
            let mut den = Series::one(order);
            for j in 1..=k {
                den = &den * &(&Series::one(order) - &Series::monomial(rat(1), j, order));
            }
            acc = &acc + &Series::monomial(rat(1), k * k + s * k, order).try_div(&den).unwrap();
            k += 1;
        }
        acc
    };
    let ratio_gh = rr_sum(0).try_div(&rr_sum(1)).unwrap();
    let e = c_fraction_expand(&ratio_gh, 10).unwrap_err();
    let partial = e.partial().unwrap();
    assert_eq!(partial.terms.len(), 10);
    for (k, t) in partial.terms.iter().enumerate() {
        assert_eq!(t, &CTerm { coeff: rat(1), power: k + 1 });
    }
}
