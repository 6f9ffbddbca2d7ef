//! Randomized algebraic and automaton invariants.

use diagonal_automata::analysis::{output_frequencies, verify_period, PeriodVerdict};
use diagonal_automata::dfao::{digits_lsd, State};
use diagonal_automata::modarith::ModulusSpec;
use diagonal_automata::{Dfao, ModPoly};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn modulus_strategy() -> impl Strategy<Value = ModulusSpec> {
    (prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], 1u32..=3)
        .prop_map(|(p, a)| ModulusSpec::new(p, a).unwrap())
}

fn poly_strategy(m: ModulusSpec, arity: usize) -> impl Strategy<Value = ModPoly> {
    prop::collection::vec(
        (
            prop::collection::vec(0u32..12, arity),
            0i64..(m.modulus() as i64),
        ),
        0..10,
    )
    .prop_map(move |terms| ModPoly::from_terms(m, arity, terms))
}

fn pair_strategy() -> impl Strategy<Value = (ModulusSpec, ModPoly, ModPoly)> {
    modulus_strategy().prop_flat_map(|m| {
        (poly_strategy(m, 2), poly_strategy(m, 2)).prop_map(move |(f, g)| (m, f, g))
    })
}

/// `f(x^p, y^p)`.
fn frobenius_substitute(f: &ModPoly) -> ModPoly {
    let p = f.modulus().p() as u32;
    f.map_exponents(|e| e.iter().map(|&x| x * p).collect())
}

fn small_poly(m: ModulusSpec, arity: usize) -> impl Strategy<Value = ModPoly> {
    prop::collection::vec(
        (
            prop::collection::vec(0u32..4, arity),
            0i64..(m.modulus() as i64),
        ),
        0..5,
    )
    .prop_map(move |terms| ModPoly::from_terms(m, arity, terms))
}

fn all_digit_pairs(p: u64) -> impl Iterator<Item = [u64; 2]> {
    (0..p).flat_map(move |a| (0..p).map(move |b| [a, b]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Every polynomial decomposes as f = Σ_d x^d · (Λ_d f)(x^p).
    #[test]
    fn cartier_operators_decompose_the_identity((m, f, _) in pair_strategy()) {
        let mut sum = ModPoly::zero(m, 2);
        for d in all_digit_pairs(m.p()) {
            let part = f.cartier(&d).unwrap();
            let lifted = frobenius_substitute(&part)
                .mul(&ModPoly::from_terms(m, 2, [(vec![d[0] as u32, d[1] as u32], 1i64)]));
            sum = sum.add(&lifted);
        }
        prop_assert_eq!(sum, f);
    }

    /// The difference-class bins partition the terms: Σ_r Δ_r f = f.
    #[test]
    fn difference_bins_partition((m, f, _) in pair_strategy()) {
        let mut sum = ModPoly::zero(m, 2);
        for r in 0..m.p() {
            sum = sum.add(&f.bin_by_difference(r).unwrap());
        }
        prop_assert_eq!(sum, f);
    }

    /// Λ_d is linear.
    #[test]
    fn cartier_is_linear((m, f, g) in pair_strategy()) {
        for d in all_digit_pairs(m.p()) {
            let lhs = f.add(&g).cartier(&d).unwrap();
            let rhs = f.cartier(&d).unwrap().add(&g.cartier(&d).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    /// Λ_d(h(x^p) · g) = h · Λ_d(g): p-th-power factors pass through.
    #[test]
    fn cartier_commutes_with_frobenius_factors((m, g, h) in pair_strategy()) {
        let hp = frobenius_substitute(&h);
        for d in all_digit_pairs(m.p()) {
            let lhs = hp.mul(&g).cartier(&d).unwrap();
            let rhs = h.mul(&g.cartier(&d).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    /// Freshman's dream over the prime field: f(x)^p = f(x^p) mod p.
    #[test]
    fn frobenius_is_the_p_th_power_mod_p(
        (m, f) in modulus_strategy().prop_flat_map(|m| {
            let m1 = m.reduce_to_prime();
            poly_strategy(m1, 2).prop_map(move |f| (m1, f))
        })
    ) {
        prop_assert_eq!(f.pow(m.p()), frobenius_substitute(&f));
    }

    /// Λ_r(g · f^{p^α}) = Λ_r(g) · f^{p^{α−1}} mod p^α: the extraction
    /// identity behind the prime-power diagonal step. Kept to small moduli
    /// and sparse inputs — the p^α-th power is expensive.
    #[test]
    fn power_extraction_identity(
        (m, f, g) in prop_oneof![
            Just(ModulusSpec::new(2, 2).unwrap()),
            Just(ModulusSpec::new(2, 3).unwrap()),
            Just(ModulusSpec::new(3, 2).unwrap()),
            Just(ModulusSpec::new(5, 1).unwrap()),
            Just(ModulusSpec::new(7, 1).unwrap()),
        ]
        .prop_flat_map(|m| {
            (small_poly(m, 2), small_poly(m, 2)).prop_map(move |(f, g)| (m, f, g))
        })
    ) {
        let p = m.p();
        let alpha = m.alpha();
        let f_hi = f.pow(p.pow(alpha));
        let f_lo = f.pow(p.pow(alpha - 1));
        for d in all_digit_pairs(p) {
            let lhs = g.mul(&f_hi).cartier(&d).unwrap();
            let rhs = g.cartier(&d).unwrap().mul(&f_lo);
            prop_assert_eq!(lhs, rhs);
        }
    }

    /// pow agrees with repeated multiplication.
    #[test]
    fn pow_matches_repeated_multiplication((m, f, _) in pair_strategy(), e in 0u64..6) {
        let mut acc = ModPoly::constant(m, 2, 1);
        for _ in 0..e {
            acc = acc.mul(&f);
        }
        prop_assert_eq!(f.pow(e), acc);
    }

    /// Base-p digit expansion round-trips.
    #[test]
    fn digit_expansion_round_trips(n in 0u64..u64::MAX / 2, p in 2u64..12) {
        let digits = digits_lsd(n, p);
        let back = digits.iter().rev().fold(0u64, |acc, &d| acc * p + d);
        prop_assert_eq!(back, n);
        prop_assert!(digits.last().map(|&d| d != 0).unwrap_or(n == 0));
    }
}

fn dfao_strategy() -> impl Strategy<Value = Dfao<u64>> {
    (2u64..=3, 2usize..=8).prop_flat_map(|(p, n)| {
        let nsyms = p as usize;
        prop::collection::vec(
            (0u64..4, prop::collection::vec(0usize..n, nsyms)),
            n..=n,
        )
        .prop_map(move |raw| {
            let states = raw
                .into_iter()
                .map(|(output, next)| State { output, next })
                .collect();
            Dfao::new(p, 1, states, 0).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Minimization preserves behavior and is idempotent.
    #[test]
    fn minimize_preserves_behavior_and_is_idempotent(d in dfao_strategy()) {
        let m1 = d.minimize();
        prop_assert_eq!(d.equivalent(&m1).unwrap(), None);
        let m2 = m1.minimize();
        prop_assert_eq!(m2.num_states(), m1.num_states());
        for n in 0..64u64 {
            prop_assert_eq!(d.run(&[n]).unwrap(), m1.run(&[n]).unwrap());
        }
    }

    /// Relabeling composes.
    #[test]
    fn relabel_composes(d in dfao_strategy()) {
        let f = |x: &u64| x + 1;
        let g = |x: &u64| x * 3;
        let once = d.relabel(|x| g(&f(x)));
        let twice = d.relabel(f).relabel(g);
        prop_assert_eq!(once.equivalent(&twice).unwrap(), None);
    }

    /// Output frequencies are a probability distribution over the universe.
    #[test]
    fn output_frequencies_sum_to_one(d in dfao_strategy()) {
        let universe: Vec<u64> = (0..4).collect();
        let report = output_frequencies(&d, &universe);
        let total = report
            .frequencies
            .iter()
            .fold(num_rational::BigRational::zero(), |acc, (_, f)| acc + f);
        prop_assert!(total.is_one());
        for (_, f) in &report.frequencies {
            prop_assert!(*f >= num_rational::BigRational::zero());
        }
    }

    /// verify_period's verdicts are checkable against direct runs.
    #[test]
    fn period_verdicts_match_direct_runs(d in dfao_strategy(), m in 1u64..5) {
        match verify_period(&d, m).unwrap() {
            PeriodVerdict::Periodic { threshold } => {
                for n in threshold..threshold + 200 {
                    prop_assert_eq!(d.run(&[n]).unwrap(), d.run(&[n + m]).unwrap());
                }
                if threshold > 0 {
                    let n = threshold - 1;
                    prop_assert_ne!(d.run(&[n]).unwrap(), d.run(&[n + m]).unwrap());
                }
            }
            PeriodVerdict::NotPeriodic { counterexample, .. } => {
                prop_assert_ne!(
                    d.run(&[counterexample]).unwrap(),
                    d.run(&[counterexample + m]).unwrap()
                );
            }
        }
    }
}
