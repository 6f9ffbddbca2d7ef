//! Build an automaton straight from a rational function.
//!
//! The diagonal of 1/(1 − x − y) is the central binomial sequence C(2n, n).
//! Starting from the numerator/denominator pair, the engine closes the
//! orbit under per-digit section operators and emits a machine that maps
//! the base-p digits of n (least significant first) to C(2n, n) mod p^α.

use diagonal_automata::engine::{build_automaton, DiagonalProblem};
use diagonal_automata::poly::ModPoly;
use diagonal_automata::{EngineOptions, ModulusSpec};

fn main() {
    let modulus = ModulusSpec::new(3, 2).unwrap();
    let one = ModPoly::from_terms(modulus, 2, [(vec![0u32, 0u32], 1i64)]);
    // q = 1 - x - y
    let q = ModPoly::from_terms(
        modulus,
        2,
        [(vec![0, 0], 1i64), (vec![1, 0], -1), (vec![0, 1], -1)],
    );
    let problem = DiagonalProblem::full_diagonal(one, q).unwrap();
    let dfao = build_automaton(&problem, &EngineOptions::default()).unwrap();

    println!("central binomial C(2n, n) mod 9: {} states", dfao.num_states());
    let values: Vec<u64> = (0..16).map(|n| dfao.run(&[n]).unwrap()).collect();
    println!("C(2n, n) mod 9 for n = 0..15: {values:?}");

    // Spot check against exact values 1, 2, 6, 20, 70, 252, 924, ...
    let exact: [u64; 8] = [1, 2, 6, 20, 70, 252, 924, 3432];
    for (n, e) in exact.iter().enumerate() {
        assert_eq!(values[n], e % 9);
    }
    println!("matches the exact sequence on the verified prefix");
}
