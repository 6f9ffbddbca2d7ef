//! A two-argument automaton: binomial coefficients mod p^α.
//!
//! C(n+k, k) is the coefficient of x^n y^k in 1/(1 − x − xy), so the
//! engine produces an automaton that reads the base-p digits of n and k
//! in lockstep and outputs C(n, k) mod p^α.

use diagonal_automata::{EngineOptions, ModulusSpec};
use sequence_corpus::build::build_for;
use sequence_corpus::fixtures::find;
use sequence_corpus::oracle::{binomial, pascal_rows};

fn main() {
    let fixture = find("binomial").unwrap();
    let modulus = ModulusSpec::new(2, 2).unwrap();
    let (dfao, _) = build_for(fixture, modulus, &EngineOptions::default()).unwrap();
    println!(
        "binomial mod 4: arity {}, {} states",
        dfao.arity(),
        dfao.num_states()
    );

    println!("Pascal's triangle mod 4 (rows 0..12):");
    for n in 0..12u64 {
        let row: Vec<u64> = (0..=n).map(|k| dfao.run(&[n, k]).unwrap()).collect();
        println!("  {row:?}");
    }

    let rows = pascal_rows(64, modulus);
    for n in 0..32u64 {
        for k in 0..32u64 {
            assert_eq!(dfao.run(&[n, k]).unwrap(), binomial(&rows, n, k));
        }
    }
    println!("automaton agrees with the exact triangle for all n, k < 32");
}
