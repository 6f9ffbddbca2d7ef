//! Density of indices with a given p-adic valuation.
//!
//! Relabeling each residue by its valuation turns the frequency analysis
//! into a valuation census: for Motzkin numbers, one sixth of all indices
//! have M(n) ≡ 2 (mod 4) and one sixth have 4 | M(n).

use diagonal_automata::analysis::output_frequencies;
use diagonal_automata::{EngineOptions, ModulusSpec};
use sequence_corpus::build::build_for;
use sequence_corpus::fixtures::find;

fn main() {
    let p = 2u64;
    let alpha = 3u32;
    let fixture = find("motzkin").unwrap();
    let modulus = ModulusSpec::new(p, alpha).unwrap();
    let (dfao, _) = build_for(fixture, modulus, &EngineOptions::default()).unwrap();

    let valuation = |r: &u64| -> u64 {
        let mut r = *r;
        let mut v = 0;
        while v < alpha as u64 {
            if r % p != 0 {
                return v;
            }
            r /= p;
            v += 1;
        }
        alpha as u64 // residue 0: everything we can say is v >= alpha
    };
    let relabeled = dfao.relabel(valuation);
    let universe: Vec<u64> = (0..=alpha as u64).collect();
    let report = output_frequencies(&relabeled, &universe);

    println!("2-adic valuation of Motzkin numbers (from the mod-8 automaton):");
    for (v, freq) in &report.frequencies {
        if *v == alpha as u64 {
            println!("  valuation >= {alpha}: density {freq}");
        } else {
            println!("  valuation {v}: density {freq}");
        }
    }
}
