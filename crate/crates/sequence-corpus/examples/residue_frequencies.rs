//! Exact asymptotic frequency of each residue.
//!
//! Base-p digits of a uniformly random n-digit number drive the automaton
//! as a Markov chain; stationary analysis of its bottom strongly connected
//! components yields exact rational densities.

use diagonal_automata::analysis::{output_frequencies, FrequencyMode};
use diagonal_automata::{EngineOptions, ModulusSpec};
use sequence_corpus::build::build_for;
use sequence_corpus::fixtures::find;

fn main() {
    for (name, p, alpha) in [("motzkin", 2u64, 1u32), ("motzkin", 2, 2), ("catalan", 2, 1)] {
        let fixture = find(name).unwrap();
        let modulus = ModulusSpec::new(p, alpha).unwrap();
        let (dfao, _) = build_for(fixture, modulus, &EngineOptions::default()).unwrap();
        let universe: Vec<u64> = (0..modulus.modulus()).collect();
        let report = output_frequencies(&dfao, &universe);
        let mode = match report.mode {
            FrequencyMode::Limit => "limit",
            FrequencyMode::Cesaro => "Cesàro mean",
        };
        println!("{name} mod {} ({mode}):", modulus.modulus());
        for (label, freq) in &report.frequencies {
            println!("  residue {label}: {freq}");
        }
    }
}
