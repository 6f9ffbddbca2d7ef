//! Residues that occur only finitely often, with the complete index list.
//!
//! For each output label, the set of n attaining it is a regular set of
//! digit strings; pumping decides finiteness, and finite sets are
//! enumerated exactly.

use diagonal_automata::analysis::{finitely_attained, Finiteness};
use diagonal_automata::{EngineOptions, ModulusSpec};
use sequence_corpus::build::build_for;
use sequence_corpus::fixtures::find;

fn main() {
    let fixture = find("catalan").unwrap();
    let modulus = ModulusSpec::new(2, 4).unwrap();
    let (dfao, _) = build_for(fixture, modulus, &EngineOptions::default()).unwrap();

    let universe: Vec<u64> = (0..16).collect();
    let report = finitely_attained(&dfao, &universe).unwrap();
    println!("Catalan numbers mod 16 (n >= 1):");
    for (label, finiteness) in &report.per_label {
        match finiteness {
            Finiteness::Infinite => println!("  {label}: attained infinitely often"),
            Finiteness::Finite(ns) if ns.is_empty() => println!("  {label}: never attained"),
            Finiteness::Finite(ns) => println!("  {label}: attained only at n in {ns:?}"),
        }
    }
}
