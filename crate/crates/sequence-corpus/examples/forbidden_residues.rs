//! Which residues does a sequence never attain?
//!
//! Every congruence class the automaton can output appears on some walk
//! from the initial state, so the attained set is computed exactly — the
//! complement is a proof that those residues never occur (for n past the
//! fixture's validity threshold).

use diagonal_automata::analysis::attained_outputs;
use diagonal_automata::{EngineOptions, ModulusSpec};
use sequence_corpus::build::build_for;
use sequence_corpus::fixtures::find;

fn main() {
    for (name, p, alpha) in [
        ("catalan", 2u64, 2u32),
        ("catalan", 2, 5),
        ("motzkin", 2, 3),
        ("riordan", 2, 3),
        ("a109033", 2, 3),
        ("a159771", 2, 4),
    ] {
        let fixture = find(name).unwrap();
        let modulus = ModulusSpec::new(p, alpha).unwrap();
        let (dfao, meta) = build_for(fixture, modulus, &EngineOptions::default()).unwrap();
        let universe: Vec<u64> = (0..modulus.modulus()).collect();
        let report = attained_outputs(&dfao, &universe);
        println!(
            "{name} mod {}: forbidden residues {:?} (for n >= {})",
            modulus.modulus(),
            report.forbidden,
            meta.n0
        );
    }
}
