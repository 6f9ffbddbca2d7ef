//! Build the automaton for a sequence mod p^α and read terms off it.
//!
//! The automaton consumes the base-p digits of n, least significant first,
//! and the state reached outputs the n-th term of the sequence mod p^α.

use diagonal_automata::{EngineOptions, ModulusSpec};
use sequence_corpus::build::build_for;
use sequence_corpus::fixtures::find;

fn main() {
    let fixture = find("catalan").unwrap();
    let modulus = ModulusSpec::new(2, 2).unwrap();
    let (dfao, meta) = build_for(fixture, modulus, &EngineOptions::default()).unwrap();

    println!(
        "{} mod {}: {} states, valid for n >= {}",
        meta.fixture,
        modulus.modulus(),
        dfao.num_states(),
        meta.n0
    );

    print!("first Catalan numbers mod 4: ");
    for n in 0..16u64 {
        let value = if n < meta.n0 {
            meta.initial_terms[n as usize] // the automaton does not cover n = 0
        } else {
            dfao.run(&[n]).unwrap()
        };
        print!("{value} ");
    }
    println!();

    // The transition table is small enough to print whole.
    println!("state table (output; successors on digits 0, 1):");
    for (id, state) in dfao.states().iter().enumerate() {
        println!(
            "  q{id}: output {}, next [{}, {}]",
            state.output, state.next[0], state.next[1]
        );
    }
}
