//! Export an automaton as JSON and Graphviz DOT.
//!
//! The JSON document is byte-deterministic (two builds serialize
//! identically) and round-trips losslessly; the DOT output renders the
//! transition diagram with states labeled by their output residues.

use diagonal_automata::analysis::equivalent_from;
use diagonal_automata::{EngineOptions, ModulusSpec};
use sequence_corpus::build::build_for;
use sequence_corpus::document::AutomatonDocument;
use sequence_corpus::fixtures::find;

fn main() {
    let fixture = find("catalan").unwrap();
    let modulus = ModulusSpec::new(2, 2).unwrap();
    let options = EngineOptions::default();
    let (dfao, meta) = build_for(fixture, modulus, &options).unwrap();

    let doc = AutomatonDocument::from_automaton(&dfao, &meta);
    let json = doc.to_json();
    println!("--- JSON ({} bytes) ---", json.len());
    println!("{json}");

    let (dfao2, meta2) = build_for(fixture, modulus, &options).unwrap();
    let json2 = AutomatonDocument::from_automaton(&dfao2, &meta2).to_json();
    assert_eq!(json, json2, "builds are byte-deterministic");

    let parsed = AutomatonDocument::from_json(&json).unwrap();
    let restored = parsed.to_automaton().unwrap();
    assert!(equivalent_from(&dfao, &restored, 0).unwrap());
    println!("round-trip through JSON preserves the automaton exactly");

    println!("--- DOT ---");
    println!("{}", doc.to_dot());
}
