//! A curated corpus of combinatorial sequences with automaton builds,
//! brute-force oracles, and serialization, on top of `diagonal-automata`.

pub mod build;
pub mod document;
pub mod fixtures;
pub mod oracle;
pub mod parser;
