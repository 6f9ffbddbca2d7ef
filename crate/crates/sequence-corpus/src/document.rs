//! On-disk form of a built automaton: a versioned JSON document with stable
//! key order, plus Graphviz DOT export.

use crate::build::{BuildMeta, Route};
use diagonal_automata::dfao::State;
use diagonal_automata::modarith::{ModulusSpec, Residue};
use diagonal_automata::{Dfao, Variant};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum DocumentError {
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),
    #[error("document is not a well-formed automaton: {0}")]
    Malformed(String),
}

/// Field order here is the serialized key order; do not reorder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonDocument {
    pub format_version: u32,
    pub p: u64,
    pub alpha: u32,
    /// Number of digit streams read in parallel (partition blocks).
    pub arity: usize,
    pub fixture: String,
    /// Outputs are sequence values only for `n ≥ validity_threshold`.
    pub validity_threshold: u64,
    /// True sequence values below the threshold.
    pub initial_terms: Vec<u64>,
    pub provenance: Provenance,
    pub initial: usize,
    pub states: Vec<DocumentState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub route: String,
    pub variant: String,
    pub engine_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentState {
    pub id: usize,
    pub output: u64,
    /// Successor ids indexed by symbol (digit tuple encoded radix-p).
    pub edges: Vec<usize>,
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::Diagonal => "diagonal",
        Route::CurveDiagonal => "curve-diagonal",
        Route::HalvedCurveDiagonal => "halved-curve-diagonal",
        Route::AlgebraicDirect => "algebraic-direct",
    }
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Standard => "standard",
        Variant::PostCartier => "post-cartier",
    }
}

impl AutomatonDocument {
    pub fn from_automaton(d: &Dfao<Residue>, meta: &BuildMeta) -> AutomatonDocument {
        AutomatonDocument {
            format_version: FORMAT_VERSION,
            p: meta.modulus.p(),
            alpha: meta.modulus.alpha(),
            arity: d.arity(),
            fixture: meta.fixture.to_string(),
            validity_threshold: meta.n0,
            initial_terms: meta.initial_terms.clone(),
            provenance: Provenance {
                route: route_name(meta.route).to_string(),
                variant: variant_name(meta.variant).to_string(),
                engine_version: env!("CARGO_PKG_VERSION").to_string(),
            },
            initial: d.initial(),
            states: d
                .states()
                .iter()
                .enumerate()
                .map(|(id, s)| DocumentState {
                    id,
                    output: s.output,
                    edges: s.next.clone(),
                })
                .collect(),
        }
    }

    pub fn to_automaton(&self) -> Result<Dfao<Residue>, DocumentError> {
        if self.format_version != FORMAT_VERSION {
            return Err(DocumentError::UnsupportedVersion(self.format_version));
        }
        for (i, s) in self.states.iter().enumerate() {
            if s.id != i {
                return Err(DocumentError::Malformed(format!(
                    "state ids must be 0..N in order; found {} at position {i}",
                    s.id
                )));
            }
        }
        let states = self
            .states
            .iter()
            .map(|s| State {
                output: s.output,
                next: s.edges.clone(),
            })
            .collect();
        Dfao::new(self.p, self.arity, states, self.initial)
            .map_err(|e| DocumentError::Malformed(e.to_string()))
    }

    pub fn modulus(&self) -> ModulusSpec {
        ModulusSpec::new(self.p, self.alpha).expect("document stores a valid modulus")
    }

    /// Pretty JSON with a trailing newline; byte-deterministic.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<AutomatonDocument, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError::Malformed(e.to_string()))
    }

    /// Graphviz DOT: one node per state labeled with its output, one edge
    /// per (state, symbol) labeled with the digit tuple, and a point-shaped
    /// entry marker into the initial state.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n");
        out.push_str("  entry [shape=point, label=\"\"];\n");
        for s in &self.states {
            out.push_str(&format!(
                "  q{} [shape=circle, label=\"{}\"];\n",
                s.id, s.output
            ));
        }
        out.push_str(&format!("  entry -> q{};\n", self.initial));
        let p = self.p as usize;
        for s in &self.states {
            for (sym, &to) in s.edges.iter().enumerate() {
                let mut digits = Vec::with_capacity(self.arity);
                let mut rem = sym;
                for _ in 0..self.arity {
                    digits.push(rem % p);
                    rem /= p;
                }
                let label = digits
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                out.push_str(&format!("  q{} -> q{} [label=\"{}\"];\n", s.id, to, label));
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::build_for;
    use crate::fixtures::find;
    use diagonal_automata::EngineOptions;

    fn doc(name: &str, p: u64, a: u32) -> (AutomatonDocument, Dfao<Residue>) {
        let f = find(name).unwrap();
        let (d, meta) = build_for(f, ModulusSpec::new(p, a).unwrap(), &EngineOptions::default())
            .unwrap();
        (AutomatonDocument::from_automaton(&d, &meta), d)
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let (doc1, d) = doc("catalan", 2, 2);
        let text = doc1.to_json();
        let doc2 = AutomatonDocument::from_json(&text).unwrap();
        assert_eq!(doc1, doc2);
        let d2 = doc2.to_automaton().unwrap();
        assert_eq!(d.equivalent(&d2).unwrap(), None);
    }

    #[test]
    fn key_order_is_stable() {
        let (doc1, _) = doc("catalan", 2, 1);
        let text = doc1.to_json();
        let keys = ["format_version", "\"p\"", "alpha", "arity", "fixture",
            "validity_threshold", "initial_terms", "provenance", "\"initial\"", "states"];
        let mut last = 0;
        for k in keys {
            let at = text.find(k).unwrap_or_else(|| panic!("missing key {k}"));
            assert!(at > last, "key {k} out of order");
            last = at;
        }
    }

    #[test]
    fn dot_output_has_nodes_edges_and_entry_marker() {
        let (doc1, d) = doc("catalan", 2, 1);
        let dot = doc1.to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("entry [shape=point"));
        assert!(dot.contains(&format!("entry -> q{};", d.initial())));
        assert_eq!(dot.matches("shape=circle").count(), d.num_states());
        assert_eq!(
            dot.matches(" -> ").count(),
            d.num_states() * d.num_symbols() + 1
        );
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let (mut doc1, _) = doc("catalan", 2, 1);
        doc1.states[0].edges[0] = 999;
        assert!(doc1.to_automaton().is_err());
        let (mut doc2, _) = doc("catalan", 2, 1);
        doc2.format_version = 99;
        assert!(matches!(
            doc2.to_automaton(),
            Err(DocumentError::UnsupportedVersion(99))
        ));
    }
}
