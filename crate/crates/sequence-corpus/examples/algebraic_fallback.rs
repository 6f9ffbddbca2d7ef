//! Automaton for an algebraic series when the diagonal route is blocked.
//!
//! The central trinomial curve (x+1)(3x−1)y² + 1 has a y-derivative that
//! vanishes mod 2, so the rational-diagonal construction cannot start.
//! The builder falls back to a direct construction from the defining
//! polynomial: an Ore form g₀y + g₁yᵖ + … + g_h y^{p^h} ≡ 0 is computed,
//! and the automaton states are series remainders under that relation.

use diagonal_automata::christol::{ore_form, AlgebraicSeriesSpec};
use diagonal_automata::poly::ModPoly;
use diagonal_automata::{EngineOptions, ModulusSpec};
use sequence_corpus::build::{build_for, Route};
use sequence_corpus::fixtures::find;
use sequence_corpus::parser::parse_mod_poly;

fn format_univariate(p: &ModPoly) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (exps, c) in p.terms() {
        let e = exps.first().copied().unwrap_or(0);
        parts.push(match (c, e) {
            (1, 0) => "1".to_string(),
            (1, 1) => "x".to_string(),
            (1, _) => format!("x^{e}"),
            (_, 0) => format!("{c}"),
            (_, 1) => format!("{c} x"),
            _ => format!("{c} x^{e}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

fn main() {
    let fixture = find("central-trinomial").unwrap();
    let modulus = ModulusSpec::new(2, 1).unwrap();
    let (dfao, meta) = build_for(fixture, modulus, &EngineOptions::default()).unwrap();
    assert!(matches!(meta.route, Route::AlgebraicDirect));
    println!(
        "central-trinomial mod 2: direct algebraic route, {} state(s)",
        dfao.num_states()
    );
    let values: Vec<u64> = (0..16).map(|n| dfao.run(&[n]).unwrap()).collect();
    println!("  first values mod 2: {values:?} (central trinomial numbers are all odd)");

    // The same machinery exposes the Ore relation itself.
    let curve = parse_mod_poly("(x + 1) (3 x - 1) y^2 + 1", 2, modulus).unwrap();
    let prefix = fixture
        .oracle_terms(modulus, 64)
        .expect("recurrence oracle supplies the series prefix");
    let spec = AlgebraicSeriesSpec::new(curve, prefix).unwrap();
    let ore = ore_form(&spec).unwrap();
    println!("Ore form of (x+1)(3x−1)y² + 1 over F_2 (height {}):", ore.height());
    for i in 0..=ore.height() {
        println!(
            "  coefficient of y^{}: {}",
            2u64.pow(i as u32),
            format_univariate(ore.coefficient(i))
        );
    }
}
