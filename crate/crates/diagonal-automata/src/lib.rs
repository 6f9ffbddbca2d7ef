//! Automata for sequence congruences modulo prime powers.
//!
//! The central construction: given a multivariate rational function `R/Q`
//! over `Z/p^α` whose diagonal coefficients form a combinatorial sequence,
//! build a finite automaton with output that reads the base-`p` digits of
//! `n` (least significant first) and emits the `n`-th coefficient mod `p^α`.
//! Around that sit analyses of the resulting automata (forbidden residues,
//! residues attained finitely often, exact output frequencies, periodicity
//! checks), a direct mod-`p` construction for algebraic series that the
//! diagonal route cannot reach, and Lucas-style digit-product evaluators.

pub mod analysis;
pub mod christol;
pub mod dfao;
pub mod engine;
pub mod lucas;
pub mod modarith;
pub mod poly;
pub mod series;

pub use analysis::{
    AttainmentReport, Finiteness, FinitenessReport, FrequencyMode, FrequencyReport,
    PeriodVerdict, PumpWitness,
};
pub use christol::{AlgebraicSeriesSpec, OreForm};
pub use dfao::Dfao;
pub use engine::{DiagonalProblem, EngineOptions, Variant};
pub use lucas::{LucasOutcome, LucasSpec, LucasTable};
pub use modarith::ModulusSpec;
pub use poly::ModPoly;
