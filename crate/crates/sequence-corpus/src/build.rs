//! From fixture to automaton: route each construction through the diagonal
//! engine, falling back to the direct algebraic-series construction when the
//! curve's linearization is not a unit.

use crate::fixtures::{Construction, Fixture, FixtureError};
use crate::parser::parse_mod_poly;
use diagonal_automata::christol::{christol_automaton, ore_form, AlgebraicSeriesSpec, ChristolError};
use diagonal_automata::engine::{build_automaton, furstenberg_transform, EngineError};
use diagonal_automata::modarith::{ArithError, ModulusSpec, Residue};
use diagonal_automata::{Dfao, DiagonalProblem, EngineOptions, ModPoly, Variant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("precondition failure: {0}")]
    PreconditionFailure(String),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Christol(#[from] ChristolError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Which construction produced an automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Diagonal engine on the fixture's rational function.
    Diagonal,
    /// Diagonal engine on the curve's diagonal representation.
    CurveDiagonal,
    /// Diagonal engine one power of `p` lower, labels doubled.
    HalvedCurveDiagonal,
    /// Direct mod-`p` construction from the algebraic equation.
    AlgebraicDirect,
}

/// Everything a consumer needs to interpret a built automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildMeta {
    pub fixture: &'static str,
    /// Reported modulus `p^α` of the output labels.
    pub modulus: ModulusSpec,
    pub route: Route,
    pub variant: Variant,
    /// Outputs are the sequence mod `p^α` for `n ≥ n0` only.
    pub n0: u64,
    /// True values of `a_0, …, a_{n0−1}` mod `p^α`, which the automaton does
    /// not report.
    pub initial_terms: Vec<Residue>,
}

/// Build the automaton computing `fixture` mod `p^α`.
///
/// The automaton reads base-`p` digits, least significant first, one digit
/// per partition block per step; outputs are residues mod the reported
/// modulus and are valid for `n ≥ meta.n0`.
pub fn build_for(
    fixture: &'static Fixture,
    modulus: ModulusSpec,
    options: &EngineOptions,
) -> Result<(Dfao<Residue>, BuildMeta), BuildError> {
    let meta = |route, n0: u64, m: ModulusSpec| BuildMeta {
        fixture: fixture.name,
        modulus: m,
        route,
        variant: options.variant,
        n0,
        initial_terms: fixture.prefix[..n0 as usize]
            .iter()
            .map(|&v| m.reduce(v))
            .collect(),
    };
    match fixture.construction {
        Construction::Diagonal { r, q, arity, partition } => {
            let rp = parse_mod_poly(r, arity, modulus).map_err(FixtureError::Parse)?;
            let qp = parse_mod_poly(q, arity, modulus).map_err(FixtureError::Parse)?;
            let part = partition.iter().map(|b| b.to_vec()).collect();
            let problem = DiagonalProblem::new(rp, qp, part)?;
            let d = build_automaton(&problem, options)?;
            Ok((d, meta(Route::Diagonal, fixture.n0, modulus)))
        }
        Construction::Curve { curve, shift } => {
            let p_xy = parse_mod_poly(curve, 2, modulus).map_err(FixtureError::Parse)?;
            let y_plus_c = ModPoly::var(modulus, 2, 1).add(&ModPoly::constant(modulus, 2, shift));
            let shifted = p_xy.substitute_var(1, &y_plus_c);
            match furstenberg_transform(&shifted, modulus) {
                Ok(problem) => {
                    let d = build_automaton(&problem, options)?;
                    Ok((d, meta(Route::CurveDiagonal, fixture.n0, modulus)))
                }
                Err(EngineError::DerivativeNotUnit) if modulus.alpha() == 1 => {
                    // The diagonal route needs a unit linearization; over the
                    // prime field the direct algebraic construction still
                    // applies, fed with oracle terms as the series prefix.
                    let prefix = fixture.oracle_terms(modulus, christol_prefix_len(&p_xy))?;
                    let spec = AlgebraicSeriesSpec::new(p_xy, prefix)?;
                    let ore = ore_form(&spec)?;
                    let d = christol_automaton(&ore, &spec)?;
                    Ok((d, meta(Route::AlgebraicDirect, 0, modulus)))
                }
                Err(EngineError::DerivativeNotUnit) => Err(BuildError::PreconditionFailure(
                    format!(
                        "{} mod {}: the curve's linearization is not a unit, and lifting the \
                         direct algebraic construction past the prime field is out of scope",
                        fixture.name,
                        modulus.modulus()
                    ),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Construction::HalvedCurve { curve, index_shift } => {
            if modulus.p() != 2 {
                return Err(BuildError::PreconditionFailure(format!(
                    "{}: the halved-curve representation only covers powers of 2",
                    fixture.name
                )));
            }
            if modulus.alpha() < 2 {
                return Err(BuildError::PreconditionFailure(format!(
                    "{}: labels are doubled, so the engine runs one power of 2 lower; \
                     request modulus 4 or higher",
                    fixture.name
                )));
            }
            let inner = modulus.with_alpha(modulus.alpha() - 1)?;
            let p_xy = parse_mod_poly(curve, 2, inner).map_err(FixtureError::Parse)?;
            let problem = furstenberg_transform(&p_xy, inner)?;
            // a(n) = 2·h(n − s): multiplying the numerator by (x y)^s delays
            // the diagonal by s positions.
            let xy_s = ModPoly::var(inner, 2, 0)
                .mul(&ModPoly::var(inner, 2, 1))
                .pow(index_shift as u64);
            let problem =
                DiagonalProblem::new(problem.r().mul(&xy_s), problem.q().clone(), vec![vec![0, 1]])?;
            let d = build_automaton(&problem, options)?;
            let d = d.relabel(|&o| 2 * o);
            Ok((d, meta(Route::HalvedCurveDiagonal, fixture.n0, modulus)))
        }
    }
}

/// Series precision for the direct algebraic construction: enough terms that
/// the linear-algebra certificate is checked well past every degree bound in
/// play.
fn christol_prefix_len(curve: &ModPoly) -> usize {
    let p = curve.modulus().p() as usize;
    let n = curve.per_var_degrees()[1] as usize; // y-degree bounds the Frobenius height
    let maxdeg = curve.degree().max(0) as usize;
    maxdeg + p.saturating_pow(n as u32 + 1).min(1 << 12) + 2
}
