//! The sequence registry: each fixture records how a combinatorial sequence
//! is realized by an automaton build (a curve root, a halved curve root, or
//! a rational-function diagonal), together with an independent oracle and
//! optional digit-product (Lucas) data.

use crate::oracle::{self, OracleError};
use crate::parser::{parse_int_poly, parse_mod_poly, IntPoly, ParseError};
use diagonal_automata::modarith::{ModulusSpec, Residue};
use diagonal_automata::LucasSpec;

/// How the automaton for a fixture is constructed.
///
/// Polynomial strings use the registry grammar; in bivariate curves the
/// first variable is the series variable `x` and the second (`y`) is the
/// unknown whose power-series root generates the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// `curve(x, f) = 0` with `f = shift + O(x)`; the sequence is the
    /// coefficients of `f`. Valid for `n ≥ 1` — the constant coefficient is
    /// carried as metadata rather than by the automaton.
    Curve { curve: &'static str, shift: i64 },
    /// A sequence that is even from index `index_shift` on: the stored curve
    /// defines the halved, shifted series `h` with `a(n) = 2·h(n −
    /// index_shift)` for `n ≥ n₀`. The automaton is built one power of 2
    /// lower and its labels are doubled, so the reported modulus `2^α` uses
    /// an engine run at `2^{α−1}`.
    HalvedCurve {
        curve: &'static str,
        index_shift: u32,
    },
    /// The diagonal `D_B(r/q)` along the given variable-set partition.
    Diagonal {
        r: &'static str,
        q: &'static str,
        arity: usize,
        partition: &'static [&'static [usize]],
    },
}

/// Data for a Lucas-style digit-product evaluation: the sequence is the
/// coefficient diagonal of `q^{-1/s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LucasData {
    pub q: &'static str,
    pub arity: usize,
    pub s: u64,
    pub partition: &'static [&'static [usize]],
}

/// Which brute-force oracle computes the fixture's terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// Solve the fixture's own curve coefficient by coefficient.
    CurveRecursion,
    /// The exact integer recurrence for central trinomial coefficients.
    TrinomialRecurrence,
    /// `Σ_k C(n,k)² C(n+k,k)²`.
    AperyZeta3Sum,
    /// `Σ_k C(n,k)² C(n+k,k)`.
    AperyZeta2Sum,
    /// Pascal's triangle; two-block fixture indexed by `(n, k)`.
    PascalTable,
}

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub oeis: &'static str,
    pub description: &'static str,
    pub construction: Construction,
    pub oracle: OracleKind,
    pub lucas: Option<LucasData>,
    /// Automaton outputs are trustworthy for `n ≥ n0` only; the true values
    /// below that live in `prefix`.
    pub n0: u64,
    /// Leading exact terms of the sequence, for display and self-validation.
    pub prefix: &'static [u64],
}

pub const FULL_DIAGONAL_4: &[&[usize]] = &[&[0, 1, 2, 3]];
pub const TWO_BLOCKS: &[&[usize]] = &[&[0], &[1]];

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "catalan",
        oeis: "A000108",
        description: "Catalan numbers: Dyck paths, binary trees",
        construction: Construction::Curve {
            curve: "x y^2 - y + 1",
            shift: 1,
        },
        oracle: OracleKind::CurveRecursion,
        lucas: None,
        n0: 1,
        prefix: &[1, 1, 2, 5, 14, 42, 132, 429],
    },
    Fixture {
        name: "motzkin",
        oeis: "A001006",
        description: "Motzkin numbers: lattice paths with flat steps",
        construction: Construction::Curve {
            curve: "x^2 y^2 + (x - 1) y + 1",
            shift: 1,
        },
        oracle: OracleKind::CurveRecursion,
        lucas: None,
        n0: 1,
        prefix: &[1, 1, 2, 4, 9, 21, 51, 127],
    },
    Fixture {
        name: "riordan",
        oeis: "A005043",
        description: "Riordan numbers",
        construction: Construction::Curve {
            curve: "x (x + 1) y^2 - (x + 1) y + 1",
            shift: 1,
        },
        oracle: OracleKind::CurveRecursion,
        lucas: None,
        n0: 1,
        prefix: &[1, 0, 1, 1, 3, 6, 15, 36],
    },
    Fixture {
        name: "directed-animals",
        oeis: "A005773",
        description: "Directed animals of size n",
        construction: Construction::Curve {
            curve: "(3 x - 1) y^2 - (3 x - 1) y + x",
            shift: 1,
        },
        oracle: OracleKind::CurveRecursion,
        lucas: None,
        n0: 1,
        prefix: &[1, 1, 2, 5, 13, 35, 96, 267],
    },
    Fixture {
        name: "hexagonal",
        oeis: "A002212",
        description: "Restricted hexagonal polyominoes of size n",
        construction: Construction::Curve {
            curve: "x y^2 + (x - 1) y - x + 1",
            shift: 1,
        },
        oracle: OracleKind::CurveRecursion,
        lucas: None,
        n0: 1,
        prefix: &[1, 1, 3, 10, 36, 137, 543, 2219],
    },
    Fixture {
        name: "a159769",
        oeis: "A159769",
        description: "Binary trees avoiding a fixed 6-leaf subtree",
        construction: Construction::Curve {
            curve: "(x - 2) x^2 y^2 + (2 x^2 - 2 x + 1) y + x - 1",
            shift: 1,
        },
        oracle: OracleKind::CurveRecursion,
        lucas: None,
        n0: 1,
        prefix: &[1, 1, 2, 5, 14, 41, 124, 384],
    },
    Fixture {
        name: "a159771",
        oeis: "A159771",
        description: "Binary trees avoiding a fixed 7-leaf subtree",
        construction: Construction::Curve {
            curve: "2 x^2 y^2 - (3 x^2 - 2 x + 1) y + x^2 - x + 1",
            shift: 1,
        },
        oracle: OracleKind::CurveRecursion,
        lucas: None,
        n0: 1,
        prefix: &[1, 1, 2, 5, 14, 41, 124, 385],
    },
    Fixture {
        name: "a029759",
        oeis: "A029759",
        description: "Permutations avoiding 3412 and 2143",
        construction: Construction::HalvedCurve {
            // root h with a(n) = 2·h(n−1) for n ≥ 2
            curve: "x (4 x - 1) (2 x - 1)^2 y^2 + (x + 1) (4 x - 1) (2 x - 1)^2 y \
                    + x (4 x^3 + 3 x^2 - 4 x + 1)",
            index_shift: 1,
        },
        oracle: OracleKind::CurveRecursion,
        lucas: None,
        n0: 2,
        prefix: &[1, 1, 2, 6, 22, 86, 340, 1340],
    },
    Fixture {
        name: "a032351",
        oeis: "A032351",
        description: "Permutations avoiding 2143 and 1324",
        construction: Construction::HalvedCurve {
            // root h with a(n) = 2·h(n−2) for n ≥ 3; a(2) = 2 is not covered
            curve: "(4 x^3 - 8 x^2 + 6 x - 1) y^2 + (8 x^3 - 12 x^2 + 8 x - 1) y \
                    + x (4 x^2 - 4 x + 3)",
            index_shift: 2,
        },
        oracle: OracleKind::CurveRecursion,
        lucas: None,
        n0: 3,
        prefix: &[1, 1, 2, 6, 22, 88, 366, 1552],
    },
    Fixture {
        name: "a109033",
        oeis: "A109033",
        description: "Permutations avoiding 1342 and 2143",
        construction: Construction::Curve {
            curve: "2 x (x - 1) y^2 + y + x - 1",
            shift: 1,
        },
        oracle: OracleKind::CurveRecursion,
        lucas: None,
        n0: 1,
        prefix: &[1, 1, 2, 6, 22, 88, 368, 1584],
    },
    Fixture {
        name: "apery-zeta3",
        oeis: "A005259",
        description: "Apéry numbers for ζ(3)",
        construction: Construction::Diagonal {
            r: "1",
            q: "(1 - x1 - x2) (1 - x3 - x4) - x1 x2 x3 x4",
            arity: 4,
            partition: FULL_DIAGONAL_4,
        },
        oracle: OracleKind::AperyZeta3Sum,
        lucas: Some(LucasData {
            q: "(1 - x1 - x2) (1 - x3 - x4) - x1 x2 x3 x4",
            arity: 4,
            s: 1,
            partition: FULL_DIAGONAL_4,
        }),
        n0: 0,
        prefix: &[1, 5, 73, 1445, 33001],
    },
    Fixture {
        name: "apery-zeta2",
        oeis: "A005258",
        description: "Apéry numbers for ζ(2)",
        construction: Construction::Diagonal {
            r: "1",
            q: "(1 - x1) (1 - x2) (1 - x3) (1 - x4) - (1 - x1) x1 x2 x3",
            arity: 4,
            partition: FULL_DIAGONAL_4,
        },
        oracle: OracleKind::AperyZeta2Sum,
        lucas: None,
        n0: 0,
        prefix: &[1, 3, 19, 147, 1251],
    },
    Fixture {
        name: "central-trinomial",
        oeis: "A002426",
        description: "Central trinomial coefficients [xⁿ](1+x+x²)ⁿ",
        construction: Construction::Curve {
            curve: "(x + 1) (3 x - 1) y^2 + 1",
            shift: 1,
        },
        oracle: OracleKind::TrinomialRecurrence,
        lucas: Some(LucasData {
            q: "-(x + 1) (3 x - 1)",
            arity: 1,
            s: 2,
            partition: &[&[0]],
        }),
        n0: 1,
        prefix: &[1, 1, 3, 7, 19, 51, 141, 393],
    },
    Fixture {
        name: "binomial",
        oeis: "A007318",
        description: "Binomial coefficients C(n, k), read as a two-block diagonal",
        construction: Construction::Diagonal {
            r: "1",
            q: "1 - x1 - x1 x2",
            arity: 2,
            partition: TWO_BLOCKS,
        },
        oracle: OracleKind::PascalTable,
        lucas: Some(LucasData {
            q: "1 - x1 - x1 x2",
            arity: 2,
            s: 1,
            partition: TWO_BLOCKS,
        }),
        n0: 0,
        prefix: &[],
    },
];

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum FixtureError {
    #[error("no fixture named {0:?}")]
    UnknownFixture(String),
    #[error("fixture polynomial failed to parse: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("fixture has no digit-product data")]
    NoLucasData,
    #[error(transparent)]
    Lucas(#[from] diagonal_automata::lucas::LucasError),
    #[error(transparent)]
    Arith(#[from] diagonal_automata::modarith::ArithError),
}

pub fn find(name: &str) -> Result<&'static Fixture, FixtureError> {
    FIXTURES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| FixtureError::UnknownFixture(name.to_string()))
}

impl Fixture {
    /// Number of digit tuples the automaton consumes per input position
    /// (1 for everything except the two-block binomial fixture).
    pub fn blocks(&self) -> usize {
        match self.construction {
            Construction::Diagonal { partition, .. } => partition.len(),
            _ => 1,
        }
    }

    pub fn curve_int_poly(&self) -> Result<Option<IntPoly>, FixtureError> {
        match self.construction {
            Construction::Curve { curve, .. } | Construction::HalvedCurve { curve, .. } => {
                Ok(Some(parse_int_poly(curve, 2)?))
            }
            Construction::Diagonal { .. } => Ok(None),
        }
    }

    /// The fixture's Lucas specification over `F_p`.
    pub fn lucas_spec(&self, p: u64) -> Result<LucasSpec, FixtureError> {
        let data = self.lucas.ok_or(FixtureError::NoLucasData)?;
        let m = ModulusSpec::new(p, 1)?;
        let q = parse_mod_poly(data.q, data.arity, m)?;
        let partition = data.partition.iter().map(|b| b.to_vec()).collect();
        Ok(LucasSpec::new(q, data.s, partition)?)
    }

    /// True sequence terms `a_0, …, a_{n−1}` mod `p^α`, computed without any
    /// automaton. Single-block fixtures only.
    pub fn oracle_terms(
        &self,
        modulus: ModulusSpec,
        n: usize,
    ) -> Result<Vec<Residue>, FixtureError> {
        assert_eq!(self.blocks(), 1, "use a Pascal table for two-block input");
        let mut terms = match self.oracle {
            OracleKind::TrinomialRecurrence => oracle::central_trinomial(n, modulus)?,
            OracleKind::AperyZeta3Sum => oracle::apery_zeta3(n, modulus)?,
            OracleKind::AperyZeta2Sum => oracle::apery_zeta2(n, modulus)?,
            OracleKind::PascalTable => unreachable!("two-block fixture"),
            OracleKind::CurveRecursion => match self.construction {
                Construction::Curve { curve, shift } => {
                    oracle::curve_series(&parse_int_poly(curve, 2)?, shift, modulus, n)?
                }
                Construction::HalvedCurve { curve, index_shift } => {
                    let h = oracle::curve_series(&parse_int_poly(curve, 2)?, 0, modulus, n)?;
                    (0..n)
                        .map(|i| {
                            if (i as u64) < self.n0 {
                                0 // patched from the prefix below
                            } else {
                                modulus.mul(2, h[i - index_shift as usize])
                            }
                        })
                        .collect()
                }
                Construction::Diagonal { .. } => unreachable!("diagonal fixtures use sum oracles"),
            },
        };
        // The curve recursion reports the shifted root, which only matches
        // the sequence from n0 on; splice in the true leading terms.
        for i in 0..(self.n0 as usize).min(terms.len()) {
            terms[i] = modulus.reduce(self.prefix[i]);
        }
        Ok(terms)
    }
}
