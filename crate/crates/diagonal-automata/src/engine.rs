//! Automaton construction for diagonals of rational functions mod `p^α`.
//!
//! States are polynomials. The transition on digit tuple `d` is
//! `μ_d(s) = Λ_{d∘γ}(s · Q^{p^α − p^{α−1}})` (Standard variant) or
//! `μ_d(s) = Λ_{d∘γ}(s) · Q^{p^α − p^{α−1}}` (PostCartier variant), where `γ`
//! expands the per-block digits of the partition to per-variable digits.
//! Closure of the reachable set under these maps is what makes the coefficient
//! sequence automatic; the output of a state is its constant term.

use crate::dfao::{Dfao, State};
use crate::modarith::{ArithError, ModulusSpec, Residue};
use crate::poly::{ModPoly, PolyError};
use crate::series::{collapse_map, validate_partition};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum EngineError {
    #[error("P(0,…,0) must vanish for the diagonal representation")]
    ConstantTermNonzero,
    #[error("∂P/∂y(0,0) is not a unit mod p; the diagonal route does not apply")]
    DerivativeNotUnit,
    #[error("Q(0,…,0) is not a unit mod p")]
    NotUnit,
    #[error("state cap {cap} exceeded: {discovered} states discovered, {frontier} unexplored")]
    StateExplosion {
        discovered: usize,
        frontier: usize,
        cap: usize,
    },
    #[error("state degree {got} exceeds the closure bound {bound}")]
    DegreeBoundViolated { got: i64, bound: i64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Multiply by `Q^{p^α − p^{α−1}}`, then apply the Cartier operator.
    Standard,
    /// Apply the Cartier operator first, then multiply.
    PostCartier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    pub variant: Variant,
    pub state_cap: Option<usize>,
    pub check_degree_bound: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            variant: Variant::Standard,
            state_cap: Some(1_000_000),
            check_degree_bound: true,
        }
    }
}

/// A normalized diagonal problem: compute the coefficients of `D_B(R/Q)`
/// mod `p^α`. Construction folds `Q(0,…,0)^{-1}` into both `R` and `Q`, so
/// `Q(0,…,0) = 1` always holds afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalProblem {
    r: ModPoly,
    q: ModPoly,
    modulus: ModulusSpec,
    partition: Vec<Vec<usize>>,
    gamma: Vec<usize>,
}

impl DiagonalProblem {
    pub fn new(
        r: ModPoly,
        q: ModPoly,
        partition: Vec<Vec<usize>>,
    ) -> Result<Self, EngineError> {
        assert_eq!(r.arity(), q.arity(), "R and Q must share arity");
        assert_eq!(r.modulus(), q.modulus(), "R and Q must share modulus");
        let modulus = q.modulus();
        validate_partition(&partition, q.arity());
        let gamma = collapse_map(&partition, q.arity());
        let c = modulus
            .inverse(q.constant_term())
            .map_err(|_| EngineError::NotUnit)?;
        Ok(DiagonalProblem {
            r: r.scale(c as i64),
            q: q.scale(c as i64),
            modulus,
            partition,
            gamma,
        })
    }

    /// Full diagonal: all variables collapsed into one block.
    pub fn full_diagonal(r: ModPoly, q: ModPoly) -> Result<Self, EngineError> {
        let k = q.arity();
        Self::new(r, q, vec![(0..k).collect()])
    }

    pub fn r(&self) -> &ModPoly {
        &self.r
    }

    pub fn q(&self) -> &ModPoly {
        &self.q
    }

    pub fn modulus(&self) -> ModulusSpec {
        self.modulus
    }

    pub fn partition(&self) -> &[Vec<usize>] {
        &self.partition
    }

    pub fn blocks(&self) -> usize {
        self.partition.len()
    }

    /// Expand per-block digits to per-variable digits via the collapse map.
    pub fn expand_digits(&self, block_digits: &[u64]) -> Vec<u64> {
        assert_eq!(block_digits.len(), self.partition.len());
        self.gamma.iter().map(|&b| block_digits[b]).collect()
    }

    /// `p^{α−1} − 1` and `p^α − p^{α−1}`, the two exponents of Algorithm 1.
    fn exponents(&self) -> (u64, u64) {
        let p = self.modulus.p();
        let alpha = self.modulus.alpha();
        let low = p.pow(alpha - 1);
        (low - 1, p.pow(alpha) - low)
    }

    /// Initial state polynomial `R · Q^{p^{α−1} − 1}`; for α = 1 this is `R`.
    pub fn initial_state(&self) -> ModPoly {
        let (e, _) = self.exponents();
        self.r.mul(&self.q.pow(e))
    }

    /// Initial state for a variant. The PostCartier variant represents the
    /// series as `s/Q^{p^α}` instead of `s/Q^{p^{α−1}}`, so it starts from
    /// `R · Q^{p^α − 1}`, projected to the block-congruent monomial class.
    pub fn initial_state_for(&self, variant: Variant) -> ModPoly {
        match variant {
            Variant::Standard => self.initial_state(),
            Variant::PostCartier => {
                let p = self.modulus.p();
                let alpha = self.modulus.alpha();
                self.block_class_project(&self.r.mul(&self.q.pow(p.pow(alpha) - 1)))
            }
        }
    }

    /// Keep only monomials whose exponents are pairwise congruent mod `p`
    /// within each partition block. In the PostCartier variant these are the
    /// only monomials the Cartier operators and the output ever consult, so
    /// states are stored in projected form; this is what makes that variant
    /// produce fewer states.
    pub fn block_class_project(&self, s: &ModPoly) -> ModPoly {
        let p = self.modulus.p() as i64;
        ModPoly::from_residue_terms(
            self.modulus,
            s.arity(),
            s.terms().filter_map(|(e, c)| {
                for block in &self.partition {
                    let lead = e[block[0]] as i64;
                    for &v in &block[1..] {
                        if (e[v] as i64 - lead).rem_euclid(p) != 0 {
                            return None;
                        }
                    }
                }
                Some((e.to_vec(), c))
            }),
        )
    }

    /// The precomputed multiplier `T = Q^{p^α − p^{α−1}}`.
    pub fn multiplier(&self) -> ModPoly {
        let (_, e) = self.exponents();
        self.q.pow(e)
    }

    /// Degree bound `m = max(deg(R·Q^{p^{α−1}−1}), p^{α−1}·deg Q)` satisfied by
    /// every state of the Standard variant.
    pub fn degree_bound(&self) -> i64 {
        let (_, _) = self.exponents();
        let p_low = self.modulus.p().pow(self.modulus.alpha() - 1) as i64;
        self.initial_state()
            .degree()
            .max(p_low * self.q.degree())
    }
}

/// Realize the power-series root `f` (with `f(0) = 0`) of a bivariate
/// polynomial `P(x, y)` as a full diagonal: `f = D(R/Q)` with
/// `R = c·y·P_y(xy, y)` and `Q = c·P(xy, y)/y`, `c = (∂P/∂y(0,0))^{-1}`.
pub fn furstenberg_transform(
    p_poly: &ModPoly,
    modulus: ModulusSpec,
) -> Result<DiagonalProblem, EngineError> {
    assert_eq!(p_poly.arity(), 2, "expected a bivariate polynomial");
    let p_poly = p_poly.reduce_modulus(modulus);
    if p_poly.constant_term() != 0 {
        return Err(EngineError::ConstantTermNonzero);
    }
    let py = p_poly.partial_derivative(1);
    let c0 = py.constant_term();
    if modulus.inverse(c0).is_err() {
        return Err(EngineError::DerivativeNotUnit);
    }
    // x ↦ xy sends x^i y^j to x^i y^{i+j}.
    let sub = |e: &[u32]| vec![e[0], e[0] + e[1]];
    let r = py.map_exponents(sub).map_exponents(|e| vec![e[0], e[1] + 1]);
    let q = p_poly.map_exponents(sub).div_exact_var(1)?;
    DiagonalProblem::full_diagonal(r, q)
}

/// One transition: `μ_d` applied to a single state polynomial. `block_digits`
/// has one digit per partition block. This is the reference implementation;
/// `build_automaton` computes all digits of a state in one pass.
pub fn mu_step(
    state: &ModPoly,
    block_digits: &[u64],
    problem: &DiagonalProblem,
    options: &EngineOptions,
) -> Result<ModPoly, EngineError> {
    let digits = problem.expand_digits(block_digits);
    let t = problem.multiplier();
    let out = match options.variant {
        Variant::Standard => state.mul(&t).cartier(&digits)?,
        Variant::PostCartier => problem.block_class_project(&state.cartier(&digits)?.mul(&t)),
    };
    Ok(out)
}

/// Build the DFAO for a diagonal problem by breadth-first closure of the
/// state polynomials under the μ maps. States are numbered in discovery
/// order with digit tuples scanned ascending, so the result is deterministic.
pub fn build_automaton(
    problem: &DiagonalProblem,
    options: &EngineOptions,
) -> Result<Dfao<Residue>, EngineError> {
    let modulus = problem.modulus();
    let p = modulus.p();
    let blocks = problem.blocks();
    let nsyms = (p as usize).pow(blocks as u32);
    let t = problem.multiplier();
    let stepper = Stepper::new(problem, &t, options.variant);
    let bound = problem.degree_bound();

    let mut index: HashMap<ModPoly, usize> = HashMap::new();
    let mut polys: Vec<ModPoly> = Vec::new();
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let initial = problem.initial_state_for(options.variant);
    index.insert(initial.clone(), 0);
    polys.push(initial);
    let mut head = 0;
    while head < polys.len() {
        let s = polys[head].clone();
        let images = stepper.all_steps(&s);
        debug_assert_eq!(images.len(), nsyms);
        let mut next = Vec::with_capacity(nsyms);
        for img in images {
            if options.check_degree_bound
                && options.variant == Variant::Standard
                && img.degree() > bound
            {
                return Err(EngineError::DegreeBoundViolated {
                    got: img.degree(),
                    bound,
                });
            }
            let ti = match index.get(&img) {
                Some(&i) => i,
                None => {
                    let i = polys.len();
                    if let Some(cap) = options.state_cap {
                        if i >= cap {
                            return Err(EngineError::StateExplosion {
                                discovered: polys.len(),
                                frontier: polys.len() - head,
                                cap,
                            });
                        }
                    }
                    index.insert(img.clone(), i);
                    polys.push(img);
                    i
                }
            };
            next.push(ti);
        }
        transitions.push(next);
        head += 1;
    }
    let states = polys
        .iter()
        .zip(transitions)
        .map(|(s, next)| State {
            output: s.constant_term(),
            next,
        })
        .collect();
    Ok(Dfao::new(p, blocks, states, 0).expect("engine emits a well-formed automaton"))
}

/// Computes all `p^{|B|}` images `μ_d(s)` of one state in a single pass.
///
/// For the Standard variant only the part of `s·T` whose exponents are
/// congruent mod `p` within each partition block survives some Cartier
/// operator, so terms of `s` and `T` are binned by the vector of exponent
/// differences mod `p` against each block leader and only complementary bins
/// are multiplied. The full product is never formed.
struct Stepper<'a> {
    problem: &'a DiagonalProblem,
    t: &'a ModPoly,
    variant: Variant,
    /// Non-leader variables paired with their block leader.
    followers: Vec<(usize, usize)>,
    t_bins: HashMap<Vec<u64>, Vec<(Vec<u32>, Residue)>>,
    /// Deferred modular reduction is safe when products stay far below 2^64.
    defer: bool,
}

impl<'a> Stepper<'a> {
    fn new(problem: &'a DiagonalProblem, t: &'a ModPoly, variant: Variant) -> Self {
        let mut followers = Vec::new();
        for block in problem.partition() {
            let leader = block[0];
            for &v in &block[1..] {
                followers.push((v, leader));
            }
        }
        let p = problem.modulus().p();
        let bin_key = |e: &[u32]| -> Vec<u64> {
            followers
                .iter()
                .map(|&(v, l)| (e[v] as i64 - e[l] as i64).rem_euclid(p as i64) as u64)
                .collect()
        };
        let mut t_bins: HashMap<Vec<u64>, Vec<(Vec<u32>, Residue)>> = HashMap::new();
        if variant == Variant::Standard {
            for (e, c) in t.terms() {
                t_bins.entry(bin_key(e)).or_default().push((e.to_vec(), c));
            }
        }
        let m = problem.modulus().modulus();
        Stepper {
            problem,
            t,
            variant,
            followers,
            t_bins,
            defer: m < (1 << 20),
        }
    }

    fn all_steps(&self, s: &ModPoly) -> Vec<ModPoly> {
        match self.variant {
            Variant::PostCartier => self.post_cartier_steps(s),
            Variant::Standard => self.standard_steps(s),
        }
    }

    fn post_cartier_steps(&self, s: &ModPoly) -> Vec<ModPoly> {
        let problem = self.problem;
        let p = problem.modulus().p();
        let blocks = problem.blocks();
        let nsyms = (p as usize).pow(blocks as u32);
        (0..nsyms)
            .map(|sym| {
                let block_digits = decode_tuple(sym, p, blocks);
                let digits = problem.expand_digits(&block_digits);
                problem
                    .block_class_project(&s.cartier(&digits).expect("digits in range").mul(self.t))
            })
            .collect()
    }

    fn standard_steps(&self, s: &ModPoly) -> Vec<ModPoly> {
        let problem = self.problem;
        let modulus = problem.modulus();
        let p = modulus.p();
        let arity = s.arity();
        let blocks = problem.blocks();
        let nsyms = (p as usize).pow(blocks as u32);
        if s.is_zero() {
            return vec![ModPoly::zero(modulus, arity); nsyms];
        }
        // Bounding box of the block-congruent part of s·T.
        let sd = s.per_var_degrees();
        let td = self.t.per_var_degrees();
        let dims: Vec<usize> = (0..arity)
            .map(|i| sd[i] as usize + td.get(i).copied().unwrap_or(0) as usize + 1)
            .collect();
        let size: usize = dims.iter().product();
        let mut acc = vec![0u64; size];
        let bin_key = |e: &[u32]| -> Vec<u64> {
            self.followers
                .iter()
                .map(|&(v, l)| (e[v] as i64 - e[l] as i64).rem_euclid(p as i64) as u64)
                .collect()
        };
        // With deferred reduction each cell accumulates at most |terms of s|
        // products, each below 2^40; reduce once at the end.
        let defer = self.defer && s.num_terms() < (1 << 23);
        for (se, sc) in s.terms() {
            let want: Vec<u64> = bin_key(se)
                .iter()
                .map(|&d| (p - d) % p)
                .collect();
            let Some(bin) = self.t_bins.get(&want) else {
                continue;
            };
            for (te, tc) in bin {
                let mut idx = 0usize;
                for i in 0..arity {
                    idx = idx * dims[i] + se[i] as usize + te[i] as usize;
                }
                if defer {
                    acc[idx] += sc * tc;
                } else {
                    acc[idx] = modulus.add(acc[idx], modulus.mul(sc, *tc));
                }
            }
        }
        // Distribute cells to their digit tuple; each nonzero cell is
        // block-congruent, so its tuple is determined by the block leaders.
        let mut per_symbol: Vec<Vec<(Vec<u32>, Residue)>> = vec![Vec::new(); nsyms];
        let mut exps = vec![0u32; arity];
        for (idx, &raw) in acc.iter().enumerate() {
            if raw == 0 {
                continue;
            }
            let c = modulus.reduce(raw);
            if c == 0 {
                continue;
            }
            let mut rem = idx;
            for i in (0..arity).rev() {
                exps[i] = (rem % dims[i]) as u32;
                rem /= dims[i];
            }
            let mut sym = 0usize;
            for block in problem.partition() {
                sym = sym * p as usize + (exps[block[0]] as u64 % p) as usize;
            }
            let reduced: Vec<u32> = exps.iter().map(|&e| e / p as u32).collect();
            per_symbol[sym].push((reduced, c));
        }
        per_symbol
            .into_iter()
            .map(|terms| ModPoly::from_residue_terms(modulus, arity, terms))
            .collect()
    }
}

fn decode_tuple(mut sym: usize, p: u64, len: usize) -> Vec<u64> {
    let mut digits = vec![0u64; len];
    for i in (0..len).rev() {
        digits[i] = (sym % p as usize) as u64;
        sym /= p as usize;
    }
    digits
}
