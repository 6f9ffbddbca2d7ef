//! Lucas-product structure for diagonal sequences mod p, and the
//! prime-power Lucas formula for binomial coefficients.
//!
//! For suitable `Q` the diagonal of `Q^{-1/s}` satisfies
//! `a_n = Π_i a_{n(i)}` over base-p digits; [`lucas_check`] detects this by
//! testing that every section `Λ_d(Q^{(p−1)/s})` is a constant, and the
//! resulting [`LucasTable`] evaluates terms by digit products or as a
//! `≤ p`-state automaton.

use crate::dfao::{Dfao, State};
use crate::modarith::{ModulusSpec, Residue};
use crate::poly::{ModPoly, PolyError};
use crate::series::{collapse_map, validate_partition};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum LucasError {
    #[error("root exponent {s} requires p ≡ 1 (mod s), got p = {p}")]
    BadRootExponent { p: u64, s: u64 },
    #[error("the polynomial must have constant term 1")]
    NotNormalized,
    #[error("a prime modulus (exponent 1) is required, got exponent {0}")]
    NotPrimeField(u32),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A candidate Lucas-product description of `D_B(Q^{-1/s}) mod p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LucasSpec {
    q: ModPoly,
    s: u64,
    partition: Vec<Vec<usize>>,
}

impl LucasSpec {
    pub fn new(q: ModPoly, s: u64, partition: Vec<Vec<usize>>) -> Result<Self, LucasError> {
        let m = q.modulus();
        if m.alpha() != 1 {
            return Err(LucasError::NotPrimeField(m.alpha()));
        }
        if q.constant_term() != 1 {
            return Err(LucasError::NotNormalized);
        }
        if s == 0 || (m.p() - 1) % s != 0 {
            return Err(LucasError::BadRootExponent { p: m.p(), s });
        }
        validate_partition(&partition, q.arity());
        Ok(LucasSpec { q, s, partition })
    }

    pub fn q(&self) -> &ModPoly {
        &self.q
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn partition(&self) -> &[Vec<usize>] {
        &self.partition
    }
}

/// Digit-tuple table `{0..p−1}^blocks → F_p` with `table[0⃗] = 1`; the
/// sequence value at `n⃗` is the product of entries over digit positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LucasTable {
    p: u64,
    blocks: usize,
    /// Indexed like automaton symbols: `d_1·p^{blocks−1} + … + d_blocks`.
    entries: Vec<Residue>,
}

/// Either the complete table, or the first digit tuple whose section is not
/// a constant polynomial, together with that polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LucasOutcome {
    Table(LucasTable),
    Failure { digits: Vec<u64>, image: ModPoly },
}

impl LucasTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn entry(&self, digits: &[u64]) -> Residue {
        assert_eq!(digits.len(), self.blocks);
        let mut i = 0usize;
        for &d in digits {
            assert!(d < self.p);
            i = i * self.p as usize + d as usize;
        }
        self.entries[i]
    }

    /// Digit-product evaluation; components are padded to a common length,
    /// and `n⃗ = 0⃗` gives the empty product 1.
    pub fn eval(&self, n: &[u64]) -> Residue {
        assert_eq!(n.len(), self.blocks);
        let m = ModulusSpec::new(self.p, 1).expect("p is prime");
        let len = n
            .iter()
            .map(|&x| crate::dfao::digits_lsd(x, self.p).len())
            .max()
            .unwrap_or(0);
        let mut acc: Residue = 1;
        let mut rest: Vec<u64> = n.to_vec();
        for _ in 0..len {
            let digits: Vec<u64> = rest.iter().map(|x| x % self.p).collect();
            for x in &mut rest {
                *x /= self.p;
            }
            acc = m.mul(acc, self.entry(&digits));
        }
        acc
    }

    /// The automaton implied by the table: states are the scalar partial
    /// products, the initial state is 1, and outputs are the states.
    pub fn automaton(&self) -> Dfao<Residue> {
        let m = ModulusSpec::new(self.p, 1).expect("p is prime");
        let nsyms = self.entries.len();
        let mut index = std::collections::HashMap::new();
        let mut order = vec![1u64];
        index.insert(1u64, 0usize);
        let mut states = Vec::new();
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            let mut next = Vec::with_capacity(nsyms);
            for sym in 0..nsyms {
                let t = m.mul(c, self.entries[sym]);
                let ti = *index.entry(t).or_insert_with(|| {
                    order.push(t);
                    order.len() - 1
                });
                next.push(ti);
            }
            states.push(State { output: c, next });
        }
        Dfao::new(self.p, self.blocks, states, 0).expect("construction is total")
    }
}

/// Test the Lucas-product criterion: every section `Λ_d` of `Q^{(p−1)/s}`
/// must be a constant polynomial; the constants are the digit table.
pub fn lucas_check(spec: &LucasSpec) -> Result<LucasOutcome, LucasError> {
    let m = spec.q.modulus();
    let p = m.p();
    let g = spec.q.pow((p - 1) / spec.s);
    let blocks = spec.partition.len();
    let gamma = collapse_map(&spec.partition, spec.q.arity());
    let nsyms = (p as usize).pow(blocks as u32);
    let mut entries = Vec::with_capacity(nsyms);
    for sym in 0..nsyms {
        // decode symbol into block digits, first block most significant
        let mut digits = vec![0u64; blocks];
        let mut rest = sym;
        for b in (0..blocks).rev() {
            digits[b] = (rest % p as usize) as u64;
            rest /= p as usize;
        }
        let full: Vec<u64> = gamma.iter().map(|&b| digits[b]).collect();
        let image = g.cartier(&full)?;
        if image.degree() > 0 {
            return Ok(LucasOutcome::Failure { digits, image });
        }
        entries.push(image.constant_term());
    }
    debug_assert_eq!(entries[0], 1, "section at 0⃗ of a normalized Q is 1");
    Ok(LucasOutcome::Table(LucasTable { p, blocks, entries }))
}

/// Pascal triangle rows `0..=rows` reduced mod `p^α`.
fn pascal(rows: usize, m: ModulusSpec) -> Vec<Vec<u64>> {
    let mut t: Vec<Vec<u64>> = Vec::with_capacity(rows + 1);
    for n in 0..=rows {
        let mut row = vec![0u64; n + 1];
        row[0] = 1;
        for k in 1..=n {
            let a = if k <= n - 1 { t[n - 1][k] } else { 0 };
            row[k] = m.add(t[n - 1][k - 1], a);
        }
        t.push(row);
    }
    t
}

/// Binomial coefficient `C(n, m) mod p^α` by the digit double sum: with
/// `E = p^α − p^{α−1}`, `K = p^{α−1} − 1`, and digit vectors
/// `(i_h), (j_h) ∈ {0..E}` over the base-p positions of `n`,
///
/// `C(n,m) ≡ Σ (−1)^{n−i+Σ i_h} C(K, n−i) C(n−i, m−j) Π_h C(E, i_h) C(i_h, j_h)`
///
/// where `i = Σ i_h p^h`, `j = Σ j_h p^h`. Indices are pruned to
/// `i ∈ [n−K, n]`, `j_h ≤ i_h`, `j ∈ [m−(n−i), m]`.
pub fn prime_power_lucas_binomial(n: u64, m: u64, modulus: ModulusSpec) -> Residue {
    if m > n {
        return 0;
    }
    let p = modulus.p();
    let pa = modulus.modulus();
    let e = pa - pa / p; // p^α − p^{α−1}, inclusive endpoint of the digit range
    let k_cap = pa / p - 1; // p^{α−1} − 1
    let tri = pascal(e as usize, modulus);
    let positions = crate::dfao::digits_lsd(n, p).len().max(1);
    // place values p^h and the maximal value of a digit suffix below h
    let mut place = vec![1u64; positions];
    for h in 1..positions {
        place[h] = place[h - 1] * p;
    }
    let max_below: Vec<u64> = (0..positions)
        .map(|h| (0..h).map(|t| e * place[t]).sum())
        .collect();

    let mut total: u64 = 0;
    let i_lo = n.saturating_sub(k_cap);
    let mut i_digits = vec![0u64; positions];
    enumerate_i(
        positions,
        0,
        &mut i_digits,
        n,
        i_lo,
        e,
        &place,
        &max_below,
        &tri,
        &mut |i_digits, i| {
            let outer = tri[k_cap as usize][(n - i) as usize];
            if outer == 0 {
                return;
            }
            let slack = n - i;
            let mut digit_sum = 0u64;
            let mut prod = outer;
            for h in 0..positions {
                let ih = i_digits[h] as usize;
                digit_sum += i_digits[h];
                prod = modulus.mul(prod, tri[e as usize][ih]);
            }
            if prod == 0 {
                return;
            }
            // j-digit vectors with j_h ≤ i_h and m − (n−i) ≤ j ≤ m
            let j_lo = m.saturating_sub(slack);
            let mut j_digits = vec![0u64; positions];
            enumerate_j(
                positions,
                0,
                &mut j_digits,
                i_digits,
                m,
                j_lo,
                &place,
                &mut |j_digits, j| {
                    let mut term = prod;
                    term = modulus.mul(term, tri[slack as usize][(m - j) as usize]);
                    for h in 0..positions {
                        term = modulus.mul(
                            term,
                            tri[i_digits[h] as usize][j_digits[h] as usize],
                        );
                    }
                    if (slack + digit_sum) % 2 == 1 {
                        term = modulus.sub(0, term);
                    }
                    total = modulus.add(total, term);
                },
            );
        },
    );
    total
}

/// Enumerate digit vectors with entries in `[0, e]` (skipping digits whose
/// `C(e, d)` vanishes) whose value lies in `[i_lo, n]`, calling `f` with each
/// vector and its value. `h` counts positions still to fill, from the most
/// significant downwards.
#[allow(clippy::too_many_arguments)]
fn enumerate_i(
    h: usize,
    partial: u64,
    digits: &mut Vec<u64>,
    n: u64,
    i_lo: u64,
    e: u64,
    place: &[u64],
    max_below: &[u64],
    tri: &[Vec<u64>],
    f: &mut dyn FnMut(&[u64], u64),
) {
    if h == 0 {
        if partial >= i_lo && partial <= n {
            f(digits, partial);
        }
        return;
    }
    let h = h - 1;
    for d in 0..=e {
        if tri[e as usize][d as usize] == 0 {
            continue;
        }
        let np = partial + d * place[h];
        if np > n {
            break;
        }
        if np + max_below[h] < i_lo {
            continue;
        }
        digits[h] = d;
        enumerate_i(h, np, digits, n, i_lo, e, place, max_below, tri, f);
    }
    digits[h] = 0;
}

/// Enumerate `(j_h)` with `j_h ≤ i_h` and value in `[j_lo, m]`.
#[allow(clippy::too_many_arguments)]
fn enumerate_j(
    h: usize,
    partial: u64,
    digits: &mut Vec<u64>,
    i_digits: &[u64],
    m: u64,
    j_lo: u64,
    place: &[u64],
    f: &mut dyn FnMut(&[u64], u64),
) {
    if h == 0 {
        if partial >= j_lo && partial <= m {
            f(digits, partial);
        }
        return;
    }
    let h = h - 1;
    let max_rest: u64 = (0..h).map(|t| i_digits[t] * place[t]).sum();
    for d in 0..=i_digits[h] {
        let np = partial + d * place[h];
        if np > m {
            break;
        }
        if np + max_rest < j_lo {
            continue;
        }
        digits[h] = d;
        enumerate_j(h, np, digits, i_digits, m, j_lo, place, f);
    }
    digits[h] = 0;
}
