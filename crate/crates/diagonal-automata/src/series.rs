//! Truncated multivariate power series over `Z/(p^α Z)`.
//!
//! Coefficients are stored densely for all exponent vectors in the box
//! `[0, T)^k`. These serve as independent brute-force oracles: a rational
//! function is expanded directly and diagonal coefficients are read off,
//! with no automaton involved.

use crate::modarith::{ArithError, ModulusSpec, Residue};
use crate::poly::ModPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    modulus: ModulusSpec,
    arity: usize,
    order: u32,
    coeffs: Vec<Residue>,
}

impl TruncatedSeries {
    pub fn zero(modulus: ModulusSpec, arity: usize, order: u32) -> Self {
        let len = (order as usize).pow(arity as u32);
        TruncatedSeries {
            modulus,
            arity,
            order,
            coeffs: vec![0; len],
        }
    }

    pub fn from_poly(f: &ModPoly, order: u32) -> Self {
        let mut s = Self::zero(f.modulus(), f.arity(), order);
        for (e, c) in f.terms() {
            if e.iter().all(|&x| x < order) {
                let i = s.index(e);
                s.coeffs[i] = c;
            }
        }
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn index(&self, exps: &[u32]) -> usize {
        let mut i = 0usize;
        for &e in exps {
            i = i * self.order as usize + e as usize;
        }
        i
    }

    pub fn coefficient(&self, exps: &[u32]) -> Residue {
        assert_eq!(exps.len(), self.arity);
        assert!(exps.iter().all(|&e| e < self.order));
        self.coeffs[self.index(exps)]
    }

    /// Multiply by a sparse polynomial, truncating to the same box.
    pub fn mul_poly(&self, f: &ModPoly) -> TruncatedSeries {
        assert_eq!(self.arity, f.arity());
        let m = self.modulus;
        let mut out = Self::zero(m, self.arity, self.order);
        let mut exps = vec![0u32; self.arity];
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            decode(idx, self.order, &mut exps);
            'term: for (fe, fc) in f.terms() {
                let mut target = 0usize;
                for i in 0..self.arity {
                    let e = exps[i] + fe[i];
                    if e >= self.order {
                        continue 'term;
                    }
                    target = target * self.order as usize + e as usize;
                }
                out.coeffs[target] = m.add(out.coeffs[target], m.mul(c, fc));
            }
        }
        out
    }

    /// Expand `1/Q` on the box `[0, order)^k`; requires `Q(0,…,0)` to be a unit.
    pub fn inverse_of(q: &ModPoly, order: u32) -> Result<TruncatedSeries, ArithError> {
        let m = q.modulus();
        let q0 = q.constant_term();
        let inv_q0 = m.inverse(q0)?;
        let arity = q.arity();
        let mut s = TruncatedSeries::zero(m, arity, order);
        // Nonconstant terms of Q, as (exponents, coefficient).
        let tail: Vec<(Vec<u32>, Residue)> = q
            .terms()
            .filter(|(e, _)| e.iter().any(|&x| x > 0))
            .map(|(e, c)| (e.to_vec(), c))
            .collect();
        let mut exps = vec![0u32; arity];
        for idx in 0..s.coeffs.len() {
            decode(idx, order, &mut exps);
            let mut acc: u64 = if exps.iter().all(|&e| e == 0) { 1 } else { 0 };
            'term: for (fe, fc) in &tail {
                let mut src = 0usize;
                for i in 0..arity {
                    if fe[i] > exps[i] {
                        continue 'term;
                    }
                    src = src * order as usize + (exps[i] - fe[i]) as usize;
                }
                acc = m.sub(acc, m.mul(*fc, s.coeffs[src]));
            }
            s.coeffs[idx] = m.mul(inv_q0, acc);
        }
        Ok(s)
    }
}

fn decode(mut idx: usize, order: u32, exps: &mut [u32]) {
    for i in (0..exps.len()).rev() {
        exps[i] = (idx % order as usize) as u32;
        idx /= order as usize;
    }
}

/// Brute-force oracle for the coefficients of `D_B(R/Q)`.
///
/// `partition` lists the blocks of a set partition of the variables (0-based).
/// Returns, for every index tuple `t` with each component `< n`, the
/// coefficient of `R/Q` at the exponent vector assigning `t[block of i]` to
/// variable `i`. Tuples are enumerated in row-major order; for the full
/// diagonal (one block) this is simply the sequence `a_0, …, a_{n−1}`.
pub fn diagonal_coefficients(
    r: &ModPoly,
    q: &ModPoly,
    partition: &[Vec<usize>],
    n: u32,
) -> Result<Vec<Residue>, ArithError> {
    assert_eq!(r.arity(), q.arity());
    let arity = q.arity();
    validate_partition(partition, arity);
    let series = TruncatedSeries::inverse_of(q, n)?.mul_poly(r);
    let blocks = partition.len();
    let mut out = Vec::with_capacity((n as usize).pow(blocks as u32));
    let mut tuple = vec![0u32; blocks];
    let mut exps = vec![0u32; arity];
    loop {
        for (b, block) in partition.iter().enumerate() {
            for &v in block {
                exps[v] = tuple[b];
            }
        }
        out.push(series.coefficient(&exps));
        // Advance the tuple, last coordinate fastest.
        let mut i = blocks;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
        }
    }
}

pub(crate) fn validate_partition(partition: &[Vec<usize>], arity: usize) {
    let mut seen = vec![false; arity];
    for block in partition {
        assert!(!block.is_empty(), "empty partition block");
        for &v in block {
            assert!(v < arity, "partition names variable {v} out of range");
            assert!(!seen[v], "partition repeats variable {v}");
            seen[v] = true;
        }
    }
    assert!(seen.iter().all(|&s| s), "partition does not cover all variables");
}

/// Collapse map: variable index → block index.
pub(crate) fn collapse_map(partition: &[Vec<usize>], arity: usize) -> Vec<usize> {
    let mut gamma = vec![0usize; arity];
    for (b, block) in partition.iter().enumerate() {
        for &v in block {
            gamma[v] = b;
        }
    }
    gamma
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64, a: u32) -> ModulusSpec {
        ModulusSpec::new(p, a).unwrap()
    }

    #[test]
    fn geometric_series() {
        let m7 = m(7, 1);
        let q = ModPoly::from_terms(m7, 1, [(vec![0], 1), (vec![1], -1)]);
        let s = TruncatedSeries::inverse_of(&q, 4).unwrap();
        for e in 0..4u32 {
            assert_eq!(s.coefficient(&[e]), 1);
        }
    }

    #[test]
    fn inverse_mod_four() {
        // 1/(1+2x) mod 4 = 1 + 2x (check: (1+2x)² ≡ 1 mod 4)
        let m4 = m(2, 2);
        let q = ModPoly::from_terms(m4, 1, [(vec![0], 1), (vec![1], 2)]);
        let s = TruncatedSeries::inverse_of(&q, 3).unwrap();
        assert_eq!(s.coefficient(&[0]), 1);
        assert_eq!(s.coefficient(&[1]), 2);
        assert_eq!(s.coefficient(&[2]), 0);
    }

    #[test]
    fn binomial_generating_function() {
        // Coefficient of x₁^n x₂^m in 1/(1 − x₁ − x₁x₂) is C(n, m).
        let m101 = m(101, 1);
        let q = ModPoly::from_terms(m101, 2, [(vec![0, 0], 1), (vec![1, 0], -1), (vec![1, 1], -1)]);
        let s = TruncatedSeries::inverse_of(&q, 9).unwrap();
        let mut pascal = [[0u64; 9]; 9];
        for n in 0..9usize {
            pascal[n][0] = 1;
            for k in 1..=n {
                pascal[n][k] = (pascal[n - 1][k - 1] + pascal[n - 1][k]) % 101;
            }
        }
        for n in 0..9u32 {
            for k in 0..9u32 {
                assert_eq!(s.coefficient(&[n, k]), pascal[n as usize][k as usize]);
            }
        }
    }

    #[test]
    fn central_binomial_diagonal() {
        // D(1/(1 − x − y)) is the central binomial sequence 1, 2, 6, 20.
        let m1009 = m(1009, 1);
        let q = ModPoly::from_terms(m1009, 2, [(vec![0, 0], 1), (vec![1, 0], -1), (vec![0, 1], -1)]);
        let r = ModPoly::constant(m1009, 2, 1);
        let d = diagonal_coefficients(&r, &q, &[vec![0, 1]], 4).unwrap();
        assert_eq!(d, vec![1, 2, 6, 20]);
    }

    #[test]
    fn discrete_partition_is_identity() {
        let m5 = m(5, 1);
        let q = ModPoly::from_terms(m5, 2, [(vec![0, 0], 1), (vec![1, 0], -1), (vec![1, 1], -1)]);
        let r = ModPoly::constant(m5, 2, 1);
        let d = diagonal_coefficients(&r, &q, &[vec![0], vec![1]], 6).unwrap();
        let s = TruncatedSeries::inverse_of(&q, 6).unwrap();
        let mut i = 0;
        for n in 0..6u32 {
            for k in 0..6u32 {
                assert_eq!(d[i], s.coefficient(&[n, k]));
                i += 1;
            }
        }
    }

    #[test]
    fn product_with_inverse_is_one() {
        let m9 = m(3, 2);
        let q = ModPoly::from_terms(
            m9,
            2,
            [(vec![0, 0], 2), (vec![1, 0], 5), (vec![0, 1], 3), (vec![1, 1], 7)],
        );
        let s = TruncatedSeries::inverse_of(&q, 6).unwrap();
        let prod = s.mul_poly(&q);
        for n in 0..6u32 {
            for k in 0..6u32 {
                let want = u64::from(n == 0 && k == 0);
                assert_eq!(prod.coefficient(&[n, k]), want);
            }
        }
    }
}
