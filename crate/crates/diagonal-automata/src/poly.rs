//! Sparse multivariate polynomials over `Z/(p^α Z)`.
//!
//! Terms are kept in a `BTreeMap` under graded-lexicographic exponent order,
//! so structural equality is semantic equality and iteration order is
//! canonical. Zero coefficients are never stored; the zero polynomial is the
//! empty term set with degree −1.

use crate::modarith::{ArithError, ModulusSpec, Residue};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PolyError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("modulus mismatch")]
    ModulusMismatch,
    #[error("digit {0} out of range for p = {1}")]
    DigitOutOfRange(u64, u64),
    #[error("polynomial is not divisible by variable {0}")]
    NotDivisible(usize),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Exponent vector, ordered graded-lexicographically (total degree first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exp(pub Vec<u32>);

impl Exp {
    fn grade(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }
}

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    modulus: ModulusSpec,
    arity: usize,
    terms: BTreeMap<Exp, Residue>,
}

impl ModPoly {
    pub fn zero(modulus: ModulusSpec, arity: usize) -> Self {
        ModPoly {
            modulus,
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(modulus: ModulusSpec, arity: usize, c: i64) -> Self {
        let mut p = Self::zero(modulus, arity);
        p.add_term(&vec![0; arity], modulus.reduce_i64(c));
        p
    }

    /// The variable `x_i` (0-based).
    pub fn var(modulus: ModulusSpec, arity: usize, i: usize) -> Self {
        assert!(i < arity);
        let mut e = vec![0u32; arity];
        e[i] = 1;
        let mut p = Self::zero(modulus, arity);
        p.add_term(&e, 1 % modulus.modulus());
        p
    }

    pub fn from_terms(
        modulus: ModulusSpec,
        arity: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, i64)>,
    ) -> Self {
        let mut p = Self::zero(modulus, arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity);
            p.add_term(&e, modulus.reduce_i64(c));
        }
        p
    }

    pub fn from_residue_terms(
        modulus: ModulusSpec,
        arity: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Residue)>,
    ) -> Self {
        let mut p = Self::zero(modulus, arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity);
            p.add_term(&e, modulus.reduce(c));
        }
        p
    }

    fn add_term(&mut self, exps: &[u32], c: Residue) {
        if c == 0 {
            return;
        }
        let key = Exp(exps.to_vec());
        let entry = self.terms.entry(key).or_insert(0);
        *entry = self.modulus.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&Exp(exps.to_vec()));
        }
    }

    pub fn modulus(&self) -> ModulusSpec {
        self.modulus
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Residue)> {
        self.terms.iter().map(|(e, &c)| (e.0.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Residue {
        self.terms.get(&Exp(exps.to_vec())).copied().unwrap_or(0)
    }

    /// Max over variables of the per-variable degree; −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.per_var_degrees()
            .into_iter()
            .max()
            .map(|d| d as i64)
            .unwrap_or(-1)
    }

    /// Per-variable degrees; empty for the zero polynomial.
    pub fn per_var_degrees(&self) -> Vec<u32> {
        if self.terms.is_empty() {
            return Vec::new();
        }
        let mut degs = vec![0u32; self.arity];
        for e in self.terms.keys() {
            for (d, &x) in degs.iter_mut().zip(&e.0) {
                *d = (*d).max(x);
            }
        }
        degs
    }

    pub fn constant_term(&self) -> Residue {
        self.coefficient(&vec![0; self.arity])
    }

    pub fn add(&self, other: &ModPoly) -> ModPoly {
        self.check(other);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(&e.0, c);
        }
        out
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ModPoly {
        let mut out = Self::zero(self.modulus, self.arity);
        for (e, &c) in &self.terms {
            out.terms.insert(e.clone(), self.modulus.neg(c));
        }
        out
    }

    pub fn scale(&self, c: i64) -> ModPoly {
        let c = self.modulus.reduce_i64(c);
        let mut out = Self::zero(self.modulus, self.arity);
        if c == 0 {
            return out;
        }
        for (e, &a) in &self.terms {
            let v = self.modulus.mul(a, c);
            if v != 0 {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        self.check(other);
        let mut out = Self::zero(self.modulus, self.arity);
        let mut buf = vec![0u32; self.arity];
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                for i in 0..self.arity {
                    buf[i] = ea.0[i] + eb.0[i];
                }
                out.add_term(&buf, self.modulus.mul(ca, cb));
            }
        }
        out
    }

    /// Binary exponentiation; `e = 0` yields the constant 1.
    pub fn pow(&self, e: u64) -> ModPoly {
        let mut acc = Self::constant(self.modulus, self.arity, 1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Cartier operator: keep monomials with exponents ≡ `digits` componentwise
    /// mod `p`, dividing each exponent by `p`.
    pub fn cartier(&self, digits: &[u64]) -> Result<ModPoly, PolyError> {
        if digits.len() != self.arity {
            return Err(PolyError::ArityMismatch(digits.len(), self.arity));
        }
        let p = self.modulus.p();
        for &d in digits {
            if d >= p {
                return Err(PolyError::DigitOutOfRange(d, p));
            }
        }
        let mut out = Self::zero(self.modulus, self.arity);
        'term: for (e, &c) in &self.terms {
            let mut q = vec![0u32; self.arity];
            for i in 0..self.arity {
                if (e.0[i] as u64) % p != digits[i] {
                    continue 'term;
                }
                q[i] = ((e.0[i] as u64) / p) as u32;
            }
            out.terms.insert(Exp(q), c);
        }
        Ok(out)
    }

    /// Bivariate binning: keep monomials `x^n y^m` with `n − m ≡ r (mod p)`.
    pub fn bin_by_difference(&self, r: u64) -> Result<ModPoly, PolyError> {
        if self.arity != 2 {
            return Err(PolyError::ArityMismatch(self.arity, 2));
        }
        let p = self.modulus.p() as i64;
        let r = (r as i64) % p;
        let mut out = Self::zero(self.modulus, self.arity);
        for (e, &c) in &self.terms {
            let diff = (e.0[0] as i64 - e.0[1] as i64).rem_euclid(p);
            if diff == r {
                out.terms.insert(e.clone(), c);
            }
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, var: usize) -> ModPoly {
        assert!(var < self.arity);
        let mut out = Self::zero(self.modulus, self.arity);
        for (e, &c) in &self.terms {
            if e.0[var] == 0 {
                continue;
            }
            let mut q = e.0.clone();
            q[var] -= 1;
            out.add_term(&q, self.modulus.mul(c, self.modulus.reduce(e.0[var] as u64)));
        }
        out
    }

    /// Apply a linear exponent substitution: term exponents are mapped through
    /// `map`, coefficients of colliding images are added.
    pub fn map_exponents(&self, map: impl Fn(&[u32]) -> Vec<u32>) -> ModPoly {
        let mut out = Self::zero(self.modulus, self.arity);
        for (e, &c) in &self.terms {
            let q = map(&e.0);
            assert_eq!(q.len(), self.arity);
            out.add_term(&q, c);
        }
        out
    }

    /// Divide by `x_var`, failing if some term lacks that variable.
    pub fn div_exact_var(&self, var: usize) -> Result<ModPoly, PolyError> {
        let mut out = Self::zero(self.modulus, self.arity);
        for (e, &c) in &self.terms {
            if e.0[var] == 0 {
                return Err(PolyError::NotDivisible(var));
            }
            let mut q = e.0.clone();
            q[var] -= 1;
            out.terms.insert(Exp(q), c);
        }
        Ok(out)
    }

    /// Substitute the polynomial `g` (same arity) for variable `var`.
    pub fn substitute_var(&self, var: usize, g: &ModPoly) -> ModPoly {
        self.check(g);
        // Group coefficients by the power of `var`, then Horner.
        let mut by_power: BTreeMap<u32, ModPoly> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let t = e.0[var];
            let mut q = e.0.clone();
            q[var] = 0;
            by_power
                .entry(t)
                .or_insert_with(|| Self::zero(self.modulus, self.arity))
                .add_term(&q, c);
        }
        let mut acc = Self::zero(self.modulus, self.arity);
        let max_t = by_power.keys().next_back().copied().unwrap_or(0);
        for t in (0..=max_t).rev() {
            acc = acc.mul(g);
            if let Some(coeff) = by_power.get(&t) {
                acc = acc.add(coeff);
            }
        }
        acc
    }

    /// Reinterpret the coefficients under a (typically smaller) modulus.
    pub fn reduce_modulus(&self, m: ModulusSpec) -> ModPoly {
        let mut out = Self::zero(m, self.arity);
        for (e, &c) in &self.terms {
            out.add_term(&e.0, m.reduce(c));
        }
        out
    }

    fn check(&self, other: &ModPoly) {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        assert_eq!(self.modulus, other.modulus, "modulus mismatch");
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &x) in e.0.iter().enumerate() {
                if x > 0 {
                    write!(f, "*x{}^{}", i + 1, x)?;
                }
            }
        }
        write!(f, " (mod {})", self.modulus.modulus())
    }
}
