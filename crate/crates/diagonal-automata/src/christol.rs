//! Mod-p automata for algebraic power series that the diagonal route cannot
//! handle directly (the curve's partial-derivative precondition fails).
//!
//! Given a bivariate polynomial `P(x, y)` over `F_p` and a certified
//! coefficient prefix of a root `f`, [`ore_form`] finds an additive relation
//! `g_0 f + g_1 f^p + … + g_m f^{p^m} = 0` with `g_0 ≠ 0`, and
//! [`christol_automaton`] turns that relation into a base-`p` automaton
//! computing `a_n mod p` via the section operators `Λ_d`.

use crate::dfao::{Dfao, State};
use crate::modarith::{ModulusSpec, Residue};
use crate::poly::ModPoly;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ChristolError {
    #[error("the coefficient prefix is too short to certify this computation")]
    PrecisionTooLow,
    #[error("the defining polynomial is zero or does not involve y")]
    ZeroPolynomial,
    #[error("the supplied prefix is not a root of the polynomial to its length")]
    NotARoot,
    #[error("a prime field (exponent 1) is required, got p^{0}")]
    NotPrimeField(u32),
    #[error("the defining polynomial must be bivariate, got arity {0}")]
    BadArity(usize),
    #[error("leading relation coefficient g_0 is zero")]
    DegenerateLeadingCoefficient,
}

/// A bivariate polynomial over `F_p` together with a certified prefix of the
/// coefficients of one of its power-series roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicSeriesSpec {
    modulus: ModulusSpec,
    poly: ModPoly,
    prefix: Vec<Residue>,
}

impl AlgebraicSeriesSpec {
    /// Validates that `poly` is a nonzero bivariate polynomial over a prime
    /// field and that `P(x, f) ≡ 0 (mod x^T)` on the supplied prefix.
    pub fn new(poly: ModPoly, prefix: Vec<Residue>) -> Result<Self, ChristolError> {
        let modulus = poly.modulus();
        if modulus.alpha() != 1 {
            return Err(ChristolError::NotPrimeField(modulus.alpha()));
        }
        if poly.arity() != 2 {
            return Err(ChristolError::BadArity(poly.arity()));
        }
        let degs = poly.per_var_degrees();
        if degs.is_empty() || degs[1] == 0 {
            return Err(ChristolError::ZeroPolynomial);
        }
        if prefix.is_empty() {
            return Err(ChristolError::PrecisionTooLow);
        }
        // Evaluate P(x, f) truncated at x^T.
        let t = prefix.len();
        let f = Series::new(modulus, prefix.clone(), t);
        let mut powers = vec![Series::one(modulus, t)];
        for k in 1..=degs[1] as usize {
            let next = powers[k - 1].mul(&f);
            powers.push(next);
        }
        let mut acc = vec![0u64; t];
        for (e, c) in poly.terms() {
            let (ex, ey) = (e[0] as usize, e[1] as usize);
            for (k, &fc) in powers[ey].c.iter().enumerate() {
                if ex + k < t {
                    acc[ex + k] = modulus.add(acc[ex + k], modulus.mul(c, fc));
                }
            }
        }
        if acc.iter().any(|&c| c != 0) {
            return Err(ChristolError::NotARoot);
        }
        Ok(AlgebraicSeriesSpec { modulus, poly, prefix })
    }

    pub fn modulus(&self) -> ModulusSpec {
        self.modulus
    }

    pub fn poly(&self) -> &ModPoly {
        &self.poly
    }

    pub fn prefix(&self) -> &[Residue] {
        &self.prefix
    }
}

/// The additive relation `Σ_i g_i f^{p^i} = 0` with `g_0 ≠ 0`; `height` is
/// the largest Frobenius power `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OreForm {
    modulus: ModulusSpec,
    g: Vec<ModPoly>,
}

impl OreForm {
    pub fn modulus(&self) -> ModulusSpec {
        self.modulus
    }

    pub fn height(&self) -> usize {
        self.g.len() - 1
    }

    /// Coefficient of `y^{p^i}` (a univariate polynomial over `F_p`).
    pub fn coefficient(&self, i: usize) -> &ModPoly {
        &self.g[i]
    }

    pub fn coefficients(&self) -> &[ModPoly] {
        &self.g
    }
}

// ---------------------------------------------------------------------------
// dense univariate polynomials over F_p (internal representation)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Uni {
    m: ModulusSpec,
    c: Vec<u64>, // c[i] = coefficient of x^i; no trailing zeros
}

impl Uni {
    fn zero(m: ModulusSpec) -> Self {
        Uni { m, c: Vec::new() }
    }

    fn one(m: ModulusSpec) -> Self {
        Uni { m, c: vec![1] }
    }

    fn trim(mut self) -> Self {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.c.last().expect("lead of zero polynomial")
    }

    /// Valuation (order of vanishing at 0); None for zero.
    fn val(&self) -> Option<usize> {
        self.c.iter().position(|&c| c != 0)
    }

    fn add(&self, other: &Uni) -> Uni {
        let mut c = vec![0; self.c.len().max(other.c.len())];
        for (i, slot) in c.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            *slot = self.m.add(a, b);
        }
        Uni { m: self.m, c }.trim()
    }

    fn sub(&self, other: &Uni) -> Uni {
        let mut c = vec![0; self.c.len().max(other.c.len())];
        for (i, slot) in c.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            *slot = self.m.sub(a, b);
        }
        Uni { m: self.m, c }.trim()
    }

    fn mul(&self, other: &Uni) -> Uni {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.m);
        }
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = self.m.add(c[i + j], self.m.mul(a, b));
            }
        }
        Uni { m: self.m, c }.trim()
    }

    fn scale(&self, s: u64) -> Uni {
        let s = self.m.reduce(s);
        let c = self.c.iter().map(|&a| self.m.mul(a, s)).collect();
        Uni { m: self.m, c }.trim()
    }

    fn pow(&self, mut e: u32) -> Uni {
        let mut base = self.clone();
        let mut acc = Self::one(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Division with remainder; divisor must be nonzero.
    fn divrem(&self, d: &Uni) -> (Uni, Uni) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let m = self.m;
        let dd = d.deg().unwrap();
        if self.deg().map_or(true, |sd| sd < dd) {
            return (Self::zero(m), self.clone());
        }
        let mut rem = self.c.clone();
        let lead_inv = m.inverse(d.lead()).expect("prime field");
        let mut quo = vec![0u64; rem.len().saturating_sub(dd)];
        let mut k = rem.len();
        while k > dd {
            k -= 1;
            if rem[k] == 0 {
                continue;
            }
            let q = m.mul(rem[k], lead_inv);
            quo[k - dd] = q;
            for (j, &dc) in d.c.iter().enumerate() {
                rem[k - dd + j] = m.sub(rem[k - dd + j], m.mul(q, dc));
            }
        }
        (
            Uni { m, c: quo }.trim(),
            Uni { m, c: rem }.trim(),
        )
    }

    fn rem(&self, d: &Uni) -> Uni {
        self.divrem(d).1
    }

    fn div_exact(&self, d: &Uni) -> Uni {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor.
    fn gcd(&self, other: &Uni) -> Uni {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let inv = a.m.inverse(a.lead()).expect("prime field");
            a.scale(inv)
        }
    }

    /// Substitute `x ↦ x^p` (equals the p-th power over `F_p`).
    fn frobenius(&self) -> Uni {
        let p = self.m.p() as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0u64; (self.c.len() - 1) * p + 1];
        for (i, &a) in self.c.iter().enumerate() {
            c[i * p] = a;
        }
        Uni { m: self.m, c }
    }

    /// Section operator: keep exponents `≡ r (mod p)` and divide them by p.
    fn cartier(&self, r: u64) -> Uni {
        let p = self.m.p() as usize;
        let c = self
            .c
            .iter()
            .skip(r as usize)
            .step_by(p)
            .copied()
            .collect();
        Uni { m: self.m, c }.trim()
    }

    fn to_modpoly(&self) -> ModPoly {
        ModPoly::from_residue_terms(
            self.m,
            1,
            self.c
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (vec![i as u32], c)),
        )
    }

    fn from_modpoly(f: &ModPoly) -> Uni {
        assert_eq!(f.arity(), 1);
        let mut u = Uni::zero(f.modulus());
        for (e, c) in f.terms() {
            let i = e[0] as usize;
            if u.c.len() <= i {
                u.c.resize(i + 1, 0);
            }
            u.c[i] = c;
        }
        u
    }
}

// ---------------------------------------------------------------------------
// rational functions over F_p(x)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
struct Rat {
    num: Uni,
    den: Uni, // monic, nonzero
}

impl Rat {
    fn new(num: Uni, den: Uni) -> Rat {
        assert!(!den.is_zero(), "zero denominator");
        let m = num.m;
        if num.is_zero() {
            return Rat { num, den: Uni::one(m) };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        let inv = m.inverse(den.lead()).expect("prime field");
        num = num.scale(inv);
        den = den.scale(inv);
        Rat { num, den }
    }

    fn zero(m: ModulusSpec) -> Rat {
        Rat { num: Uni::zero(m), den: Uni::one(m) }
    }

    fn from_poly(num: Uni) -> Rat {
        let den = Uni::one(num.m);
        Rat { num, den }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, other: &Rat) -> Rat {
        Rat::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    fn sub(&self, other: &Rat) -> Rat {
        Rat::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    fn mul(&self, other: &Rat) -> Rat {
        Rat::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    fn recip(&self) -> Rat {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat::new(self.den.clone(), self.num.clone())
    }

    fn frobenius(&self) -> Rat {
        Rat { num: self.num.frobenius(), den: self.den.frobenius() }
    }
}

// ---------------------------------------------------------------------------
// arithmetic in F_p(x)[y] modulo P
// ---------------------------------------------------------------------------

/// Coefficient vectors indexed by y-degree, always reduced to length < n.
struct ModP {
    m: ModulusSpec,
    /// y-coefficients of P, as polynomials in x; pc[n] ≠ 0.
    pc: Vec<Uni>,
    n: usize,
}

impl ModP {
    fn new(p: &ModPoly) -> ModP {
        let m = p.modulus();
        let n = p.per_var_degrees()[1] as usize;
        let mut pc = vec![Uni::zero(m); n + 1];
        for (e, c) in p.terms() {
            let (ex, ey) = (e[0] as usize, e[1] as usize);
            if pc[ey].c.len() <= ex {
                pc[ey].c.resize(ex + 1, 0);
            }
            pc[ey].c[ex] = c;
        }
        ModP { m, pc, n }
    }

    /// Reduce a y-polynomial (arbitrary length) modulo P.
    fn reduce(&self, mut v: Vec<Rat>) -> Vec<Rat> {
        let lead = Rat::new(self.pc[self.n].clone(), Uni::one(self.m));
        let lead_inv = lead.recip();
        while v.len() > self.n {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = v.len() - self.n; // y^k · P eliminates the popped term
            let factor = top.mul(&lead_inv);
            for j in 0..self.n {
                let t = factor.mul(&Rat::from_poly(self.pc[j].clone()));
                v[k + j] = v[k + j].sub(&t);
            }
        }
        v.resize(self.n, Rat::zero(self.m));
        v
    }

    fn mul(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(self.m); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        self.reduce(out)
    }
}

// ---------------------------------------------------------------------------
// truncated univariate series over F_p (for prefix arithmetic)
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Series {
    m: ModulusSpec,
    c: Vec<u64>,
    t: usize,
}

impl Series {
    fn new(m: ModulusSpec, mut c: Vec<u64>, t: usize) -> Series {
        c.resize(t, 0);
        for x in &mut c {
            *x = m.reduce(*x);
        }
        Series { m, c, t }
    }

    fn one(m: ModulusSpec, t: usize) -> Series {
        let mut c = vec![0; t];
        c[0] = 1;
        Series { m, c, t }
    }

    fn mul(&self, other: &Series) -> Series {
        let mut c = vec![0u64; self.t];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().take(self.t - i).enumerate() {
                c[i + j] = self.m.add(c[i + j], self.m.mul(a, b));
            }
        }
        Series { m: self.m, c, t: self.t }
    }
}

// ---------------------------------------------------------------------------
// Ore form search
// ---------------------------------------------------------------------------

/// Find an additive relation `Σ_i g_i f^{p^i} = 0` with `g_0 ≠ 0`.
///
/// The powers `y^{p^i}` are reduced modulo `P` over `F_p(x)` until a linear
/// dependence appears; if its lowest coefficient vanishes, the relation is
/// contracted through the digit-class decomposition `c(x) = Σ_r x^r γ_r(x)^p`
/// and the search recurses on the shorter relation.
pub fn ore_form(spec: &AlgebraicSeriesSpec) -> Result<OreForm, ChristolError> {
    let m = spec.modulus;
    let p = m.p() as usize;
    let modp = ModP::new(&spec.poly);
    let n = modp.n;

    // y^p mod P, by repeated multiplication (p is small).
    let y = {
        let mut v = vec![Rat::zero(m); n.max(2)];
        v[1] = Rat::from_poly(Uni::one(m));
        modp.reduce(v)
    };
    let mut yp = y.clone();
    for _ in 1..p {
        yp = modp.mul(&yp, &y);
    }

    // Rows r_i = y^{p^i} mod P; incremental elimination with combination
    // tracking. basis: (reduced row, combination over original rows).
    let mut basis: Vec<(Vec<Rat>, Vec<Rat>)> = Vec::new();
    let mut row = y.clone(); // r_0
    let mut combo_len = 0usize;
    let relation: Vec<Rat> = loop {
        let mut cur = row.clone();
        let mut combo = vec![Rat::zero(m); combo_len + 1];
        combo[combo_len] = Rat::from_poly(Uni::one(m));
        for (brow, bcombo) in &basis {
            let lead_idx = brow.iter().position(|c| !c.is_zero()).unwrap();
            if cur[lead_idx].is_zero() {
                continue;
            }
            let factor = cur[lead_idx].mul(&brow[lead_idx].recip());
            for j in 0..n {
                let t = factor.mul(&brow[j]);
                cur[j] = cur[j].sub(&t);
            }
            for (j, bc) in bcombo.iter().enumerate() {
                let t = factor.mul(bc);
                combo[j] = combo[j].sub(&t);
            }
        }
        if cur.iter().all(|c| c.is_zero()) {
            break combo;
        }
        basis.push((cur, combo));
        combo_len += 1;
        if combo_len > n {
            // n + 1 vectors in an n-dimensional space must be dependent.
            unreachable!("no dependence among {} rows in dimension {}", combo_len, n);
        }
        // next row: Frobenius of the previous one, evaluated at y^p mod P.
        let frob: Vec<Rat> = row.iter().map(Rat::frobenius).collect();
        let mut next = vec![Rat::zero(m); n];
        for coeff in frob.iter().rev() {
            next = modp.mul(&next, &yp);
            next[0] = next[0].add(coeff);
        }
        row = next;
    };

    // Clear denominators: multiply the combination by the product of all
    // denominators, then strip the content gcd.
    let mut common = Uni::one(m);
    for c in &relation {
        common = common.mul(&c.den).div_exact(&common.gcd(&c.den));
    }
    let mut coeffs: Vec<Uni> = relation
        .iter()
        .map(|c| c.num.mul(&common.div_exact(&c.den)))
        .collect();
    normalize_content(&mut coeffs, m);

    // Contract while the lowest coefficient is zero: write each c_i as
    // Σ_r x^r γ_{i,r}(x)^p and keep one nonzero digit class, shifting all
    // Frobenius powers down by one.
    let mut guard = 0;
    while coeffs[0].is_zero() {
        guard += 1;
        assert!(guard < 64, "contraction failed to terminate");
        let mut found = None;
        'digits: for r in 0..m.p() {
            let gamma: Vec<Uni> = coeffs[1..].iter().map(|c| c.cartier(r)).collect();
            if gamma.iter().any(|g| !g.is_zero()) {
                found = Some(gamma);
                break 'digits;
            }
        }
        coeffs = found.expect("nonzero relation has a nonzero digit class");
        normalize_content(&mut coeffs, m);
    }
    while coeffs.last().is_some_and(Uni::is_zero) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(ChristolError::ZeroPolynomial);
    }

    let form = OreForm {
        modulus: m,
        g: coeffs.iter().map(Uni::to_modpoly).collect(),
    };
    verify_against_prefix(&form, spec)?;
    Ok(form)
}

fn normalize_content(coeffs: &mut [Uni], m: ModulusSpec) {
    let mut g = Uni::zero(m);
    for c in coeffs.iter() {
        g = g.gcd(c);
    }
    if !g.is_zero() {
        for c in coeffs.iter_mut() {
            *c = c.div_exact(&g);
        }
    }
    // Scalar normalization: make the lowest nonzero coefficient monic.
    if let Some(first) = coeffs.iter().find(|c| !c.is_zero()) {
        let inv = m.inverse(first.lead()).expect("prime field");
        for c in coeffs.iter_mut() {
            *c = c.scale(inv);
        }
    }
}

/// Check `Σ_i g_i f^{p^i} ≡ 0 (mod x^T)` on the certified prefix, requiring
/// the prefix to be long enough to make the test meaningful.
fn verify_against_prefix(form: &OreForm, spec: &AlgebraicSeriesSpec) -> Result<(), ChristolError> {
    let m = form.modulus;
    let p = m.p();
    let t = spec.prefix.len();
    let maxdeg = form
        .g
        .iter()
        .map(|g| g.per_var_degrees().first().copied().unwrap_or(0) as u64)
        .max()
        .unwrap_or(0);
    let pm = p.pow(form.height() as u32);
    if (t as u64) < maxdeg + pm + 1 {
        return Err(ChristolError::PrecisionTooLow);
    }
    let mut acc = vec![0u64; t];
    for (i, g) in form.g.iter().enumerate() {
        let pi = p.pow(i as u32) as usize;
        for (e, c) in g.terms() {
            let shift = e[0] as usize;
            // f^{p^i} = f(x^{p^i}) over F_p
            let mut k = 0usize;
            while shift + k * pi < t {
                let idx = shift + k * pi;
                acc[idx] = m.add(acc[idx], m.mul(c, spec.prefix[k]));
                k += 1;
            }
        }
    }
    if acc.iter().any(|&c| c != 0) {
        return Err(ChristolError::PrecisionTooLow);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// automaton construction
// ---------------------------------------------------------------------------

/// Build the base-`p` automaton computing `a_n mod p` from an additive
/// relation. States are tuples `(q_0, …, q_{m−1})` of bounded-degree
/// polynomials denoting the series `(1/g_0)·Σ_i q_i f^{p^i}`; reading digit
/// `d` applies the section operator `Λ_d`.
pub fn christol_automaton(
    ore: &OreForm,
    spec: &AlgebraicSeriesSpec,
) -> Result<Dfao<Residue>, ChristolError> {
    let m = ore.modulus;
    let p = m.p();
    let height = ore.height();
    let g: Vec<Uni> = ore.g.iter().map(Uni::from_modpoly).collect();
    if g[0].is_zero() {
        return Err(ChristolError::DegenerateLeadingCoefficient);
    }
    let g0_deg = g[0].deg().unwrap();
    let gmax = g[1..]
        .iter()
        .filter_map(Uni::deg)
        .max()
        .unwrap_or(0);
    // Degree bound keeping the state space finite.
    let d_bound = g0_deg + gmax.div_ceil(p as usize - 1);
    // Precomputed transition ingredients.
    let g0_pm1 = g[0].pow(p as u32 - 1);
    let g0_pm2 = if p == 2 { Uni::one(m) } else { g[0].pow(p as u32 - 2) };

    // Output evaluation needs the prefix up to the valuation of g_0 plus the
    // state degree bound.
    let needed = d_bound + g0_deg + 1;
    if spec.prefix.len() < needed {
        return Err(ChristolError::PrecisionTooLow);
    }
    let g0_val = g[0].val().unwrap();
    let g0_low = g[0].c[g0_val];
    let g0_low_inv = m.inverse(g0_low).expect("prime field");

    // Coefficient k of Σ_i q_i f^{p^i}, exact for k < prefix length.
    let series_coeff = |q: &[Uni], k: usize| -> u64 {
        let mut acc = 0u64;
        for (i, qi) in q.iter().enumerate() {
            let pi = p.pow(i as u32) as usize;
            for (e, &c) in qi.c.iter().enumerate() {
                if c == 0 || e > k {
                    continue;
                }
                let rest = k - e;
                if rest % pi == 0 {
                    acc = m.add(acc, m.mul(c, spec.prefix[rest / pi]));
                }
            }
        }
        acc
    };
    // ω(q) = constant term of (1/g_0)·Σ q_i f^{p^i}: since the state denotes
    // a power series h with h·g_0 = s, the lowest coefficient of g_0 gives
    // ω = s_{val(g_0)} / g_0[val(g_0)] once s vanishes below that valuation.
    let output = |q: &[Uni]| -> Residue {
        for k in 0..g0_val {
            debug_assert_eq!(series_coeff(q, k), 0, "state is not a power series");
        }
        m.mul(series_coeff(q, g0_val), g0_low_inv)
    };

    let initial: Vec<Uni> = {
        let mut v = vec![Uni::zero(m); height];
        v[0] = g[0].clone();
        v
    };
    let mut index: HashMap<Vec<Uni>, usize> = HashMap::new();
    let mut order: Vec<Vec<Uni>> = vec![initial.clone()];
    index.insert(initial, 0);
    let mut states: Vec<State<Residue>> = Vec::new();
    let mut head = 0;
    while head < order.len() {
        let q = order[head].clone();
        head += 1;
        let mut next = Vec::with_capacity(p as usize);
        for d in 0..p {
            let mut qn = Vec::with_capacity(height);
            for j in 1..=height {
                let qj = if j < height { q[j].clone() } else { Uni::zero(m) };
                let t = g0_pm1.mul(&qj).sub(&g0_pm2.mul(&q[0]).mul(&g[j]));
                let img = t.cartier(d);
                assert!(
                    img.deg().map_or(true, |dg| dg <= d_bound),
                    "transition exceeded the degree bound"
                );
                qn.push(img);
            }
            let ti = *index.entry(qn.clone()).or_insert_with(|| {
                order.push(qn);
                order.len() - 1
            });
            next.push(ti);
        }
        states.push(State { output: output(&q), next });
    }
    Ok(Dfao::new(p, 1, states, 0).expect("construction is total"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ModPoly;

    fn f2() -> ModulusSpec {
        ModulusSpec::new(2, 1).unwrap()
    }

    fn uni(m: ModulusSpec, coeffs: &[i64]) -> ModPoly {
        ModPoly::from_terms(
            m,
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (vec![i as u32], c)),
        )
    }

    /// P = (x+1)²y² + 1 over F_2, root f = 1/(x+1) = 1 + x + x² + …
    fn trinomial_spec(t: usize) -> AlgebraicSeriesSpec {
        let m = f2();
        let p = ModPoly::from_terms(
            m,
            2,
            [(vec![0, 2], 1), (vec![1, 2], 2), (vec![2, 2], 1), (vec![0, 0], 1)],
        );
        AlgebraicSeriesSpec::new(p, vec![1; t]).unwrap()
    }

    #[test]
    fn spec_rejects_wrong_prefix() {
        let m = f2();
        let p = ModPoly::from_terms(m, 2, [(vec![0, 1], 1), (vec![1, 0], 1)]);
        // y + x with prefix of f = x² is not a root.
        let mut prefix = vec![0; 16];
        prefix[2] = 1;
        assert_eq!(
            AlgebraicSeriesSpec::new(p, prefix),
            Err(ChristolError::NotARoot)
        );
    }

    #[test]
    fn ore_form_of_trinomial_curve() {
        // (x+1)²y² + 1 contracts to (x+1)y² + y.
        let spec = trinomial_spec(64);
        let form = ore_form(&spec).unwrap();
        assert_eq!(form.height(), 1);
        assert_eq!(form.coefficient(0), &uni(f2(), &[1]));
        assert_eq!(form.coefficient(1), &uni(f2(), &[1, 1]));
    }

    #[test]
    fn ore_form_of_identity_series() {
        // y + x over F_2 with f = x gives x·y + y².
        let m = f2();
        let p = ModPoly::from_terms(m, 2, [(vec![0, 1], 1), (vec![1, 0], 1)]);
        let mut prefix = vec![0; 16];
        prefix[1] = 1;
        let spec = AlgebraicSeriesSpec::new(p, prefix).unwrap();
        let form = ore_form(&spec).unwrap();
        assert_eq!(form.height(), 1);
        assert_eq!(form.coefficient(0), &uni(m, &[0, 1]));
        assert_eq!(form.coefficient(1), &uni(m, &[1]));
    }

    /// Root prefix of (x+1)^16 y^8 + (x+1)^10 y^2 + x^4 over F_2, via the
    /// contraction u = f²: (x+1)^16 u^4 + (x+1)^10 u + x^4 = 0 solved by
    /// fixed-point iteration, then f_n = u_{2n}.
    fn octic_spec(t: usize) -> AlgebraicSeriesSpec {
        let m = f2();
        let xp1 = Uni { m, c: vec![1, 1] };
        let t2 = 2 * t;
        // truncated inverse of (x+1)^10
        let a = xp1.pow(16);
        let b = xp1.pow(10);
        let mut binv = vec![0u64; t2];
        binv[0] = 1;
        for k in 1..t2 {
            let mut acc = 0u64;
            for (j, &c) in b.c.iter().enumerate().skip(1) {
                if j <= k {
                    acc = m.add(acc, m.mul(c, binv[k - j]));
                }
            }
            acc = m.sub(0, acc);
            binv[k] = m.mul(acc, m.inverse(b.c[0]).unwrap());
        }
        let smul = |x: &[u64], y: &[u64]| -> Vec<u64> {
            let mut out = vec![0u64; t2];
            for (i, &a) in x.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &bb) in y.iter().take(t2 - i).enumerate() {
                    out[i + j] = m.add(out[i + j], m.mul(a, bb));
                }
            }
            out
        };
        let mut u = vec![0u64; t2];
        for _ in 0..t2 {
            // u ← (x⁴ + (x+1)^16 u⁴) / (x+1)^10
            let u2 = smul(&u, &u);
            let u4 = smul(&u2, &u2);
            let mut num = smul(&u4, &{
                let mut av = a.c.clone();
                av.resize(t2, 0);
                av
            });
            num[4] = m.add(num[4], 1);
            u = smul(&num, &binv);
        }
        let f: Vec<u64> = (0..t).map(|nn| u[2 * nn]).collect();
        let poly = ModPoly::from_residue_terms(
            m,
            2,
            a.c.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (vec![i as u32, 8], c))
                .chain(
                    b.c.iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (vec![i as u32, 2], c)),
                )
                .chain([(vec![4, 0], 1u64)]),
        );
        AlgebraicSeriesSpec::new(poly, f).unwrap()
    }

    #[test]
    fn ore_form_of_octic_curve() {
        // (x+1)^16 y^8 + (x+1)^10 y^2 + x^4 contracts to
        // (x+1)^11 y^8 + x²(x+1)³ y^4 + (x+1)^5 y^2 + x² y.
        let spec = octic_spec(256);
        let form = ore_form(&spec).unwrap();
        assert_eq!(form.height(), 3);
        let m = f2();
        let xp1 = Uni { m, c: vec![1, 1] };
        let x2 = Uni { m, c: vec![0, 0, 1] };
        assert_eq!(form.coefficient(0), &x2.to_modpoly());
        assert_eq!(form.coefficient(1), &xp1.pow(5).to_modpoly());
        assert_eq!(form.coefficient(2), &x2.mul(&xp1.pow(3)).to_modpoly());
        assert_eq!(form.coefficient(3), &xp1.pow(11).to_modpoly());
    }

    #[test]
    fn trinomial_automaton_is_single_state_one() {
        let spec = trinomial_spec(64);
        let form = ore_form(&spec).unwrap();
        let d = christol_automaton(&form, &spec).unwrap();
        assert_eq!(d.num_states(), 1);
        assert_eq!(*d.output(d.initial()), 1);
    }

    #[test]
    fn identity_series_automaton_matches_oracle() {
        let m = f2();
        let p = ModPoly::from_terms(m, 2, [(vec![0, 1], 1), (vec![1, 0], 1)]);
        let mut prefix = vec![0; 64];
        prefix[1] = 1;
        let spec = AlgebraicSeriesSpec::new(p, prefix.clone()).unwrap();
        let form = ore_form(&spec).unwrap();
        let d = christol_automaton(&form, &spec).unwrap();
        for n in 0..64u64 {
            assert_eq!(d.run(&[n]).unwrap(), prefix[n as usize], "n={n}");
        }
    }

    #[test]
    fn catalan_automaton_matches_prefix() {
        // x y² + y + 1 over F_2; root is the Catalan generating function.
        let m = f2();
        let t = 128usize;
        let mut cat = vec![0u64; t];
        cat[0] = 1;
        for n in 0..t - 1 {
            let mut s = 0u64;
            for i in 0..=n {
                s = m.add(s, m.mul(cat[i], cat[n - i]));
            }
            cat[n + 1] = s;
        }
        let p = ModPoly::from_terms(m, 2, [(vec![1, 2], 1), (vec![0, 1], 1), (vec![0, 0], 1)]);
        let spec = AlgebraicSeriesSpec::new(p, cat.clone()).unwrap();
        let form = ore_form(&spec).unwrap();
        let d = christol_automaton(&form, &spec).unwrap();
        for n in 0..t as u64 {
            assert_eq!(d.run(&[n]).unwrap(), cat[n as usize], "n={n}");
        }
    }

    #[test]
    fn zero_padding_stability() {
        let spec = octic_spec(256);
        let form = ore_form(&spec).unwrap();
        let d = christol_automaton(&form, &spec).unwrap();
        for s in d.reachable() {
            assert_eq!(d.output(d.step(s, 0)), d.output(s));
        }
        for n in 0..256u64 {
            assert_eq!(d.run(&[n]).unwrap(), spec.prefix()[n as usize], "n={n}");
        }
    }
}
