//! Brute-force oracles, independent of any automaton: curve-root series
//! solved coefficient by coefficient, exact binomial-sum evaluations, and
//! Pascal triangles.

use crate::parser::IntPoly;
use diagonal_automata::modarith::{ModulusSpec, Residue};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum OracleError {
    #[error("curve is not quadratic in its last variable")]
    NotQuadratic,
    #[error("the linearized curve coefficient is not a unit mod p; cannot solve the series")]
    NotSolvable,
    #[error("requested term count {0} exceeds the compute budget {1}")]
    BudgetExceeded(usize, usize),
}

/// Hard ceiling on oracle term counts; oracles are quadratic-time.
pub const ORACLE_BUDGET: usize = 1 << 17;

/// Coefficients of the power-series root `z = c + f(x)` (with `f(0) = 0`) of
/// a curve `A(x)·z² + B(x)·z + C(x) = 0`, reduced mod `p^α`.
///
/// Solves term by term: substituting `z = y + c` gives
/// `a(x)y² + b(x)y + d(x) = 0` with `d(0) = 0`, and each new coefficient is
/// determined by `f_n = −[xⁿ](a·f² + b·f + d) / b(0)`, which only needs
/// earlier coefficients. Requires `b(0)` to be a unit mod p.
pub fn curve_series(
    curve: &IntPoly,
    shift: i64,
    modulus: ModulusSpec,
    n_terms: usize,
) -> Result<Vec<Residue>, OracleError> {
    if n_terms > ORACLE_BUDGET {
        return Err(OracleError::BudgetExceeded(n_terms, ORACLE_BUDGET));
    }
    let m = modulus;
    // split by z-degree into univariate coefficient arrays A, B, C mod p^α
    let zdeg = curve.keys().map(|e| e[1]).max().unwrap_or(0);
    if zdeg != 2 && zdeg != 1 {
        return Err(OracleError::NotQuadratic);
    }
    let xdeg = curve.keys().map(|e| e[0]).max().unwrap_or(0) as usize;
    let mut coeff = vec![vec![0u64; xdeg + 1]; 3];
    for (e, &c) in curve {
        coeff[e[1] as usize][e[0] as usize] = m.reduce_i64(c);
    }
    // substitute z = y + shift: a = A, b = 2Ac + B, d = Ac² + Bc + C
    let c0 = m.reduce_i64(shift);
    let a: Vec<u64> = coeff[2].clone();
    let b: Vec<u64> = (0..=xdeg)
        .map(|i| m.add(m.mul(m.mul(2, coeff[2][i]), c0), coeff[1][i]))
        .collect();
    let d: Vec<u64> = (0..=xdeg)
        .map(|i| {
            m.add(
                m.add(m.mul(coeff[2][i], m.mul(c0, c0)), m.mul(coeff[1][i], c0)),
                coeff[0][i],
            )
        })
        .collect();
    if d[0] != 0 {
        return Err(OracleError::NotSolvable); // the shifted root would not vanish at 0
    }
    let b0_inv = m.inverse(b[0]).map_err(|_| OracleError::NotSolvable)?;
    let mut f = vec![0u64; n_terms.max(1)];
    for n in 1..n_terms {
        // [xⁿ] (a·f² + b·f + d), using only f_1..f_{n−1} (f² at xⁿ has no
        // f_n contribution because f has no constant term).
        let mut acc = if n <= xdeg { d[n] } else { 0 };
        for (e, &be) in b.iter().enumerate().skip(1) {
            if e > n {
                break;
            }
            acc = m.add(acc, m.mul(be, f[n - e]));
        }
        for (e, &ae) in a.iter().enumerate() {
            if e > n {
                break;
            }
            let t = n - e;
            let mut sq = 0u64; // [x^t] f²
            for i in 1..t {
                sq = m.add(sq, m.mul(f[i], f[t - i]));
            }
            acc = m.add(acc, m.mul(ae, sq));
        }
        f[n] = m.mul(m.sub(0, acc), b0_inv);
    }
    // reported sequence = coefficients of z = f + shift
    f[0] = c0;
    Ok(f)
}

/// Apéry numbers for ζ(3): `A(n) = Σ_k C(n,k)² C(n+k,k)²`, reduced mod `p^α`.
pub fn apery_zeta3(n_terms: usize, modulus: ModulusSpec) -> Result<Vec<Residue>, OracleError> {
    binomial_sum(n_terms, modulus, true)
}

/// Apéry numbers for ζ(2): `B(n) = Σ_k C(n,k)² C(n+k,k)`, reduced mod `p^α`.
pub fn apery_zeta2(n_terms: usize, modulus: ModulusSpec) -> Result<Vec<Residue>, OracleError> {
    binomial_sum(n_terms, modulus, false)
}

fn binomial_sum(
    n_terms: usize,
    modulus: ModulusSpec,
    square_second: bool,
) -> Result<Vec<Residue>, OracleError> {
    if n_terms > 4096 {
        return Err(OracleError::BudgetExceeded(n_terms, 4096));
    }
    let m = BigUint::from(modulus.modulus());
    Ok((0..n_terms as u64)
        .map(|n| {
            // Both binomials advance incrementally in k:
            // C(n,k+1) = C(n,k)·(n−k)/(k+1);
            // C(n+k+1,k+1) = C(n+k,k)·(n+k+1)·(n+k... )/((k+1)·n)… — kept
            // simple: C(n+k,k) = C(n+k−1,k−1)·(n+k)/k.
            let mut c1 = BigUint::from(1u32); // C(n, k)
            let mut c2 = BigUint::from(1u32); // C(n+k, k)
            let mut total = BigUint::from(0u32);
            for k in 0..=n {
                if k > 0 {
                    c1 = c1 * BigUint::from(n - k + 1) / BigUint::from(k);
                    c2 = c2 * BigUint::from(n + k) / BigUint::from(k);
                }
                let t = if square_second {
                    (&c1 * &c1) * (&c2 * &c2)
                } else {
                    (&c1 * &c1) * &c2
                };
                total += t;
            }
            (total % &m).to_u64().unwrap()
        })
        .collect())
}

/// Central trinomial coefficients `T(n) = [xⁿ](1 + x + x²)ⁿ` mod `p^α`, via
/// the exact integer recurrence `n·T(n) = (2n−1)·T(n−1) + 3(n−1)·T(n−2)`.
pub fn central_trinomial(n_terms: usize, modulus: ModulusSpec) -> Result<Vec<Residue>, OracleError> {
    if n_terms > ORACLE_BUDGET {
        return Err(OracleError::BudgetExceeded(n_terms, ORACLE_BUDGET));
    }
    let mut exact: Vec<BigUint> = Vec::with_capacity(n_terms.max(2));
    exact.push(BigUint::from(1u32));
    exact.push(BigUint::from(1u32));
    for n in 2..n_terms.max(2) as u64 {
        let v = (BigUint::from(2 * n - 1) * &exact[(n - 1) as usize]
            + BigUint::from(3 * (n - 1)) * &exact[(n - 2) as usize])
            / BigUint::from(n);
        exact.push(v);
    }
    let m = BigUint::from(modulus.modulus());
    Ok(exact
        .iter()
        .take(n_terms)
        .map(|v| (v % &m).to_u64().unwrap())
        .collect())
}

/// Pascal triangle rows `0..n_rows` mod `p^α` (row n has entries C(n, 0..n)).
pub fn pascal_rows(n_rows: usize, modulus: ModulusSpec) -> Vec<Vec<Residue>> {
    let mut t: Vec<Vec<u64>> = Vec::with_capacity(n_rows);
    for n in 0..n_rows {
        let mut row = vec![0u64; n + 1];
        row[0] = 1;
        for k in 1..=n {
            let up = if k < n { t[n - 1][k] } else { 0 };
            row[k] = modulus.add(t[n - 1][k - 1], up);
        }
        t.push(row);
    }
    t
}

/// `C(n, k) mod p^α` from a Pascal table, tolerating `k > n`.
pub fn binomial(rows: &[Vec<Residue>], n: u64, k: u64) -> Residue {
    if k > n {
        0
    } else {
        rows[n as usize][k as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_int_poly;

    fn m(p: u64, a: u32) -> ModulusSpec {
        ModulusSpec::new(p, a).unwrap()
    }

    #[test]
    fn catalan_series_from_curve() {
        let curve = parse_int_poly("x y^2 - y + 1", 2).unwrap();
        let got = curve_series(&curve, 1, m(1009, 1), 8).unwrap();
        assert_eq!(got, vec![1, 1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn motzkin_series_from_curve() {
        let curve = parse_int_poly("x^2 y^2 + (x - 1) y + 1", 2).unwrap();
        let got = curve_series(&curve, 1, m(1009, 1), 8).unwrap();
        assert_eq!(got, vec![1, 1, 2, 4, 9, 21, 51, 127]);
    }

    #[test]
    fn apery_first_terms() {
        let a = apery_zeta3(5, m(1000003, 1)).unwrap();
        assert_eq!(a, vec![1, 5, 73, 1445, 33001]);
        let b = apery_zeta2(5, m(1000003, 1)).unwrap();
        assert_eq!(b, vec![1, 3, 19, 147, 1251]);
    }

    #[test]
    fn trinomial_first_terms() {
        let t = central_trinomial(8, m(1009, 1)).unwrap();
        assert_eq!(t, vec![1, 1, 3, 7, 19, 51, 141, 393]);
    }

    #[test]
    fn trinomial_matches_curve_for_odd_primes() {
        // (x+1)(3x−1)z² + 1 with shift 1, linear coefficient −2: solvable
        // for odd p and must agree with the recurrence oracle.
        let curve = parse_int_poly("(x + 1)(3 x - 1) y^2 + 1", 2).unwrap();
        for p in [3u64, 5, 7, 13] {
            let a = curve_series(&curve, 1, m(p, 1), 64).unwrap();
            let b = central_trinomial(64, m(p, 1)).unwrap();
            assert_eq!(a, b, "p = {p}");
        }
        assert_eq!(curve_series(&curve, 1, m(2, 1), 4), Err(OracleError::NotSolvable));
    }

    #[test]
    fn pascal_binomial_lookup() {
        let rows = pascal_rows(12, m(1009, 1));
        assert_eq!(binomial(&rows, 10, 4), 210);
        assert_eq!(binomial(&rows, 3, 5), 0);
    }
}
