//! Arithmetic in `Z/(p^α Z)` with 64-bit canonical representatives.

use thiserror::Error;

/// A residue mod `p^α`, stored as its canonical representative in `[0, p^α)`.
pub type Residue = u64;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("alpha must be at least 1")]
    BadAlpha,
    #[error("p^alpha does not fit in 63 bits")]
    Overflow,
    #[error("{0} is not a unit modulo {1}")]
    NotUnit(u64, u64),
}

/// The modulus `p^α` together with its factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModulusSpec {
    p: u64,
    alpha: u32,
    modulus: u64,
}

impl ModulusSpec {
    pub fn new(p: u64, alpha: u32) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if alpha < 1 {
            return Err(ArithError::BadAlpha);
        }
        let mut modulus: u64 = 1;
        for _ in 0..alpha {
            modulus = modulus.checked_mul(p).ok_or(ArithError::Overflow)?;
            if modulus >= (1u64 << 63) {
                return Err(ArithError::Overflow);
            }
        }
        Ok(ModulusSpec { p, alpha, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The same prime with exponent 1.
    pub fn reduce_to_prime(&self) -> ModulusSpec {
        ModulusSpec {
            p: self.p,
            alpha: 1,
            modulus: self.p,
        }
    }

    /// The same prime with a different exponent.
    pub fn with_alpha(&self, alpha: u32) -> Result<ModulusSpec, ArithError> {
        ModulusSpec::new(self.p, alpha)
    }

    pub fn reduce(&self, v: u64) -> Residue {
        v % self.modulus
    }

    pub fn reduce_i64(&self, v: i64) -> Residue {
        let m = self.modulus as i64;
        (((v % m) + m) % m) as u64
    }

    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn neg(&self, a: Residue) -> Residue {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut base: Residue, mut e: u64) -> Residue {
        let mut acc: u64 = 1 % self.modulus;
        base %= self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit mod `p^α`.
    pub fn inverse(&self, a: Residue) -> Result<Residue, ArithError> {
        let a = a % self.modulus;
        if a % self.p == 0 {
            return Err(ArithError::NotUnit(a, self.modulus));
        }
        // Extended Euclid on (a, modulus); gcd is 1 since p ∤ a.
        let (mut r0, mut r1) = (self.modulus as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        let m = self.modulus as i128;
        Ok((((t0 % m) + m) % m) as u64)
    }
}

/// Deterministic Miller–Rabin, valid for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        a %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
