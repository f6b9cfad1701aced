use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, add_mod, inv_mod, is_prime, mul_mod, prime_divisors, sub_mod, ZMod};
use crate::error::{Error, Result};

/// Polynomial over `F_p`, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyModP {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyModP {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        if !is_prime(p) || p > crate::groups::MAX_MODULUS {
            return Err(Error::Domain(format!("{p} is not a supported prime")));
        }
        Ok(Self::from_reduced(p, coeffs.into_iter().map(|c| c % p).collect()))
    }

    fn from_reduced(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    fn x(p: u64) -> Self {
        Self { p, coeffs: vec![0, 1] }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let at = |c: &[u64], i: usize| c.get(i).copied().unwrap_or(0);
        Self::from_reduced(self.p, (0..len).map(|i| sub_mod(at(&self.coeffs, i), at(&other.coeffs, i), self.p)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self { p: self.p, coeffs: vec![] };
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, self.p), self.p);
            }
        }
        Self::from_reduced(self.p, out)
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, divisor: &Self) -> Self {
        let p = self.p;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = inv_mod(divisor.coeffs[dd], p).expect("prime field");
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let top = r.len() - 1;
            let factor = mul_mod(r[top], lead_inv, p);
            if factor != 0 {
                for (i, &c) in divisor.coeffs.iter().enumerate() {
                    let k = top - dd + i;
                    r[k] = sub_mod(r[k], mul_mod(factor, c, p), p);
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Self::from_reduced(p, r)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = inv_mod(lead, self.p).expect("prime field");
                Self::from_reduced(self.p, self.coeffs.iter().map(|&c| mul_mod(c, inv, self.p)).collect())
            }
        }
    }

    /// `base^e mod modulus` by repeated squaring.
    fn pow_mod(base: &Self, mut e: u64, modulus: &Self) -> Self {
        let mut result = Self { p: base.p, coeffs: vec![1] }.rem(modulus);
        let mut b = base.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b).rem(modulus);
            }
            b = b.mul(&b).rem(modulus);
            e >>= 1;
        }
        result
    }

    /// `x^{p^k} mod self`.
    fn frobenius_power(&self, k: usize) -> Self {
        (0..k).fold(Self::x(self.p).rem(self), |acc, _| Self::pow_mod(&acc, self.p, self))
    }
}

impl fmt::Display for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        write!(f, "{} (mod {})", terms.join(" + "), self.p)
    }
}

/// Characteristic polynomial `det(xI - M)` of a row-major `n x n` matrix
/// over `F_p`, by the division-free Berkowitz algorithm.
pub fn charpoly_mod_p(n: usize, entries: &[u64], p: u64) -> Result<PolyModP> {
    if entries.len() != n * n {
        return Err(Error::Domain(format!("{} entries for a {n}x{n} matrix", entries.len())));
    }
    let reduced: Vec<u64> = entries.iter().map(|&e| e % p).collect();
    PolyModP::new(p, arith::berkowitz(&ZMod(p), n, &reduced))
}

/// Rabin's test: a monic `f` of degree `d` is irreducible iff
/// `x^{p^d} = x mod f` and `gcd(x^{p^{d/q}} - x, f) = 1` for each prime `q | d`.
pub fn is_irreducible_mod_p(f: &PolyModP) -> Result<bool> {
    let d = match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => d,
        _ => return Err(Error::Domain(format!("Rabin's test needs a monic polynomial of degree >= 1, got {f}"))),
    };
    if d == 1 {
        return Ok(true);
    }
    let x = PolyModP::x(f.p);
    if f.frobenius_power(d) != x.rem(f) {
        return Ok(false);
    }
    for q in prime_divisors(d as u64) {
        let h = f.frobenius_power(d / q as usize).sub(&x);
        if f.gcd(&h).degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
/// Exponential in the degree; intended as a test oracle.
pub fn has_factor_exhaustive(f: &PolyModP) -> bool {
    let d = f.degree().unwrap_or(0);
    let p = f.p;
    for k in 1..=d / 2 {
        let count = p.pow(k as u32);
        for code in 0..count {
            let mut coeffs: Vec<u64> = (0..k).map(|i| (code / p.pow(i as u32)) % p).collect();
            coeffs.push(1);
            let g = PolyModP::from_reduced(p, coeffs);
            if f.rem(&g).is_zero() {
                return true;
            }
        }
    }
    false
}
