//! Modular integer arithmetic and the division-free characteristic polynomial.

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn residue_i64(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

pub fn residue_big(x: &BigInt, m: u64) -> u64 {
    let r = x % BigInt::from(m);
    let r = if r < BigInt::zero() { r + BigInt::from(m) } else { r };
    u64::try_from(r).expect("residue fits in u64")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Commutative ring with identity, as needed by [`berkowitz`].
pub trait CommRing {
    type Elem: Clone + PartialEq;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }
}

/// `Z/mZ` with residues in `[0, m)`.
#[derive(Debug, Clone, Copy)]
pub struct ZMod(pub u64);

impl CommRing for ZMod {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        add_mod(*a, *b, self.0)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        sub_mod(*a, *b, self.0)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
}

/// The integers, with arbitrary precision.
#[derive(Debug, Clone, Copy)]
pub struct Integers;

impl CommRing for Integers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
}

/// Characteristic polynomial `det(xI - M)` of a square matrix given row-major
/// with side `n`, by Berkowitz's algorithm. No divisions are performed, so any
/// commutative ring works, including `Z/mZ` for composite or small `m`.
///
/// Coefficients are returned in ascending degree order; the result has length
/// `n + 1` and is monic.
pub fn berkowitz<R: CommRing>(ring: &R, n: usize, m: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(m.len(), n * n, "matrix must be n x n");
    if n == 0 {
        return vec![ring.one()];
    }
    let at = |i: usize, j: usize| &m[i * n + j];
    // Descending coefficients of the leading k x k block's charpoly.
    let mut poly = vec![ring.one(), ring.neg(at(0, 0))];
    for k in 1..n {
        // Toeplitz column: 1, -a_kk, -R C, -R M C, ..., -R M^{k-1} C
        let mut toeplitz = Vec::with_capacity(k + 2);
        toeplitz.push(ring.one());
        toeplitz.push(ring.neg(at(k, k)));
        let mut col: Vec<R::Elem> = (0..k).map(|i| at(i, k).clone()).collect();
        for step in 0..k {
            let mut dot = ring.zero();
            for (j, c) in col.iter().enumerate() {
                dot = ring.add(&dot, &ring.mul(at(k, j), c));
            }
            toeplitz.push(ring.neg(&dot));
            if step + 1 < k {
                let mut next = Vec::with_capacity(k);
                for i in 0..k {
                    let mut acc = ring.zero();
                    for (j, c) in col.iter().enumerate() {
                        acc = ring.add(&acc, &ring.mul(at(i, j), c));
                    }
                    next.push(acc);
                }
                col = next;
            }
        }
        let mut next_poly = Vec::with_capacity(k + 2);
        for i in 0..k + 2 {
            let mut acc = ring.zero();
            for (j, p) in poly.iter().enumerate().take(i.min(k) + 1) {
                if i >= j {
                    acc = ring.add(&acc, &ring.mul(&toeplitz[i - j], p));
                }
            }
            next_poly.push(acc);
        }
        poly = next_poly;
    }
    poly.reverse();
    poly
}

/// Determinant via the constant term of the characteristic polynomial.
pub fn determinant<R: CommRing>(ring: &R, n: usize, m: &[R::Elem]) -> R::Elem {
    let cp = berkowitz(ring, n, m);
    if n.is_multiple_of(2) {
        cp[0].clone()
    } else {
        ring.neg(&cp[0])
    }
}

/// Adjugate-based inverse over `Z/mZ` via Cayley-Hamilton:
/// `M^{-1} = -(M^{n-1} + c_{n-1} M^{n-2} + ... + c_1 I) / c_0`.
/// Returns `None` when the determinant is not a unit.
pub fn inverse_mod(n: usize, m: &[u64], modulus: u64) -> Option<Vec<u64>> {
    let ring = ZMod(modulus);
    let cp = berkowitz(&ring, n, m);
    let c0_inv = inv_mod(cp[0], modulus)?;
    // Horner: B = M^{n-1} + c_{n-1} M^{n-2} + ... + c_1 I
    let mut acc = identity_mod(n, modulus);
    for coeff in cp[1..n].iter().rev() {
        acc = matmul_mod(n, &acc, m, modulus);
        for i in 0..n {
            acc[i * n + i] = add_mod(acc[i * n + i], *coeff, modulus);
        }
    }
    let scale = sub_mod(0, c0_inv, modulus);
    Some(acc.iter().map(|&x| mul_mod(x, scale, modulus)).collect())
}

pub fn identity_mod(n: usize, modulus: u64) -> Vec<u64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        out[i * n + i] = 1 % modulus;
    }
    out
}

pub fn matmul_mod(n: usize, a: &[u64], b: &[u64], modulus: u64) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = add_mod(out[i * n + j], mul_mod(aik, b[k * n + j], modulus), modulus);
            }
        }
    }
    out
}
