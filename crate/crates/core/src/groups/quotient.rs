use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Element, ModMatrix};
use crate::arith::{self, Integers};
use crate::error::{Error, Result};

/// Square integer matrix, row-major, arbitrary precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub n: usize,
    pub entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_i64(n: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Domain(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        Ok(Self { n, entries: entries.iter().map(|&e| BigInt::from(e)).collect() })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        Self { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Self { n, entries }
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect();
        Self { n, entries }
    }

    pub fn determinant(&self) -> BigInt {
        arith::determinant(&Integers, self.n, &self.entries)
    }

    /// Characteristic polynomial over `Z`, ascending coefficients, monic.
    pub fn charpoly(&self) -> Vec<BigInt> {
        arith::berkowitz(&Integers, self.n, &self.entries)
    }
}

/// Entrywise reduction `M -> M mod m`, a homomorphism from integer matrix
/// groups onto their finite images.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientMap {
    pub n: usize,
    pub modulus: u64,
}

impl QuotientMap {
    pub fn new(n: usize, modulus: u64) -> Result<Self> {
        ModMatrix::new(n, modulus, vec![0; n * n])?;
        Ok(Self { n, modulus })
    }

    pub fn reduce(&self, m: &IntMatrix) -> Result<Element> {
        if m.n != self.n {
            return Err(Error::Domain(format!("expected {0}x{0} matrix, got {1}x{1}", self.n, m.n)));
        }
        reduce_mod(m, self.modulus)
    }
}

/// Reduce a square integer matrix entrywise into `[0, modulus)`.
pub fn reduce_mod(m: &IntMatrix, modulus: u64) -> Result<Element> {
    if modulus < 2 {
        return Err(Error::Domain(format!("modulus {modulus} < 2")));
    }
    let entries = m.entries.iter().map(|e| arith::residue_big(e, modulus)).collect();
    Ok(Element::Matrix(ModMatrix::new(m.n, modulus, entries)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn entries(e: &Element) -> Vec<u64> {
        match e {
            Element::Matrix(m) => m.entries.clone(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn reduction_examples() {
        let a = IntMatrix::from_i64(2, &[1, 5, 0, 1]).unwrap();
        assert_eq!(entries(&reduce_mod(&a, 5).unwrap()), vec![1, 0, 0, 1]);
        let b = IntMatrix::from_i64(2, &[2, 3, 1, 2]).unwrap();
        assert_eq!(entries(&reduce_mod(&b, 2).unwrap()), vec![0, 1, 1, 0]);
        let c = IntMatrix::from_i64(2, &[-1, -8, 3, 25]).unwrap();
        assert_eq!(entries(&reduce_mod(&c, 7).unwrap()), vec![6, 6, 3, 4]);
    }

    fn random_sl3(rng: &mut ChaCha8Rng) -> IntMatrix {
        let mut m = IntMatrix::identity(3);
        for _ in 0..8 {
            let i = rng.gen_range(0..3);
            let mut j = rng.gen_range(0..3);
            while j == i {
                j = rng.gen_range(0..3);
            }
            let mut e = vec![0i64; 9];
            for k in 0..3 {
                e[k * 3 + k] = 1;
            }
            e[i * 3 + j] = rng.gen_range(-3..=3);
            m = m.mul(&IntMatrix::from_i64(3, &e).unwrap());
        }
        m
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q = QuotientMap::new(3, 7).unwrap();
        for _ in 0..1000 {
            let a = random_sl3(&mut rng);
            let b = random_sl3(&mut rng);
            assert_eq!(a.determinant(), BigInt::one());
            let lhs = q.reduce(&a.mul(&b)).unwrap();
            let rhs = q.reduce(&a).unwrap().mul(&q.reduce(&b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            let Element::Matrix(ref red) = lhs else { unreachable!() };
            assert_eq!(red.determinant(), 1);
        }
    }
}
