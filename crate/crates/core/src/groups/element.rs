use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, add_mod, sub_mod};
use crate::error::{Error, Result};

/// Square matrix over `Z/mZ`, entries row-major in `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModMatrix {
    pub n: usize,
    pub modulus: u64,
    pub entries: Vec<u64>,
}

/// Moduli above this could overflow intermediate sums before reduction.
pub const MAX_MODULUS: u64 = 1 << 31;

impl ModMatrix {
    pub fn new(n: usize, modulus: u64, entries: Vec<u64>) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&modulus) {
            return Err(Error::Domain(format!("modulus {modulus} outside [2, 2^31]")));
        }
        if entries.len() != n * n {
            return Err(Error::Domain(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e % modulus).collect();
        Ok(Self { n, modulus, entries })
    }

    pub fn from_signed(n: usize, modulus: u64, entries: &[i64]) -> Result<Self> {
        Self::new(n, modulus, entries.iter().map(|&e| arith::residue_i64(e, modulus)).collect())
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        Self { n, modulus, entries: arith::identity_mod(n, modulus) }
    }

    /// Elementary matrix `I + s E_ij`.
    pub fn elementary(n: usize, modulus: u64, i: usize, j: usize, s: i64) -> Self {
        let mut m = Self::identity(n, modulus);
        m.entries[i * n + j] = add_mod(m.entries[i * n + j], arith::residue_i64(s, modulus), modulus);
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!((self.n, self.modulus), (other.n, other.modulus));
        Self {
            n: self.n,
            modulus: self.modulus,
            entries: arith::matmul_mod(self.n, &self.entries, &other.entries, self.modulus),
        }
    }

    pub fn determinant(&self) -> u64 {
        arith::determinant(&arith::ZMod(self.modulus), self.n, &self.entries)
    }

    pub fn inverse(&self) -> Option<Self> {
        arith::inverse_mod(self.n, &self.entries, self.modulus)
            .map(|entries| Self { n: self.n, modulus: self.modulus, entries })
    }

    pub fn trace(&self) -> u64 {
        (0..self.n).fold(0, |acc, i| add_mod(acc, self.get(i, i), self.modulus))
    }
}

/// An element of one of the supported finite groups, in canonical form.
///
/// Every variant carries enough of its ambient group to multiply without
/// outside context, so structural equality is group-element equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Residue `r` in `Z/mZ`.
    Cyclic { m: u64, r: u64 },
    /// `rot^r * flip^f` in the dihedral group of order `2m`.
    Dihedral { m: u64, rot: u64, flip: bool },
    /// Permutation of `0..n` as an image array.
    Perm(Vec<u32>),
    Matrix(ModMatrix),
    /// Element of a direct product, one component per factor.
    Tuple(Vec<Element>),
}

impl Element {
    /// Short description of the ambient universe, used for mixed-operand errors.
    pub fn ambient(&self) -> String {
        match self {
            Element::Cyclic { m, .. } => format!("Z/{m}"),
            Element::Dihedral { m, .. } => format!("D_{m}"),
            Element::Perm(p) => format!("S_{}", p.len()),
            Element::Matrix(mm) => format!("{}x{} matrices mod {}", mm.n, mm.n, mm.modulus),
            Element::Tuple(xs) => {
                let parts: Vec<_> = xs.iter().map(Element::ambient).collect();
                parts.join(" x ")
            }
        }
    }

    fn same_ambient(&self, other: &Self) -> bool {
        match (self, other) {
            (Element::Cyclic { m: a, .. }, Element::Cyclic { m: b, .. }) => a == b,
            (Element::Dihedral { m: a, .. }, Element::Dihedral { m: b, .. }) => a == b,
            (Element::Perm(a), Element::Perm(b)) => a.len() == b.len(),
            (Element::Matrix(a), Element::Matrix(b)) => a.n == b.n && a.modulus == b.modulus,
            (Element::Tuple(a), Element::Tuple(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_ambient(y))
            }
            _ => false,
        }
    }

    /// Group law. Permutations compose as `(a * b)[i] = a[b[i]]`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !self.same_ambient(other) {
            return Err(Error::MixedGroups(format!("{} vs {}", self.ambient(), other.ambient())));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        match (self, other) {
            (Element::Cyclic { m, r: a }, Element::Cyclic { r: b, .. }) => {
                Element::Cyclic { m: *m, r: add_mod(*a, *b, *m) }
            }
            (
                Element::Dihedral { m, rot: a, flip: f },
                Element::Dihedral { rot: b, flip: g, .. },
            ) => {
                // r^a s^f r^b s^g = r^(a + (-1)^f b) s^(f + g)
                let rot = if *f { sub_mod(*a, *b, *m) } else { add_mod(*a, *b, *m) };
                Element::Dihedral { m: *m, rot, flip: f ^ g }
            }
            (Element::Perm(a), Element::Perm(b)) => {
                Element::Perm(b.iter().map(|&i| a[i as usize]).collect())
            }
            (Element::Matrix(a), Element::Matrix(b)) => Element::Matrix(a.mul(b)),
            (Element::Tuple(a), Element::Tuple(b)) => {
                Element::Tuple(a.iter().zip(b).map(|(x, y)| x.mul_unchecked(y)).collect())
            }
            _ => unreachable!("ambient checked by caller"),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(match self {
            Element::Cyclic { m, r } => Element::Cyclic { m: *m, r: sub_mod(0, *r, *m) },
            Element::Dihedral { m, rot, flip } => {
                if *flip {
                    self.clone()
                } else {
                    Element::Dihedral { m: *m, rot: sub_mod(0, *rot, *m), flip: false }
                }
            }
            Element::Perm(p) => {
                let mut inv = vec![0u32; p.len()];
                for (i, &pi) in p.iter().enumerate() {
                    inv[pi as usize] = i as u32;
                }
                Element::Perm(inv)
            }
            Element::Matrix(mm) => Element::Matrix(mm.inverse().ok_or_else(|| {
                Error::Domain(format!("matrix with determinant {} is not invertible", mm.determinant()))
            })?),
            Element::Tuple(xs) => {
                Element::Tuple(xs.iter().map(Element::inverse).collect::<Result<_>>()?)
            }
        })
    }

    /// Identity of the same ambient group.
    pub fn identity_like(&self) -> Self {
        match self {
            Element::Cyclic { m, .. } => Element::Cyclic { m: *m, r: 0 },
            Element::Dihedral { m, .. } => Element::Dihedral { m: *m, rot: 0, flip: false },
            Element::Perm(p) => Element::Perm((0..p.len() as u32).collect()),
            Element::Matrix(mm) => Element::Matrix(ModMatrix::identity(mm.n, mm.modulus)),
            Element::Tuple(xs) => Element::Tuple(xs.iter().map(Element::identity_like).collect()),
        }
    }

    /// Literal form used in config files and CSV output.
    pub fn to_literal(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Element::Cyclic { r, .. } => json!(r),
            Element::Dihedral { rot, flip, .. } => json!([rot, u8::from(*flip)]),
            Element::Perm(p) => json!(p),
            Element::Matrix(mm) => json!(mm.entries),
            Element::Tuple(xs) => serde_json::Value::Array(xs.iter().map(Element::to_literal).collect()),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Cyclic { r, .. } => write!(f, "{r}"),
            Element::Dihedral { rot, flip, .. } => {
                if *flip {
                    write!(f, "r{rot}s")
                } else {
                    write!(f, "r{rot}")
                }
            }
            Element::Perm(p) => {
                let parts: Vec<_> = p.iter().map(u32::to_string).collect();
                write!(f, "[{}]", parts.join(" "))
            }
            Element::Matrix(mm) => {
                let rows: Vec<String> = mm
                    .entries
                    .chunks(mm.n)
                    .map(|row| row.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
                    .collect();
                write!(f, "[{}]", rows.join("; "))
            }
            Element::Tuple(xs) => {
                let parts: Vec<_> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(p: &[u32]) -> Element {
        Element::Perm(p.to_vec())
    }

    #[test]
    fn cyclic_addition() {
        let a = Element::Cyclic { m: 6, r: 4 };
        let b = Element::Cyclic { m: 6, r: 5 };
        assert_eq!(a.mul(&b).unwrap(), Element::Cyclic { m: 6, r: 3 });
    }

    #[test]
    fn s3_transpositions_compose_to_three_cycle() {
        // (12)(23) = (123) in 1-based cycle notation; arrays are 0-based images.
        let t12 = perm(&[1, 0, 2]);
        let t23 = perm(&[0, 2, 1]);
        assert_eq!(t12.mul(&t23).unwrap(), perm(&[1, 2, 0]));
    }

    #[test]
    fn mixed_operands_rejected() {
        let a = Element::Cyclic { m: 6, r: 1 };
        let b = Element::Cyclic { m: 5, r: 1 };
        assert!(matches!(a.mul(&b), Err(Error::MixedGroups(_))));
        let c = Element::Dihedral { m: 6, rot: 1, flip: false };
        assert!(a.mul(&c).is_err());
    }

    #[test]
    fn dihedral_relation() {
        let r = Element::Dihedral { m: 5, rot: 1, flip: false };
        let s = Element::Dihedral { m: 5, rot: 0, flip: true };
        // s r s = r^-1
        let srs = s.mul(&r).unwrap().mul(&s).unwrap();
        assert_eq!(srs, r.inverse().unwrap());
    }

    #[test]
    fn matrix_inverse_and_determinant() {
        let m = ModMatrix::from_signed(2, 7, &[2, 3, 1, 2]).unwrap();
        assert_eq!(m.determinant(), 1);
        let e = Element::Matrix(m);
        assert_eq!(e.mul(&e.inverse().unwrap()).unwrap(), e.identity_like());
        let singular = Element::Matrix(ModMatrix::from_signed(2, 4, &[2, 0, 0, 1]).unwrap());
        assert!(singular.inverse().is_err());
    }
}
