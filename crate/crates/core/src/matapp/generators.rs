use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{matmul_mod, residue_big};
use crate::error::{Error, Result};
use crate::groups::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Sl,
    /// Symplectic, preserving `J = [[0, I], [-I, 0]]`; `n` is the full dimension.
    Sp,
}

/// A finite set of integer matrices of determinant one (or symplectic),
/// closed under inverses when `symmetric` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerMatrixGenSet {
    pub n: usize,
    pub kind: GroupKind,
    pub matrices: Vec<IntMatrix>,
    pub symmetric: bool,
}

/// The standard skew form of even dimension `n`.
pub fn standard_form(n: usize) -> IntMatrix {
    let h = n / 2;
    let mut j = IntMatrix::identity(n);
    j.entries.iter_mut().for_each(|e| *e = BigInt::zero());
    for i in 0..h {
        j.entries[i * n + h + i] = BigInt::one();
        j.entries[(h + i) * n + i] = -BigInt::one();
    }
    j
}

fn elementary(n: usize, i: usize, j: usize, s: i64) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    m.entries[i * n + j] = BigInt::from(s);
    m
}

/// `[[I, S], [0, I]]` (upper) or `[[I, 0], [S, I]]` for a symmetric `S`.
fn transvection(n: usize, s: &[(usize, usize)], sign: i64, upper: bool) -> IntMatrix {
    let h = n / 2;
    let mut m = IntMatrix::identity(n);
    for &(a, b) in s {
        let (r, c) = if upper { (a, h + b) } else { (h + a, b) };
        m.entries[r * n + c] = BigInt::from(sign);
    }
    m
}

pub fn builtin_generators(kind: GroupKind, n: usize) -> Result<IntegerMatrixGenSet> {
    let matrices = match kind {
        GroupKind::Sl if n >= 2 => (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .flat_map(|(i, j)| [elementary(n, i, j, 1), elementary(n, i, j, -1)])
            .collect(),
        GroupKind::Sp if n >= 4 && n.is_multiple_of(2) => {
            let h = n / 2;
            let mut shapes: Vec<Vec<(usize, usize)>> = (0..h).map(|i| vec![(i, i)]).collect();
            for i in 0..h {
                for j in i + 1..h {
                    shapes.push(vec![(i, j), (j, i)]);
                }
            }
            let mut out = Vec::new();
            for upper in [true, false] {
                for s in &shapes {
                    out.push(transvection(n, s, 1, upper));
                    out.push(transvection(n, s, -1, upper));
                }
            }
            out
        }
        _ => return Err(Error::Domain(format!("no built-in generators for {kind:?} in dimension {n}"))),
    };
    let set = IntegerMatrixGenSet { n, kind, matrices, symmetric: true };
    set.validate()?;
    Ok(set)
}

impl IntegerMatrixGenSet {
    /// Checks the group condition on every generator and, if flagged, that
    /// the inverse of each generator is in the set.
    pub fn validate(&self) -> Result<()> {
        if self.matrices.is_empty() {
            return Err(Error::Domain("empty generating set".into()));
        }
        let form = (self.kind == GroupKind::Sp).then(|| standard_form(self.n));
        if self.kind == GroupKind::Sp && self.n % 2 == 1 {
            return Err(Error::Domain("symplectic matrices need even dimension".into()));
        }
        for (k, m) in self.matrices.iter().enumerate() {
            if m.n != self.n {
                return Err(Error::Domain(format!("generator {k} has dimension {} not {}", m.n, self.n)));
            }
            match &form {
                None if !m.determinant().is_one() => {
                    return Err(Error::Domain(format!("generator {k} has determinant {}", m.determinant())))
                }
                Some(j) if &m.transpose().mul(j).mul(m) != j => {
                    return Err(Error::Domain(format!("generator {k} does not preserve the symplectic form")))
                }
                _ => {}
            }
        }
        if self.symmetric {
            let id = IntMatrix::identity(self.n);
            for (k, m) in self.matrices.iter().enumerate() {
                if !self.matrices.iter().any(|other| m.mul(other) == id) {
                    return Err(Error::Domain(format!("inverse of generator {k} is missing")));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Row-major residues of every generator modulo `p`.
    pub fn reduced(&self, p: u64) -> Vec<Vec<u64>> {
        self.matrices.iter().map(|m| m.entries.iter().map(|e| residue_big(e, p)).collect()).collect()
    }

    /// Exact product of the generators indexed by `word`, left to right.
    pub fn product(&self, word: &[usize]) -> IntMatrix {
        word.iter().fold(IntMatrix::identity(self.n), |acc, &i| acc.mul(&self.matrices[i]))
    }

    /// Product modulo `p`, accumulated letter by letter.
    pub fn product_mod(&self, reduced: &[Vec<u64>], word: &[usize], p: u64) -> Vec<u64> {
        let n = self.n;
        let start = crate::arith::identity_mod(n, p);
        word.iter().fold(start, |acc, &i| matmul_mod(n, &acc, &reduced[i], p))
    }

    pub fn from_file(file: &GeneratorFile) -> Result<Self> {
        let matrices = file
            .matrices
            .iter()
            .map(|rows| {
                if rows.len() != file.n || rows.iter().any(|r| r.len() != file.n) {
                    return Err(Error::Domain(format!("generator is not {0}x{0}", file.n)));
                }
                IntMatrix::from_i64(file.n, &rows.concat())
            })
            .collect::<Result<Vec<_>>>()?;
        let set = Self { n: file.n, kind: file.kind, matrices, symmetric: file.symmetric };
        set.validate()?;
        Ok(set)
    }
}

/// JSON form of a generating set: nested row-major integer matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub kind: GroupKind,
    pub n: usize,
    pub matrices: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub symmetric: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::reduce_mod;
    use rand::{Rng, SeedableRng};

    #[test]
    fn sl2_set() {
        let set = builtin_generators(GroupKind::Sl, 2).unwrap();
        assert_eq!(set.len(), 4);
        let mut literals: Vec<Vec<i64>> = set
            .matrices
            .iter()
            .map(|m| m.entries.iter().map(|e| e.try_into().unwrap()).collect())
            .collect();
        literals.sort();
        assert_eq!(literals, vec![vec![1, -1, 0, 1], vec![1, 0, -1, 1], vec![1, 0, 1, 1], vec![1, 1, 0, 1]]);
    }

    #[test]
    fn sl3_and_sp4_sets() {
        let sl3 = builtin_generators(GroupKind::Sl, 3).unwrap();
        assert_eq!(sl3.len(), 12);
        let sp4 = builtin_generators(GroupKind::Sp, 4).unwrap();
        let j = standard_form(4);
        for g in &sp4.matrices {
            assert_eq!(g.transpose().mul(&j).mul(g), j);
        }
        assert!(builtin_generators(GroupKind::Sp, 5).is_err());
        assert!(builtin_generators(GroupKind::Sp, 2).is_err());
        assert!(builtin_generators(GroupKind::Sl, 1).is_err());
    }

    #[test]
    fn sp4_generators_generate_sp4_mod_3() {
        use crate::groups::FiniteGroup;
        let sp4 = builtin_generators(GroupKind::Sp, 4).unwrap();
        let gens: Vec<_> = sp4.matrices.iter().map(|m| reduce_mod(m, 3).unwrap()).collect();
        let group = FiniteGroup::enumerate_by_bfs(&gens).unwrap();
        // |Sp(4, 3)| = 3^4 (3^2 - 1)(3^4 - 1)
        assert_eq!(group.order(), 81 * 8 * 80);
    }

    #[test]
    fn validation_rejects_bad_sets() {
        let file = GeneratorFile { kind: GroupKind::Sl, n: 2, matrices: vec![vec![vec![2, 0], vec![0, 1]]], symmetric: false };
        assert!(IntegerMatrixGenSet::from_file(&file).is_err());
        let file = GeneratorFile { kind: GroupKind::Sl, n: 2, matrices: vec![vec![vec![1, 1], vec![0, 1]]], symmetric: true };
        assert!(IntegerMatrixGenSet::from_file(&file).is_err());
        let file = GeneratorFile { kind: GroupKind::Sl, n: 2, matrices: vec![vec![vec![1, 1], vec![0, 1]]], symmetric: false };
        assert!(IntegerMatrixGenSet::from_file(&file).is_ok());
        let json = r#"{"kind": "sp", "n": 4, "matrices": [[[1,0,1,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]]}"#;
        let file: GeneratorFile = serde_json::from_str(json).unwrap();
        assert!(IntegerMatrixGenSet::from_file(&file).is_ok());
    }

    #[test]
    fn reduction_commutes_with_products() {
        let set = builtin_generators(GroupKind::Sl, 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for p in [2u64, 7, 101] {
            let reduced = set.reduced(p);
            for _ in 0..1000 {
                let len = rng.gen_range(0..12);
                let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..set.len())).collect();
                let exact = set.product(&word);
                let expected: Vec<u64> = exact.entries.iter().map(|e| residue_big(e, p)).collect();
                assert_eq!(set.product_mod(&reduced, &word, p), expected);
            }
        }
    }
}
