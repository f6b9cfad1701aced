//! Finite groups used as decoration targets and as finite quotients.
//!
//! Every group is materialized as an explicit element list. The position of an
//! element in that list is its canonical index; distributions, transfer
//! operators and Cayley graphs are all indexed this way. Index 0 is always the
//! identity.

mod descriptor;
mod element;
mod quotient;

use std::collections::{HashMap, VecDeque};

pub use descriptor::GroupDescriptor;
pub use element::{Element, ModMatrix, MAX_MODULUS};
pub use quotient::{reduce_mod, IntMatrix, QuotientMap};

use crate::error::{Error, Result};

/// Default upper bound on the number of elements materialized by BFS.
pub const DEFAULT_ENUMERATION_CAP: usize = 10_000_000;

#[derive(Debug, Clone)]
pub enum Family {
    Cyclic { m: u64 },
    Dihedral { m: u64 },
    Product(Vec<FiniteGroup>),
    Permutation { degree: usize, generators: Vec<Element> },
    Matrix { n: usize, modulus: u64, generators: Vec<Element> },
    /// Subgroup generated inside a cyclic, dihedral or product ambient group.
    Generated { generators: Vec<Element> },
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    family: Family,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
}

impl FiniteGroup {
    fn from_elements(family: Family, elements: Vec<Element>) -> Self {
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Self { family, elements, index }
    }

    pub fn cyclic(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("cyclic group needs m >= 1".into()));
        }
        check_cap("cyclic group", m as u128, DEFAULT_ENUMERATION_CAP)?;
        let elements = (0..m).map(|r| Element::Cyclic { m, r }).collect();
        Ok(Self::from_elements(Family::Cyclic { m }, elements))
    }

    /// Dihedral group of order `2m`: rotations `r^0..r^{m-1}` first, then the
    /// reflections `r^k s`.
    pub fn dihedral(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("dihedral group needs m >= 1".into()));
        }
        check_cap("dihedral group", 2 * m as u128, DEFAULT_ENUMERATION_CAP)?;
        let elements = [false, true]
            .into_iter()
            .flat_map(|flip| (0..m).map(move |rot| Element::Dihedral { m, rot, flip }))
            .collect();
        Ok(Self::from_elements(Family::Dihedral { m }, elements))
    }

    /// Direct product; elements ordered lexicographically with the last
    /// factor varying fastest.
    pub fn product(factors: Vec<FiniteGroup>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Domain("direct product of zero factors".into()));
        }
        let order: u128 = factors.iter().map(|g| g.order() as u128).product();
        check_cap("direct product", order, DEFAULT_ENUMERATION_CAP)?;
        let mut tuples: Vec<Vec<Element>> = vec![Vec::new()];
        for factor in &factors {
            tuples = tuples
                .into_iter()
                .flat_map(|prefix| {
                    factor.elements.iter().map(move |e| {
                        let mut t = prefix.clone();
                        t.push(e.clone());
                        t
                    })
                })
                .collect();
        }
        let elements = tuples.into_iter().map(Element::Tuple).collect();
        Ok(Self::from_elements(Family::Product(factors), elements))
    }

    /// `SL(n, Z/mZ)`, enumerated by BFS from the elementary matrices
    /// `I + E_ij` (`i != j`, lexicographic order).
    pub fn special_linear(n: usize, modulus: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("matrix size must be >= 1".into()));
        }
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    gens.push(Element::Matrix(ModMatrix::elementary(n, modulus, i, j, 1)));
                }
            }
        }
        if gens.is_empty() {
            // SL(1) is trivial.
            gens.push(Element::Matrix(ModMatrix::identity(n, modulus)));
        }
        ModMatrix::new(n, modulus, vec![0; n * n])?;
        Self::enumerate_by_bfs(&gens)
    }

    pub fn enumerate_by_bfs(generators: &[Element]) -> Result<Self> {
        Self::enumerate_by_bfs_with_cap(generators, DEFAULT_ENUMERATION_CAP)
    }

    /// Subgroup generated by `generators`, in BFS discovery order starting
    /// from the identity and multiplying on the right by each generator in
    /// the given order.
    pub fn enumerate_by_bfs_with_cap(generators: &[Element], cap: usize) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Domain("BFS enumeration needs at least one generator".into()))?;
        for g in &generators[1..] {
            first.mul(g)?;
        }
        for g in generators {
            g.inverse()?;
        }
        let identity = first.identity_like();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Element, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let next = elements[i].mul_unchecked(g);
                if !index.contains_key(&next) {
                    if elements.len() >= cap {
                        return Err(Error::ResourceCap {
                            what: "group enumeration".into(),
                            needed: cap as u128 + 1,
                            cap: cap as u128,
                        });
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let family = match first {
            Element::Perm(p) => Family::Permutation { degree: p.len(), generators: generators.to_vec() },
            Element::Matrix(mm) => Family::Matrix {
                n: mm.n,
                modulus: mm.modulus,
                generators: generators.to_vec(),
            },
            _ => Family::Generated { generators: generators.to_vec() },
        };
        Ok(Self { family, elements, index })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn identity(&self) -> &Element {
        &self.elements[0]
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.index.contains_key(e)
    }

    pub fn require_index(&self, e: &Element) -> Result<usize> {
        self.index_of(e)
            .ok_or_else(|| Error::MixedGroups(format!("{e} is not an element of {}", self.describe())))
    }

    /// Group law on members of this group.
    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        self.require_index(a)?;
        self.require_index(b)?;
        a.mul(b)
    }

    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].mul_unchecked(&self.elements[b])]
    }

    pub fn inverse_idx(&self, a: usize) -> usize {
        let inv = self.elements[a].inverse().expect("group elements are invertible");
        self.index[&inv]
    }

    /// Table `gamma -> gamma * t` for a fixed `t`, by index.
    pub fn right_translation(&self, t: usize) -> Vec<usize> {
        (0..self.order()).map(|g| self.mul_idx(g, t)).collect()
    }

    /// Elements (by index) of the subgroup generated by `gens`, identity first.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            head += 1;
            for &g in gens {
                let y = self.mul_idx(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out
    }

    /// Normal closure of `seeds` in the subgroup generated by `ambient_gens`
    /// (normally the whole group).
    pub fn normal_closure(&self, seeds: &[usize], ambient_gens: &[usize]) -> Vec<usize> {
        let mut gens: Vec<usize> = seeds.to_vec();
        let conjugators: Vec<(usize, usize)> =
            ambient_gens.iter().map(|&t| (t, self.inverse_idx(t))).collect();
        loop {
            let members = self.subgroup_generated(&gens);
            let mut in_sub = vec![false; self.order()];
            for &x in &members {
                in_sub[x] = true;
            }
            let mut added = false;
            for &s in gens.clone().iter() {
                for &(t, t_inv) in &conjugators {
                    let c = self.mul_idx(self.mul_idx(t, s), t_inv);
                    if !in_sub[c] {
                        gens.push(c);
                        in_sub[c] = true;
                        added = true;
                    }
                }
            }
            if !added {
                return members;
            }
        }
    }

    pub fn describe(&self) -> String {
        match &self.family {
            Family::Cyclic { m } => format!("Z/{m}"),
            Family::Dihedral { m } => format!("D_{m} (order {})", 2 * m),
            Family::Product(fs) => fs.iter().map(|f| f.describe()).collect::<Vec<_>>().join(" x "),
            Family::Permutation { degree, .. } => {
                format!("permutation group of degree {degree}, order {}", self.order())
            }
            Family::Matrix { n, modulus, .. } => {
                format!("{n}x{n} matrix group mod {modulus}, order {}", self.order())
            }
            Family::Generated { .. } => format!("generated subgroup of order {}", self.order()),
        }
    }
}

fn check_cap(what: &str, needed: u128, cap: usize) -> Result<()> {
    if needed > cap as u128 {
        return Err(Error::ResourceCap { what: what.into(), needed, cap: cap as u128 });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(g: &FiniteGroup) {
        let n = g.order();
        let mut seen = std::collections::HashSet::new();
        for e in g.elements() {
            assert!(seen.insert(e.clone()), "duplicate element {e}");
        }
        assert_eq!(g.identity(), &g.element(0).identity_like());
        for a in 0..n {
            assert_eq!(g.mul_idx(a, 0), a);
            assert_eq!(g.mul_idx(0, a), a);
            assert_eq!(g.mul_idx(a, g.inverse_idx(a)), 0);
        }
        if n <= 60 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assert_eq!(
                            g.mul_idx(g.mul_idx(a, b), c),
                            g.mul_idx(a, g.mul_idx(b, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn builtin_families_satisfy_axioms() {
        check_axioms(&FiniteGroup::cyclic(6).unwrap());
        check_axioms(&FiniteGroup::dihedral(4).unwrap());
        check_axioms(&FiniteGroup::dihedral(3).unwrap());
        check_axioms(
            &FiniteGroup::product(vec![FiniteGroup::cyclic(2).unwrap(), FiniteGroup::dihedral(3).unwrap()])
                .unwrap(),
        );
        check_axioms(&FiniteGroup::special_linear(2, 3).unwrap());
        let s3 = FiniteGroup::enumerate_by_bfs(&[
            Element::Perm(vec![1, 0, 2]),
            Element::Perm(vec![1, 2, 0]),
        ])
        .unwrap();
        assert_eq!(s3.order(), 6);
        check_axioms(&s3);
    }

    #[test]
    fn sl2_orders_match_closed_formula() {
        for p in [3u64, 5, 7, 11, 13] {
            let g = FiniteGroup::special_linear(2, p).unwrap();
            assert_eq!(g.order() as u64, p * (p * p - 1), "p = {p}");
        }
    }

    #[test]
    fn sl2_mod3_from_two_unipotents() {
        let a = Element::Matrix(ModMatrix::from_signed(2, 3, &[1, 1, 0, 1]).unwrap());
        let b = Element::Matrix(ModMatrix::from_signed(2, 3, &[1, 0, 1, 1]).unwrap());
        let g = FiniteGroup::enumerate_by_bfs(&[a, b]).unwrap();
        assert_eq!(g.order(), 24);
        assert!(g.elements().iter().all(|e| match e {
            Element::Matrix(m) => m.determinant() == 1,
            _ => false,
        }));
    }

    #[test]
    fn cyclic_from_single_generator() {
        let g = FiniteGroup::enumerate_by_bfs(&[Element::Cyclic { m: 7, r: 1 }]).unwrap();
        assert_eq!(g.order(), 7);
        let h = FiniteGroup::enumerate_by_bfs(&[Element::Cyclic { m: 4, r: 2 }]).unwrap();
        assert_eq!(h.order(), 2);
    }

    #[test]
    fn bfs_order_is_deterministic() {
        let gens = [
            Element::Matrix(ModMatrix::from_signed(2, 5, &[1, 1, 0, 1]).unwrap()),
            Element::Matrix(ModMatrix::from_signed(2, 5, &[1, 0, 1, 1]).unwrap()),
        ];
        let a = FiniteGroup::enumerate_by_bfs(&gens).unwrap();
        let b = FiniteGroup::enumerate_by_bfs(&gens).unwrap();
        assert_eq!(a.order(), 120);
        assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let err = FiniteGroup::enumerate_by_bfs_with_cap(&[Element::Cyclic { m: 100, r: 1 }], 10)
            .unwrap_err();
        assert!(matches!(err, Error::ResourceCap { .. }));
    }

    #[test]
    fn group_mul_rejects_foreign_elements() {
        let g = FiniteGroup::cyclic(6).unwrap();
        let a = Element::Cyclic { m: 6, r: 4 };
        assert_eq!(g.mul(&a, &Element::Cyclic { m: 6, r: 5 }).unwrap(), Element::Cyclic { m: 6, r: 3 });
        assert!(g.mul(&a, &Element::Cyclic { m: 5, r: 1 }).is_err());
    }

    #[test]
    fn normal_closure_in_s3() {
        let s3 = FiniteGroup::enumerate_by_bfs(&[
            Element::Perm(vec![1, 0, 2]),
            Element::Perm(vec![0, 2, 1]),
        ])
        .unwrap();
        let t = s3.index_of(&Element::Perm(vec![1, 0, 2])).unwrap();
        assert_eq!(s3.subgroup_generated(&[t]).len(), 2);
        let gens: Vec<usize> = (1..s3.order()).collect();
        assert_eq!(s3.normal_closure(&[t], &gens).len(), 6);
        let c = s3.index_of(&Element::Perm(vec![1, 2, 0])).unwrap();
        assert_eq!(s3.normal_closure(&[c], &gens).len(), 3);
    }
}
