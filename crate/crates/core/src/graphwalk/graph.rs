use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::groups::{Element, FiniteGroup};

/// Directed multigraph with a group element attached to every vertex.
///
/// `adjacency[u][v]` is the number of edges `u -> v`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedGraph {
    adjacency: Vec<Vec<u64>>,
    decorations: Vec<Element>,
    undirected: bool,
}

impl DecoratedGraph {
    pub fn new(adjacency: Vec<Vec<u64>>, decorations: Vec<Element>) -> Result<Self> {
        let n = adjacency.len();
        if n == 0 {
            return Err(Error::Domain("graph needs at least one vertex".into()));
        }
        if adjacency.iter().any(|row| row.len() != n) {
            return Err(Error::Domain("adjacency matrix must be square".into()));
        }
        if decorations.len() != n {
            return Err(Error::Domain(format!("{} decorations for {n} vertices", decorations.len())));
        }
        for d in &decorations[1..] {
            decorations[0].mul(d)?;
        }
        let undirected = (0..n).all(|i| (0..n).all(|j| adjacency[i][j] == adjacency[j][i]));
        Ok(Self { adjacency, decorations, undirected })
    }

    /// Build from an undirected description; the adjacency is symmetrized
    /// entrywise by `max(a_ij, a_ji)`.
    pub fn new_undirected(mut adjacency: Vec<Vec<u64>>, decorations: Vec<Element>) -> Result<Self> {
        let n = adjacency.len();
        if adjacency.iter().all(|row| row.len() == n) {
            for i in 0..n {
                for j in 0..i {
                    let m = adjacency[i][j].max(adjacency[j][i]);
                    adjacency[i][j] = m;
                    adjacency[j][i] = m;
                }
            }
        }
        Self::new(adjacency, decorations)
    }

    /// Two vertices, every edge present including loops: `A = [[1,1],[1,1]]`.
    pub fn k2_with_loops(a: Element, b: Element) -> Result<Self> {
        Self::new(vec![vec![1, 1], vec![1, 1]], vec![a, b])
    }

    /// Complete graph with loops on the given decorations: walks are
    /// uniformly random words.
    pub fn complete_with_loops(decorations: Vec<Element>) -> Result<Self> {
        let n = decorations.len();
        Self::new(vec![vec![1; n]; n], decorations)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacency(&self) -> &[Vec<u64>] {
        &self.adjacency
    }

    pub fn edge_count(&self, u: usize, v: usize) -> u64 {
        self.adjacency[u][v]
    }

    pub fn decorations(&self) -> &[Element] {
        &self.decorations
    }

    pub fn decoration(&self, v: usize) -> &Element {
        &self.decorations[v]
    }

    /// Whether the adjacency matrix is symmetric.
    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    pub fn decoration_indices(&self, group: &FiniteGroup) -> Result<Vec<usize>> {
        self.decorations.iter().map(|d| group.require_index(d)).collect()
    }

    /// Same graph, decorations mapped through `f` (e.g. a quotient map).
    pub fn map_decorations(&self, f: impl Fn(&Element) -> Result<Element>) -> Result<Self> {
        let decorations = self.decorations.iter().map(f).collect::<Result<_>>()?;
        Ok(Self { adjacency: self.adjacency.clone(), decorations, undirected: self.undirected })
    }

    /// Least `m` with `A^m` entrywise positive, searched up to the Wielandt
    /// bound `n^2 - 2n + 2`.
    pub fn validate_primitive(&self) -> Primitivity {
        let n = self.n();
        let bound = (n - 1) * (n - 1) + 1;
        let base: Vec<Vec<bool>> = self.adjacency.iter().map(|r| r.iter().map(|&a| a > 0).collect()).collect();
        let mut power = base.clone();
        for m in 1..=bound {
            if m > 1 {
                power = bool_mul(&power, &base);
            }
            if power.iter().all(|row| row.iter().all(|&b| b)) {
                return Primitivity::Primitive { exponent: m };
            }
        }
        let (i, j) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !power[i][j])
            .expect("some entry is zero");
        Primitivity::NotPrimitive { wielandt_bound: bound, zero_entry: (i, j) }
    }

    /// Number of walks of length `length` from `i` to `j`, i.e. `(A^N)_ij`.
    pub fn walk_count(&self, i: usize, j: usize, length: usize) -> num_bigint::BigUint {
        use num_bigint::BigUint;
        use num_traits::Zero;
        let n = self.n();
        let mut row: Vec<BigUint> = (0..n).map(|v| BigUint::from(u8::from(v == i))).collect();
        for _ in 0..length {
            let mut next = vec![BigUint::zero(); n];
            for (u, cu) in row.iter().enumerate() {
                if cu.is_zero() {
                    continue;
                }
                for (v, nv) in next.iter_mut().enumerate() {
                    let a = self.adjacency[u][v];
                    if a > 0 {
                        *nv += cu * a;
                    }
                }
            }
            row = next;
        }
        row.swap_remove(j)
    }
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Primitivity {
    Primitive { exponent: usize },
    NotPrimitive { wielandt_bound: usize, zero_entry: (usize, usize) },
}

impl Primitivity {
    pub fn is_primitive(&self) -> bool {
        matches!(self, Primitivity::Primitive { .. })
    }
}

/// Graph file layout: `{"n": 2, "adjacency": [[1,1],[1,1]], "decorations": [0, 1]}`
/// with an optional `"undirected": true`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub adjacency: Vec<Vec<u64>>,
    pub decorations: Vec<Value>,
    #[serde(default)]
    pub undirected: bool,
}

impl GraphFile {
    pub fn build(&self, group: &FiniteGroup) -> Result<DecoratedGraph> {
        if self.adjacency.len() != self.n {
            return Err(Error::Domain(format!("n = {} but {} adjacency rows", self.n, self.adjacency.len())));
        }
        let decorations = self.decorations.iter().map(|v| group.parse_element(v)).collect::<Result<Vec<_>>>()?;
        if self.undirected {
            DecoratedGraph::new_undirected(self.adjacency.clone(), decorations)
        } else {
            DecoratedGraph::new(self.adjacency.clone(), decorations)
        }
    }

    pub fn from_graph(g: &DecoratedGraph) -> Self {
        Self {
            n: g.n(),
            adjacency: g.adjacency.clone(),
            decorations: g.decorations.iter().map(Element::to_literal).collect(),
            undirected: g.undirected,
        }
    }
}

/// Outcome of checking the hypotheses of the equidistribution theorem for a
/// decorated graph over a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub primitive: bool,
    /// Order of the subgroup generated by the decorations.
    pub generated_order: usize,
    pub group_order: usize,
    /// Some nontrivial one-dimensional representation takes the same value
    /// on every decoration.
    pub constant_character: bool,
    /// Order of the subgroup generated by all `t_v^{-1} t_w`.
    pub difference_order: usize,
}

impl Hypotheses {
    pub fn generates(&self) -> bool {
        self.generated_order == self.group_order
    }

    /// All hypotheses for exponential equidistribution hold.
    pub fn equidistribution_expected(&self) -> bool {
        self.primitive && self.generates() && !self.constant_character
    }

    /// The additional hypothesis for rate bounds uniform over quotients.
    pub fn differences_generate(&self) -> bool {
        self.difference_order == self.group_order
    }

    pub fn failure_reason(&self) -> Option<String> {
        if !self.primitive {
            Some("adjacency matrix is not primitive".into())
        } else if !self.generates() {
            Some(format!(
                "decorations generate a subgroup of order {} < {}",
                self.generated_order, self.group_order
            ))
        } else if self.constant_character {
            Some("a nontrivial one-dimensional representation is constant on the decorations".into())
        } else {
            None
        }
    }
}

/// Decide the hypotheses exactly, without an explicit dual: a nontrivial
/// character constant on the decorations exists iff the normal closure of
/// `{t_1^{-1} t_v}` together with the commutators `[t_a, t_b]` is a proper
/// subgroup (the quotient is then a nontrivial cyclic group).
pub fn check_hypotheses(graph: &DecoratedGraph, group: &FiniteGroup) -> Result<Hypotheses> {
    let t = graph.decoration_indices(group)?;
    let mut distinct = t.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let generated_order = group.subgroup_generated(&distinct).len();
    let first_inv = group.inverse_idx(t[0]);
    let mut seeds: Vec<usize> = distinct.iter().map(|&v| group.mul_idx(first_inv, v)).collect();
    for &a in &distinct {
        for &b in &distinct {
            let comm = group.mul_idx(
                group.mul_idx(group.inverse_idx(a), group.inverse_idx(b)),
                group.mul_idx(a, b),
            );
            seeds.push(comm);
        }
    }
    seeds.sort_unstable();
    seeds.dedup();
    let closure = group.normal_closure(&seeds, &distinct);
    // Only meaningful when the decorations generate the whole group.
    let constant_character = generated_order == group.order() && closure.len() < group.order();
    let mut diffs: Vec<usize> = Vec::new();
    for &a in &distinct {
        let a_inv = group.inverse_idx(a);
        for &b in &distinct {
            diffs.push(group.mul_idx(a_inv, b));
        }
    }
    diffs.sort_unstable();
    diffs.dedup();
    let difference_order = group.subgroup_generated(&diffs).len();
    Ok(Hypotheses {
        primitive: graph.validate_primitive().is_primitive(),
        generated_order,
        group_order: group.order(),
        constant_character,
        difference_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u64, r: u64) -> Element {
        Element::Cyclic { m, r }
    }

    fn graph(adj: Vec<Vec<u64>>) -> DecoratedGraph {
        let n = adj.len();
        DecoratedGraph::new(adj, vec![z(2, 0); n]).unwrap()
    }

    #[test]
    fn primitivity_examples() {
        assert_eq!(
            graph(vec![vec![0, 1], vec![1, 0]]).validate_primitive(),
            Primitivity::NotPrimitive { wielandt_bound: 2, zero_entry: (0, 1) }
        );
        assert_eq!(graph(vec![vec![1, 1], vec![1, 0]]).validate_primitive(), Primitivity::Primitive { exponent: 2 });
        assert_eq!(graph(vec![vec![1, 1], vec![1, 1]]).validate_primitive(), Primitivity::Primitive { exponent: 1 });
        assert_eq!(graph(vec![vec![2]]).validate_primitive(), Primitivity::Primitive { exponent: 1 });
        assert!(!graph(vec![vec![0]]).validate_primitive().is_primitive());
    }

    #[test]
    fn wielandt_extremal_graph_reaches_the_bound() {
        // Cycle 0->1->...->n-1->0 plus chord n-1 -> 1: exponent n^2 - 2n + 2.
        let n = 5;
        let mut adj = vec![vec![0; n]; n];
        for i in 0..n {
            adj[i][(i + 1) % n] = 1;
        }
        adj[n - 1][1] = 1;
        assert_eq!(graph(adj).validate_primitive(), Primitivity::Primitive { exponent: n * n - 2 * n + 2 });
    }

    #[test]
    fn walk_counts() {
        let g = graph(vec![vec![1, 1], vec![1, 0]]);
        // Fibonacci numbers
        assert_eq!(g.walk_count(0, 0, 3), 3u32.into());
        assert_eq!(g.walk_count(0, 0, 10), 89u32.into());
        let k2 = graph(vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(k2.walk_count(0, 0, 5), 16u32.into());
    }

    #[test]
    fn undirected_input_is_symmetrized() {
        let g = DecoratedGraph::new_undirected(vec![vec![0, 2], vec![0, 1]], vec![z(2, 0), z(2, 1)]).unwrap();
        assert_eq!(g.adjacency(), &[vec![0, 2], vec![2, 1]]);
        assert!(g.is_undirected());
    }

    #[test]
    fn rejects_mixed_decorations() {
        assert!(DecoratedGraph::new(vec![vec![1, 1], vec![1, 1]], vec![z(2, 0), z(3, 1)]).is_err());
    }

    #[test]
    fn hypothesis_checks() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let ok = DecoratedGraph::k2_with_loops(z(2, 0), z(2, 1)).unwrap();
        let h = check_hypotheses(&ok, &z2).unwrap();
        assert!(h.equidistribution_expected());
        // Constant decorations g, g: the sign character sends both to -1.
        let bad = DecoratedGraph::k2_with_loops(z(2, 1), z(2, 1)).unwrap();
        let h = check_hypotheses(&bad, &z2).unwrap();
        assert!(h.generates() && h.constant_character && !h.equidistribution_expected());
        let trivial = DecoratedGraph::k2_with_loops(z(2, 0), z(2, 0)).unwrap();
        assert!(!check_hypotheses(&trivial, &z2).unwrap().generates());
        // Z/4 decorated (1, 3): chi(k) = i^(2k)... the character of order 2
        // sends both 1 and 3 to -1.
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let g = DecoratedGraph::k2_with_loops(z(4, 1), z(4, 3)).unwrap();
        let h = check_hypotheses(&g, &z4).unwrap();
        assert!(h.generates() && h.constant_character);
        let g = DecoratedGraph::k2_with_loops(z(4, 0), z(4, 1)).unwrap();
        assert!(check_hypotheses(&g, &z4).unwrap().equidistribution_expected());
    }
}
