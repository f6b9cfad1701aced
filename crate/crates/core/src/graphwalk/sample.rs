use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::Rng;

use super::DecoratedGraph;
use crate::error::{Error, Result};
use crate::groups::Element;

/// Draws walks of a fixed length between two vertices uniformly at random.
///
/// Walks are edge sequences, so parallel edges count separately. Each step
/// is weighted by the exact number of completions, which makes the overall
/// draw uniform without rejection.
#[derive(Debug, Clone)]
pub struct WalkSampler<'a> {
    graph: &'a DecoratedGraph,
    start: usize,
    end: usize,
    /// `remaining[k][v]`: walks with `k` edges from `v` to `end`.
    remaining: Vec<Vec<BigUint>>,
}

impl<'a> WalkSampler<'a> {
    pub fn new(graph: &'a DecoratedGraph, start: usize, end: usize, length: usize) -> Result<Self> {
        let n = graph.n();
        if start >= n || end >= n {
            return Err(Error::Domain(format!("vertices ({start}, {end}) out of range for {n} vertices")));
        }
        let mut remaining = Vec::with_capacity(length + 1);
        let mut base = vec![BigUint::zero(); n];
        base[end] = BigUint::from(1u32);
        remaining.push(base);
        for k in 1..=length {
            let prev = &remaining[k - 1];
            let row = (0..n)
                .map(|v| (0..n).filter(|&u| graph.edge_count(v, u) > 0).map(|u| &prev[u] * graph.edge_count(v, u)).sum())
                .collect();
            remaining.push(row);
        }
        if remaining[length][start].is_zero() {
            return Err(Error::NoWalk { from: start, to: end, length });
        }
        Ok(Self { graph, start, end, remaining })
    }

    pub fn length(&self) -> usize {
        self.remaining.len() - 1
    }

    /// Number of walks being sampled from.
    pub fn walk_count(&self) -> &BigUint {
        &self.remaining[self.length()][self.start]
    }

    /// Vertex sequence `v_0 = start, ..., v_N = end`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let n = self.graph.n();
        let mut walk = Vec::with_capacity(self.length() + 1);
        let mut v = self.start;
        walk.push(v);
        for k in (0..self.length()).rev() {
            let mut r = rng.gen_biguint_below(&self.remaining[k + 1][v]);
            let next = (0..n)
                .find(|&u| {
                    let w = &self.remaining[k][u] * self.graph.edge_count(v, u);
                    if r < w {
                        true
                    } else {
                        r -= w;
                        false
                    }
                })
                .expect("completion counts are consistent");
            walk.push(next);
            v = next;
        }
        debug_assert_eq!(v, self.end);
        walk
    }
}

/// Convenience wrapper drawing a single uniform walk.
pub fn sample_walk_uniform<R: Rng + ?Sized>(
    graph: &DecoratedGraph,
    start: usize,
    end: usize,
    length: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    Ok(WalkSampler::new(graph, start, end, length)?.sample(rng))
}

/// Product of the decorations along a vertex sequence, left to right.
pub fn walk_product(graph: &DecoratedGraph, walk: &[usize]) -> Result<Element> {
    let (first, rest) = walk.split_first().ok_or_else(|| Error::Domain("empty walk".into()))?;
    rest.iter().try_fold(graph.decoration(*first).clone(), |acc, &v| acc.mul(graph.decoration(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    use std::collections::HashMap;

    fn graph() -> DecoratedGraph {
        let e = Element::Cyclic { m: 5, r: 1 };
        DecoratedGraph::new(vec![vec![1, 2, 0], vec![1, 0, 1], vec![1, 1, 1]], vec![e.clone(), e.clone(), e]).unwrap()
    }

    /// Every walk of the given length as an edge-multiplicity-weighted list.
    fn enumerate(g: &DecoratedGraph, start: usize, end: usize, len: usize) -> HashMap<Vec<usize>, u64> {
        let mut out = HashMap::new();
        let mut stack = vec![(vec![start], 1u64)];
        while let Some((w, mult)) = stack.pop() {
            let v = *w.last().unwrap();
            if w.len() == len + 1 {
                if v == end {
                    out.insert(w, mult);
                }
                continue;
            }
            for u in 0..g.n() {
                let a = g.edge_count(v, u);
                if a > 0 {
                    let mut next = w.clone();
                    next.push(u);
                    stack.push((next, mult * a));
                }
            }
        }
        out
    }

    #[test]
    fn walk_count_matches_enumeration() {
        let g = graph();
        for len in 0..6 {
            let total: u64 = enumerate(&g, 0, 2, len).values().sum();
            match WalkSampler::new(&g, 0, 2, len) {
                Ok(s) => assert_eq!(s.walk_count(), &BigUint::from(total)),
                Err(Error::NoWalk { .. }) => assert_eq!(total, 0),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn samples_are_uniform_chi_squared() {
        let g = graph();
        let len = 4;
        let expected = enumerate(&g, 0, 2, len);
        let total: u64 = expected.values().sum();
        let sampler = WalkSampler::new(&g, 0, 2, len).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 40_000;
        let mut seen: HashMap<Vec<usize>, u64> = HashMap::new();
        for _ in 0..draws {
            *seen.entry(sampler.sample(&mut rng)).or_default() += 1;
        }
        assert!(seen.keys().all(|w| expected.contains_key(w)));
        let stat: f64 = expected
            .iter()
            .map(|(w, &m)| {
                let e = draws as f64 * m as f64 / total as f64;
                let o = *seen.get(w).unwrap_or(&0) as f64;
                (o - e).powi(2) / e
            })
            .sum();
        let df = (expected.len() - 1) as f64;
        let p = 1.0 - ChiSquared::new(df).unwrap().cdf(stat);
        assert!(p > 1e-3, "chi2 {stat} on {df} dof, p = {p}");
    }

    #[test]
    fn unreachable_endpoint() {
        let e = Element::Cyclic { m: 2, r: 0 };
        let g = DecoratedGraph::new(vec![vec![0, 1], vec![1, 0]], vec![e.clone(), e]).unwrap();
        assert!(matches!(WalkSampler::new(&g, 0, 0, 3), Err(Error::NoWalk { .. })));
        let walk = sample_walk_uniform(&g, 0, 1, 3, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(walk, vec![0, 1, 0, 1]);
    }

    #[test]
    fn product_is_left_to_right() {
        let a = Element::Perm(vec![1, 0, 2]);
        let b = Element::Perm(vec![0, 2, 1]);
        let g = DecoratedGraph::k2_with_loops(a.clone(), b.clone()).unwrap();
        assert_eq!(walk_product(&g, &[0, 1]).unwrap(), a.mul(&b).unwrap());
        assert_eq!(walk_product(&g, &[1, 0, 0]).unwrap(), b.mul(&a).unwrap().mul(&a).unwrap());
    }
}
