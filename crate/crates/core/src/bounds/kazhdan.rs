use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;

/// Largest group handled by the Cayley Laplacian computation.
pub const CAYLEY_ORDER_CAP: usize = 100_000;
/// Groups up to this order use a dense symmetric eigensolver.
const DENSE_LIMIT: usize = 400;
const LANCZOS_STEPS: usize = 400;
const LANCZOS_TOLERANCE: f64 = 1e-10;

/// Certified lower bound on the displacement constant of a generating set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KazhdanEstimate {
    /// Generators, as printed literals.
    pub generators: Vec<String>,
    /// Smallest eigenvalue of the Cayley Laplacian on non-constant functions.
    pub lambda1: f64,
    /// `sqrt(2 lambda1 / |S|)`.
    pub epsilon_lb: f64,
    /// The set was replaced by `S^{-1} S`.
    pub from_differences: bool,
}

/// `(K f)(g) = (1/2) sum_s [f(g s) + f(g s^{-1})]` as translation tables.
struct Adjacency {
    tables: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Adjacency {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (fwd, bwd) in &self.tables {
            for (g, out) in y.iter_mut().enumerate() {
                *out += 0.5 * (x[fwd[g]] + x[bwd[g]]);
            }
        }
    }
}

fn project(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest eigenvalue of `K` on the complement of constants, by Lanczos with
/// full reorthogonalization.
fn lanczos_top(k: &Adjacency, dim: usize, scale: f64) -> Result<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x01a2_c205);
    let mut q: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
    project(&mut q);
    let norm = dot(&q, &q).sqrt();
    q.iter_mut().for_each(|v| *v /= norm);
    let mut basis = vec![q];
    let (mut alphas, mut betas) = (Vec::new(), Vec::new());
    let mut w = vec![0.0; dim];
    let steps = LANCZOS_STEPS.min(dim - 1);
    let mut last = (f64::NAN, f64::INFINITY);
    for j in 0..steps {
        k.apply(&basis[j], &mut w);
        project(&mut w);
        alphas.push(dot(&basis[j], &w));
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let beta = dot(&w, &w).sqrt();
        let m = alphas.len();
        let t = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                alphas[r]
            } else if r + 1 == c {
                betas[r]
            } else if c + 1 == r {
                betas[c]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let (idx, top) = eig.eigenvalues.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &v)| {
            if v > acc.1 {
                (i, v)
            } else {
                acc
            }
        });
        let residual = beta * eig.eigenvectors[(m - 1, idx)].abs();
        last = (top, residual);
        if residual <= LANCZOS_TOLERANCE * scale || beta <= 1e-14 * scale {
            return Ok(top);
        }
        betas.push(beta);
        basis.push(w.iter().map(|v| v / beta).collect());
    }
    if steps == dim - 1 {
        // Krylov space exhausted the complement; the Ritz value is exact.
        return Ok(last.0);
    }
    Err(Error::NoConvergence { iterations: steps, residual: last.1 })
}

/// Spectral gap of the Cayley graph `Cay(G, S)` on the orthogonal complement
/// of the constants, and the displacement bound it certifies: every unitary
/// representation without invariant vectors moves each unit vector by at
/// least `sqrt(2 lambda1 / |S|)` under some generator.
pub fn cayley_gap(group: &FiniteGroup, generators: &[usize]) -> Result<KazhdanEstimate> {
    estimate(group, generators, false)
}

fn estimate(group: &FiniteGroup, generators: &[usize], from_differences: bool) -> Result<KazhdanEstimate> {
    let order = group.order();
    if generators.is_empty() {
        return Err(Error::Domain("empty generating set".into()));
    }
    if order > CAYLEY_ORDER_CAP {
        return Err(Error::ResourceCap { what: "Cayley graph order".into(), needed: order as u128, cap: CAYLEY_ORDER_CAP as u128 });
    }
    let found = group.subgroup_generated(generators).len();
    if found != order {
        return Err(Error::NotGenerating { found, order });
    }
    let size = generators.len() as f64;
    let names = generators.iter().map(|&s| group.element(s).to_string()).collect();
    if order == 1 {
        return Ok(KazhdanEstimate { generators: names, lambda1: 0.0, epsilon_lb: 0.0, from_differences });
    }
    let k = Adjacency {
        tables: generators
            .iter()
            .map(|&s| (group.right_translation(s), group.right_translation(group.inverse_idx(s))))
            .collect(),
    };
    let top = if order <= DENSE_LIMIT {
        let mut dense = DMatrix::<f64>::zeros(order, order);
        let mut e = vec![0.0; order];
        let mut col = vec![0.0; order];
        for j in 0..order {
            e[j] = 1.0;
            k.apply(&e, &mut col);
            dense.set_column(j, &nalgebra::DVector::from_column_slice(&col));
            e[j] = 0.0;
        }
        let mut values: Vec<f64> = SymmetricEigen::new(dense).eigenvalues.iter().copied().collect();
        values.sort_by(|a, b| b.total_cmp(a));
        // the largest, |S|, belongs to the constants
        values[1]
    } else {
        lanczos_top(&k, order, size)?
    };
    let lambda1 = (size - top).max(0.0);
    let epsilon_lb = (2.0 * lambda1 / size).sqrt().min(2.0);
    Ok(KazhdanEstimate { generators: names, lambda1, epsilon_lb, from_differences })
}

/// `S^{-1} S` as a sorted set of indices.
pub fn differences(group: &FiniteGroup, generators: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = generators
        .iter()
        .flat_map(|&a| {
            let inv = group.inverse_idx(a);
            generators.iter().map(move |&b| group.mul_idx(inv, b))
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `epsilon_1` for a set `S` together with the pair-separation guarantee:
/// for any representation without vectors invariant under `<S^{-1} S>` and
/// any unit `v, w`, some `s` in `S` has `|rho(s) v - w| >= epsilon_1 / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TPrime {
    pub epsilon1: f64,
    pub pair_separation: f64,
    pub estimate: KazhdanEstimate,
}

pub fn tprime_epsilon(group: &FiniteGroup, generators: &[usize]) -> Result<TPrime> {
    let diffs = differences(group, generators);
    let found = group.subgroup_generated(&diffs).len();
    let order = group.order();
    if found != order {
        let index = order / found;
        return Err(if index == 2 { Error::IndexTwoObstruction { index } } else { Error::NotGenerating { found, order } });
    }
    let estimate = estimate(group, &diffs, true)?;
    Ok(TPrime { epsilon1: estimate.epsilon_lb, pair_separation: estimate.epsilon_lb / 2.0, estimate })
}
