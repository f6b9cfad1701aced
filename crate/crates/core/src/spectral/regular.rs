use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::{spectral_radius, spectral_radius_of, LinearOperator, SpectralReport, DENSE_EIGEN_LIMIT};
use crate::error::{Error, Result};
use crate::graphwalk::{perron_data, DecoratedGraph};
use crate::groups::FiniteGroup;

/// Largest `n * |G|` state space for the regular transfer operator.
pub const REGULAR_STATE_CAP: usize = 1_000_000;

/// Subtract, for every vertex, the mean over the group coordinate.
pub fn project_mean_zero(x: &mut [Complex64], order: usize) {
    for chunk in x.chunks_mut(order) {
        let mean = chunk.iter().sum::<Complex64>() / order as f64;
        chunk.iter_mut().for_each(|z| *z -= mean);
    }
}

/// `(M f)(v, g) = sum_u A[u][v] f(u, g t_v^{-1})` on functions `V x G -> C`,
/// compressed to the functions with mean zero in `g` at every vertex. That
/// subspace is invariant, and the spectrum there is the union of the spectra
/// of the twisted operators over all nontrivial irreducibles.
#[derive(Debug, Clone)]
pub struct RegularTransfer {
    n: usize,
    order: usize,
    adjacency: Vec<Vec<f64>>,
    /// Per vertex `v`: `g -> g t_v^{-1}`.
    back: Vec<Vec<u32>>,
    /// Per vertex `v`: `g -> g t_v`.
    forward: Vec<Vec<u32>>,
    project: bool,
}

impl RegularTransfer {
    pub fn new(graph: &DecoratedGraph, group: &FiniteGroup) -> Result<Self> {
        let states = graph.n() * group.order();
        if states > REGULAR_STATE_CAP {
            return Err(Error::ResourceCap {
                what: "regular transfer state space".into(),
                needed: states as u128,
                cap: REGULAR_STATE_CAP as u128,
            });
        }
        let t = graph.decoration_indices(group)?;
        let table = |x: usize| group.right_translation(x).into_iter().map(|g| g as u32).collect::<Vec<_>>();
        Ok(Self {
            n: graph.n(),
            order: group.order(),
            adjacency: graph.adjacency().iter().map(|r| r.iter().map(|&a| a as f64).collect()).collect(),
            back: t.iter().map(|&tv| table(group.inverse_idx(tv))).collect(),
            forward: t.iter().map(|&tv| table(tv)).collect(),
            project: true,
        })
    }

    /// The same operator on all functions, without the projection.
    pub fn unrestricted(mut self) -> Self {
        self.project = false;
        self
    }

    pub fn group_order(&self) -> usize {
        self.order
    }
}

impl LinearOperator for RegularTransfer {
    fn dim(&self) -> usize {
        self.n * self.order
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let order = self.order;
        let mut input = x.to_vec();
        if self.project {
            project_mean_zero(&mut input, order);
        }
        y.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for v in 0..self.n {
            let out = &mut y[v * order..(v + 1) * order];
            for u in 0..self.n {
                let a = self.adjacency[u][v];
                if a == 0.0 {
                    continue;
                }
                let src = &input[u * order..(u + 1) * order];
                for (g, o) in out.iter_mut().enumerate() {
                    *o += src[self.back[v][g] as usize] * a;
                }
            }
        }
        if self.project {
            project_mean_zero(y, order);
        }
    }

    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]) {
        let order = self.order;
        let mut input = x.to_vec();
        if self.project {
            project_mean_zero(&mut input, order);
        }
        y.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for u in 0..self.n {
            let out = &mut y[u * order..(u + 1) * order];
            for v in 0..self.n {
                let a = self.adjacency[u][v];
                if a == 0.0 {
                    continue;
                }
                let src = &input[v * order..(v + 1) * order];
                for (d, o) in out.iter_mut().enumerate() {
                    *o += src[self.forward[v][d] as usize] * a;
                }
            }
        }
        if self.project {
            project_mean_zero(y, order);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularRate {
    pub radius: SpectralReport,
    pub lambda_max: f64,
    /// Largest nontrivial twisted spectral radius over `lambda_max`.
    pub ratio: f64,
}

/// Nontrivial spectral ratio without an explicit unitary dual.
pub fn regular_transfer_rate(graph: &DecoratedGraph, group: &FiniteGroup) -> Result<RegularRate> {
    let perron = perron_data(graph)?;
    let op = RegularTransfer::new(graph, group)?;
    let radius = if op.dim() <= DENSE_EIGEN_LIMIT { spectral_radius(&op.to_dense())? } else { spectral_radius_of(&op)? };
    Ok(RegularRate { ratio: radius.radius / perron.lambda_max, lambda_max: perron.lambda_max, radius })
}
