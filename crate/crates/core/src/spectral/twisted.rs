use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::operator::{
    frobenius_norm, operator_norm_of, spectral_radius, spectral_radius_of, CMatrix, LinearOperator, Power,
    SpectralReport,
};
use crate::error::{Error, Result};
use crate::fourier::{Representation, UnitaryDual};
use crate::graphwalk::{check_hypotheses, perron_data, DecoratedGraph};
use crate::groups::FiniteGroup;

/// Largest `n * k` materialized as a dense product matrix.
pub const DENSE_TWISTED_LIMIT: usize = 2000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The operator `M = U A_rho` on `C^{n k}`, with `U = blockdiag(rho(t_v))`
/// and `A_rho = A (x) I_k`.
#[derive(Debug, Clone)]
pub struct TwistedOperator {
    n: usize,
    k: usize,
    blocks: Vec<CMatrix>,
    adjacency: Vec<Vec<f64>>,
    product: Option<CMatrix>,
}

impl TwistedOperator {
    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn block_dim(&self) -> usize {
        self.k
    }

    /// `rho(t_v)`.
    pub fn block(&self, v: usize) -> &CMatrix {
        &self.blocks[v]
    }

    pub fn u(&self) -> CMatrix {
        let (n, k) = (self.n, self.k);
        let mut u = CMatrix::zeros(n * k, n * k);
        for (v, b) in self.blocks.iter().enumerate() {
            u.view_mut((v * k, v * k), (k, k)).copy_from(b);
        }
        u
    }

    pub fn a_rho(&self) -> CMatrix {
        let k = self.k;
        CMatrix::from_fn(self.n * k, self.n * k, |r, c| {
            if r % k == c % k {
                Complex64::new(self.adjacency[r / k][c / k], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// `U A_rho`, if small enough to have been materialized.
    pub fn product(&self) -> Option<&CMatrix> {
        self.product.as_ref()
    }

    /// `||U U^* - I||_F`.
    pub fn unitarity_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| frobenius_norm(&(b * b.adjoint() - CMatrix::identity(self.k, self.k))).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn apply_u(&self, x: &mut [Complex64]) {
        let k = self.k;
        let mut tmp = vec![ZERO; k];
        for (v, b) in self.blocks.iter().enumerate() {
            let xs = &mut x[v * k..(v + 1) * k];
            for (r, t) in tmp.iter_mut().enumerate() {
                *t = (0..k).map(|c| b[(r, c)] * xs[c]).sum();
            }
            xs.copy_from_slice(&tmp);
        }
    }

    fn apply_u_adjoint(&self, x: &mut [Complex64]) {
        let k = self.k;
        let mut tmp = vec![ZERO; k];
        for (v, b) in self.blocks.iter().enumerate() {
            let xs = &mut x[v * k..(v + 1) * k];
            for (r, t) in tmp.iter_mut().enumerate() {
                *t = (0..k).map(|c| b[(c, r)].conj() * xs[c]).sum();
            }
            xs.copy_from_slice(&tmp);
        }
    }

    fn apply_a(&self, x: &[Complex64], y: &mut [Complex64], transpose: bool) {
        let k = self.k;
        for v in 0..self.n {
            for r in 0..k {
                y[v * k + r] = (0..self.n)
                    .map(|u| {
                        let a = if transpose { self.adjacency[u][v] } else { self.adjacency[v][u] };
                        if a == 0.0 {
                            ZERO
                        } else {
                            x[u * k + r] * a
                        }
                    })
                    .sum();
            }
        }
    }
}

impl LinearOperator for TwistedOperator {
    fn dim(&self) -> usize {
        self.n * self.k
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.apply_a(x, y, false);
        self.apply_u(y);
    }

    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]) {
        let mut tmp = x.to_vec();
        self.apply_u_adjoint(&mut tmp);
        self.apply_a(&tmp, y, true);
    }

    fn to_dense(&self) -> CMatrix {
        match &self.product {
            Some(m) => m.clone(),
            None => self.u() * self.a_rho(),
        }
    }
}

pub fn build_twisted(graph: &DecoratedGraph, rep: &Representation) -> Result<TwistedOperator> {
    let blocks = graph.decorations().iter().map(|t| rep.eval(t)).collect::<Result<Vec<_>>>()?;
    let adjacency = graph.adjacency().iter().map(|r| r.iter().map(|&a| a as f64).collect()).collect();
    let mut op = TwistedOperator { n: graph.n(), k: rep.dim(), blocks, adjacency, product: None };
    if op.dim() <= DENSE_TWISTED_LIMIT {
        op.product = Some(op.u() * op.a_rho());
    }
    Ok(op)
}

/// `sum over walks w from i to j with N edges of rho(gamma(w))`, read off as
/// the `(i, j)` block of `U (A_rho U)^N = (U A_rho)^N U`.
pub fn walk_sum_block(graph: &DecoratedGraph, rep: &Representation, i: usize, j: usize, length: usize) -> Result<CMatrix> {
    let n = graph.n();
    if i >= n || j >= n {
        return Err(Error::Domain(format!("block ({i}, {j}) out of range for {n} vertices")));
    }
    let op = build_twisted(graph, rep)?;
    let k = op.k;
    let mut out = CMatrix::zeros(k, k);
    let mut y = vec![ZERO; n * k];
    for c in 0..k {
        let mut x = vec![ZERO; n * k];
        x[j * k + c] = Complex64::new(1.0, 0.0);
        op.apply_u(&mut x);
        for _ in 0..length {
            op.apply(&x, &mut y);
            std::mem::swap(&mut x, &mut y);
        }
        for r in 0..k {
            out[(r, c)] = x[i * k + r];
        }
    }
    Ok(out)
}

fn spectral_report(op: &TwistedOperator) -> Result<SpectralReport> {
    match op.product() {
        Some(m) => spectral_radius(m),
        None => spectral_radius_of(op),
    }
}

/// Comparison of the twisted spectral radius with the Perron eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseGap {
    pub label: String,
    pub radius: SpectralReport,
    pub lambda_max: f64,
    /// `R(U A_rho) / lambda_max`.
    pub ratio: f64,
    /// Strict collapse is predicted for this representation.
    pub collapse_expected: bool,
    /// `||M^32|| < lambda_max^32`, an a-priori-free certificate of collapse.
    pub certified: bool,
}

/// Collapse is predicted unless the decorations fail to generate, or `rho`
/// is trivial, or `rho` is one-dimensional and constant on the decorations.
fn collapse_expected(graph: &DecoratedGraph, op: &TwistedOperator, rep: &Representation, generates: bool) -> bool {
    if rep.is_trivial() || !generates || !graph.validate_primitive().is_primitive() {
        return false;
    }
    if rep.dim() > 1 {
        return true;
    }
    let first = op.blocks[0][(0, 0)];
    op.blocks.iter().any(|b| (b[(0, 0)] - first).norm() > 1e-9)
}

pub fn collapse_gap(graph: &DecoratedGraph, group: &FiniteGroup, rep: &Representation) -> Result<CollapseGap> {
    let perron = perron_data(graph)?;
    let generates = check_hypotheses(graph, group)?.generates();
    collapse_gap_with(graph, rep, perron.lambda_max, generates)
}

fn collapse_gap_with(graph: &DecoratedGraph, rep: &Representation, lambda_max: f64, generates: bool) -> Result<CollapseGap> {
    let op = build_twisted(graph, rep)?;
    let radius = spectral_report(&op)?;
    let ratio = radius.radius / lambda_max;
    let top = *super::operator::GELFAND_POWERS.last().unwrap();
    let norm_top = match radius.gelfand_at(top) {
        Some(g) => g.powi(top as i32),
        None => operator_norm_of(&Power { op: &op, k: top })?,
    };
    let certified = norm_top < lambda_max.powi(top as i32) * (1.0 - 1e-9);
    let expected = collapse_expected(graph, &op, rep, generates);
    if expected && ratio >= 1.0 - 1e-9 && !certified {
        return Err(Error::Domain(format!(
            "no spectral collapse for {} although the hypotheses hold (ratio {ratio})",
            rep.label()
        )));
    }
    Ok(CollapseGap { label: rep.label().to_string(), radius, lambda_max, ratio, collapse_expected: expected, certified })
}

/// `collapse_gap` for every nontrivial irreducible, evaluated in parallel,
/// returned in the order of the dual.
pub fn collapse_gaps(graph: &DecoratedGraph, group: &FiniteGroup, dual: &UnitaryDual) -> Result<Vec<CollapseGap>> {
    let perron = perron_data(graph)?;
    let generates = check_hypotheses(graph, group)?.generates();
    let reps: Vec<&Representation> = dual.nontrivial().collect();
    reps.par_iter().map(|rep| collapse_gap_with(graph, rep, perron.lambda_max, generates)).collect()
}
