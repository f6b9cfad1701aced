use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DecoratedGraph;
use crate::error::{Error, Result};
use crate::spectral::{spectral_radius, CMatrix, MAX_ITERATIONS};

/// Perron-Frobenius data of a primitive adjacency matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronData {
    pub lambda_max: f64,
    /// Unit right eigenvector, strictly positive.
    pub vector: Vec<f64>,
    /// Modulus of the second-largest eigenvalue.
    pub second_modulus: f64,
    /// `second_modulus / lambda_max`, in `[0, 1)`.
    pub ratio: f64,
    pub residual: f64,
}

impl PerronData {
    pub fn min_component(&self) -> f64 {
        self.vector.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn power_vector(a: &[Vec<f64>], transpose: bool) -> Result<(f64, Vec<f64>, f64)> {
    let n = a.len();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut lambda = 0.0;
    let apply = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| (0..n).map(|j| if transpose { a[j][i] } else { a[i][j] } * x[j]).sum())
            .collect()
    };
    for _ in 0..MAX_ITERATIONS {
        let y = apply(&x);
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("adjacency matrix annihilates the positive vector".into()));
        }
        lambda = norm;
        let residual = y.iter().zip(&x).map(|(yi, xi)| (yi - lambda * xi).powi(2)).sum::<f64>().sqrt();
        x = y.into_iter().map(|v| v / norm).collect();
        if residual <= 1e-13 * lambda.max(1.0) {
            break;
        }
    }
    let y = apply(&x);
    let residual = y.iter().zip(&x).map(|(yi, xi)| (yi - lambda * xi).powi(2)).sum::<f64>().sqrt();
    if residual > 1e-10 * lambda.max(1.0) {
        return Err(Error::NoConvergence { iterations: MAX_ITERATIONS, residual });
    }
    Ok((lambda, x, residual))
}

/// Perron eigenvalue and eigenvector by power iteration; the second modulus
/// from the spectral radius of the Wielandt-deflated matrix
/// `A - lambda v u^T / (u^T v)`, with `u` the left Perron vector.
pub fn perron_data(graph: &DecoratedGraph) -> Result<PerronData> {
    if !graph.validate_primitive().is_primitive() {
        return Err(Error::Domain("Perron data requires a primitive adjacency matrix".into()));
    }
    let a: Vec<Vec<f64>> = graph.adjacency().iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let n = a.len();
    let (lambda_max, vector, residual) = power_vector(&a, false)?;
    let (_, left, _) = power_vector(&a, true)?;
    let scale: f64 = left.iter().zip(&vector).map(|(u, v)| u * v).sum();
    let deflated = CMatrix::from_fn(n, n, |i, j| Complex64::new(a[i][j] - lambda_max * vector[i] * left[j] / scale, 0.0));
    let second_modulus = if n == 1 { 0.0 } else { spectral_radius(&deflated)?.radius };
    Ok(PerronData { lambda_max, ratio: second_modulus / lambda_max, vector, second_modulus, residual })
}
