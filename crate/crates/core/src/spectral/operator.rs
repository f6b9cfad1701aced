//! Matrix norms, power iteration and spectral radii for dense matrices and
//! matrix-free operators.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Seed of the fixed start vectors, so every estimate is reproducible.
const START_SEED: u64 = 0x5eed_0fc0_ffee;
pub const MAX_ITERATIONS: usize = 100_000;
/// Relative residual target for the operator norm iteration.
pub const NORM_TOLERANCE: f64 = 1e-10;
/// Powers at which Gelfand samples `||M^k||^{1/k}` are recorded.
pub const GELFAND_POWERS: [usize; 3] = [8, 16, 32];
/// Largest dense size handed to the Schur decomposition.
pub const DENSE_EIGEN_LIMIT: usize = 300;

/// A linear map on `C^dim` given by its action and the action of its adjoint.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]);

    /// Dense matrix of the operator, column by column.
    fn to_dense(&self) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            e[j] = Complex64::new(1.0, 0.0);
            self.apply(&e, &mut col);
            for i in 0..n {
                out[(i, j)] = col[i];
            }
            e[j] = Complex64::new(0.0, 0.0);
        }
        out
    }
}

impl LinearOperator for CMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, xj) in x.iter().enumerate() {
                acc += self[(i, j)] * xj;
            }
            *yi = acc;
        }
    }

    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (j, yj) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, xi) in x.iter().enumerate() {
                acc += self[(i, j)].conj() * xi;
            }
            *yj = acc;
        }
    }

    fn to_dense(&self) -> CMatrix {
        self.clone()
    }
}

/// `op^k`, applied by repetition.
pub struct Power<'a, O: LinearOperator + ?Sized> {
    pub op: &'a O,
    pub k: usize,
}

impl<O: LinearOperator + ?Sized> LinearOperator for Power<'_, O> {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.copy_from_slice(x);
        let mut tmp = vec![Complex64::new(0.0, 0.0); x.len()];
        for _ in 0..self.k {
            self.op.apply(y, &mut tmp);
            y.copy_from_slice(&tmp);
        }
    }

    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.copy_from_slice(x);
        let mut tmp = vec![Complex64::new(0.0, 0.0); x.len()];
        for _ in 0..self.k {
            self.op.apply_adjoint(y, &mut tmp);
            y.copy_from_slice(&tmp);
        }
    }
}

pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let n = norm2(&v);
        if n > 0.0 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value, by power iteration on `M* M`.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    operator_norm_of(m)
}

/// Largest singular value of a matrix-free operator, by power iteration on
/// `M* M` until the relative eigen-residual drops below [`NORM_TOLERANCE`].
pub fn operator_norm_of<O: LinearOperator + ?Sized>(op: &O) -> Result<f64> {
    let n = op.dim();
    if n == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut x = random_unit_vector(n, &mut rng);
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    let mut zero_hits = 0;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        op.apply(&x, &mut y);
        let ny = norm2(&y);
        if ny == 0.0 {
            // A random start in the kernel means the operator is (numerically) zero.
            zero_hits += 1;
            if zero_hits >= 2 {
                return Ok(0.0);
            }
            x = random_unit_vector(n, &mut rng);
            continue;
        }
        op.apply_adjoint(&y, &mut z);
        let mu = ny * ny;
        residual = z.iter().zip(&x).map(|(a, b)| (a - b * mu).norm_sqr()).sum::<f64>().sqrt() / mu;
        let nz = norm2(&z);
        if residual <= NORM_TOLERANCE {
            return Ok(ny);
        }
        for (xi, zi) in x.iter_mut().zip(&z) {
            *xi = zi / nz;
        }
    }
    Err(Error::NoConvergence { iterations: MAX_ITERATIONS, residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusMethod {
    ExactSmallMatrix,
    PowerIteration,
    Gelfand,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GelfandSample {
    pub k: usize,
    pub value: f64,
}

/// Spectral radius estimate with the evidence behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub radius: f64,
    pub method: RadiusMethod,
    pub residual: f64,
    pub gelfand: Vec<GelfandSample>,
}

impl SpectralReport {
    pub fn gelfand_at(&self, k: usize) -> Option<f64> {
        self.gelfand.iter().find(|s| s.k == k).map(|s| s.value)
    }
}

/// `||M^k||_op^{1/k}` for each requested `k`. These are upper bounds on the
/// spectral radius and decrease towards it.
pub fn gelfand_samples<O: LinearOperator + ?Sized>(op: &O, powers: &[usize]) -> Result<Vec<GelfandSample>> {
    powers
        .iter()
        .map(|&k| {
            let norm = operator_norm_of(&Power { op, k })?;
            Ok(GelfandSample { k, value: norm.powf(1.0 / k as f64) })
        })
        .collect()
}

fn dense_gelfand(m: &CMatrix, powers: &[usize]) -> Result<Vec<GelfandSample>> {
    let mut out = Vec::with_capacity(powers.len());
    for &k in powers {
        let mut p = CMatrix::identity(m.nrows(), m.ncols());
        for _ in 0..k {
            p = &p * m;
        }
        out.push(GelfandSample { k, value: operator_norm(&p)?.powf(1.0 / k as f64) });
    }
    Ok(out)
}

fn is_nilpotent(m: &CMatrix) -> bool {
    let scale = frobenius_norm(m).max(1.0);
    let mut p = m.clone();
    let mut power = 1usize;
    while power < m.nrows() {
        p = &p * &p;
        power *= 2;
    }
    frobenius_norm(&p) <= 1e-10 * scale.powi(power as i32)
}

/// Sweeps allowed per row before the Schur iteration is abandoned.
const SCHUR_SWEEPS_PER_ROW: usize = 30;

fn try_schur(m: &CMatrix) -> Option<(CMatrix, CMatrix)> {
    Schur::try_new(m.clone(), f64::EPSILON, SCHUR_SWEEPS_PER_ROW * m.nrows().max(1)).map(Schur::unpack)
}

/// Eigenvalues of a dense matrix via the complex Schur form, or `None` when
/// the QR iteration does not converge.
pub fn eigenvalues(m: &CMatrix) -> Option<Vec<Complex64>> {
    let (_, t) = try_schur(m)?;
    Some((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Spectral radius of a dense matrix. Small matrices use the Schur form
/// (nilpotent ones are detected exactly and reported as 0); larger ones fall
/// back to power iteration, as do matrices on which the Schur iteration
/// stalls. Gelfand samples are always attached.
pub fn spectral_radius(m: &CMatrix) -> Result<SpectralReport> {
    assert_eq!(m.nrows(), m.ncols(), "spectral radius needs a square matrix");
    let n = m.nrows();
    if n == 0 {
        return Ok(SpectralReport { radius: 0.0, method: RadiusMethod::ExactSmallMatrix, residual: 0.0, gelfand: vec![] });
    }
    if n > DENSE_EIGEN_LIMIT {
        return spectral_radius_of(m);
    }
    let Some((q, t)) = try_schur(m) else {
        return spectral_radius_of(m);
    };
    let gelfand = dense_gelfand(m, &GELFAND_POWERS)?;
    let scale = frobenius_norm(m);
    let residual = frobenius_norm(&(&q * &t * q.adjoint() - m));
    let mut radius = (0..n).map(|i| t[(i, i)].norm()).fold(0.0, f64::max);
    if radius <= 1e-6 * scale.max(1.0) && is_nilpotent(m) {
        radius = 0.0;
    }
    Ok(SpectralReport { radius, method: RadiusMethod::ExactSmallMatrix, residual, gelfand })
}

/// Spectral radius of a matrix-free operator by power iteration from a
/// fixed random complex start.
///
/// The estimate after `2k` steps is `exp((L_{2k} - L_k) / k)` where `L_j` is
/// the accumulated log growth; differencing cancels the start-vector constant
/// and stays meaningful when several eigenvalues share the top modulus. The
/// window doubles until successive estimates agree to `1e-9` relative, or the
/// iteration budget is spent, in which case the smallest Gelfand sample is
/// returned as an upper bound.
pub fn spectral_radius_of<O: LinearOperator + ?Sized>(op: &O) -> Result<SpectralReport> {
    spectral_radius_with_budget(op, MAX_ITERATIONS)
}

pub fn spectral_radius_with_budget<O: LinearOperator + ?Sized>(op: &O, budget: usize) -> Result<SpectralReport> {
    let n = op.dim();
    let gelfand = gelfand_samples(op, &GELFAND_POWERS)?;
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED ^ 0x9e37_79b9);
    let mut x = random_unit_vector(n, &mut rng);
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    let mut log_growth = vec![0.0f64];
    let mut steps = 0usize;
    let mut window = 32usize;
    let mut previous: Option<f64> = None;
    let mut residual = f64::INFINITY;
    while 2 * window <= budget {
        while steps < 2 * window {
            op.apply(&x, &mut y);
            let ny = norm2(&y);
            if ny == 0.0 {
                return Ok(SpectralReport { radius: 0.0, method: RadiusMethod::PowerIteration, residual: 0.0, gelfand });
            }
            for (xi, yi) in x.iter_mut().zip(&y) {
                *xi = yi / ny;
            }
            let last = *log_growth.last().unwrap();
            log_growth.push(last + ny.ln());
            steps += 1;
        }
        let estimate = ((log_growth[2 * window] - log_growth[window]) / window as f64).exp();
        if let Some(prev) = previous {
            residual = (estimate - prev).abs() / estimate.max(f64::MIN_POSITIVE);
            if residual <= 1e-9 {
                return Ok(SpectralReport { radius: estimate, method: RadiusMethod::PowerIteration, residual, gelfand });
            }
        }
        previous = Some(estimate);
        window *= 2;
    }
    match previous {
        Some(estimate) if residual <= 1e-4 => {
            // Slow (oscillating) convergence: keep the estimate but never
            // report more than the Gelfand upper bounds allow.
            let cap = gelfand.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
            Ok(SpectralReport { radius: estimate.min(cap), method: RadiusMethod::PowerIteration, residual, gelfand })
        }
        _ => {
            let radius = gelfand.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
            Ok(SpectralReport { radius, method: RadiusMethod::Gelfand, residual, gelfand })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, data: &[f64]) -> CMatrix {
        CMatrix::from_row_iterator(rows, rows, data.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    #[test]
    fn identity_norms() {
        let i = CMatrix::identity(5, 5);
        assert!((frobenius_norm(&i) - 5f64.sqrt()).abs() < 1e-14);
        assert!((operator_norm(&i).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_norms() {
        let d = real(2, &[3.0, 0.0, 0.0, -4.0]);
        assert!((frobenius_norm(&d) - 5.0).abs() < 1e-14);
        assert!((operator_norm(&d).unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn zero_matrix_norm() {
        assert_eq!(operator_norm(&CMatrix::zeros(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn nilpotent_radii() {
        let r = spectral_radius(&real(2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!(r.radius, 0.0);
        assert_eq!(r.gelfand_at(8), Some(0.0));
        let r = spectral_radius(&real(2, &[1.0, 1.0, -1.0, -1.0])).unwrap();
        assert_eq!(r.radius, 0.0);
    }

    #[test]
    fn golden_ratio_radius() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let m = real(2, &[1.0, 1.0, 1.0, 0.0]);
        let r = spectral_radius(&m).unwrap();
        assert!((r.radius - phi).abs() < 1e-12);
        let p = spectral_radius_of(&m).unwrap();
        assert_eq!(p.method, RadiusMethod::PowerIteration);
        assert!((p.radius - phi).abs() < 1e-8);
        // Gelfand samples decrease towards the radius from above.
        let g: Vec<f64> = r.gelfand.iter().map(|s| s.value).collect();
        assert!(g[0] >= g[1] - 1e-12 && g[1] >= g[2] - 1e-12 && g[2] >= phi - 1e-9);
    }

    #[test]
    fn rotation_power_iteration_converges_in_modulus() {
        // Eigenvalues +-i: two of equal modulus, no dominant direction.
        let m = real(2, &[0.0, -1.0, 1.0, 0.0]);
        let p = spectral_radius_of(&m).unwrap();
        assert!((p.radius - 1.0).abs() < 1e-9);
    }
}
