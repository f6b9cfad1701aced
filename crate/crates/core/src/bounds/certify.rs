use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use super::shrink::{shrink_bound, ShrinkBound};
use crate::error::Result;
use crate::spectral::{operator_norm, CMatrix};

/// Haar-like random unitary: QR of a matrix with independent uniform entries,
/// phases of `R`'s diagonal absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let m = CMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let (mut q, r) = m.qr().unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<Complex64> {
    let v = DVector::from_fn(dim, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// A unitary `U` and a Hermitian `A` with `R(A) = 1`, a simple top
/// eigenvalue `1` with eigenvector `top`, every other eigenvalue in
/// `[-lambda, lambda]` with `lambda` attained, and
/// `d = ||P_max U P_max||_op = |<top, U top>|`.
#[derive(Debug, Clone)]
pub struct ShrinkInstance {
    pub u: CMatrix,
    pub a: CMatrix,
    pub top: DVector<Complex64>,
    pub lambda: f64,
    pub d: f64,
}

impl ShrinkInstance {
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        assert!(dim >= 2, "instances need dimension at least 2");
        let lambda = rng.gen_range(0.0..0.99);
        let basis = random_unitary(dim, rng);
        let mut eig = vec![1.0, if rng.gen::<bool>() { lambda } else { -lambda }];
        eig.extend((2..dim).map(|_| rng.gen_range(-lambda..=lambda)));
        let diag = CMatrix::from_diagonal(&DVector::from_iterator(dim, eig.into_iter().map(|x| Complex64::new(x, 0.0))));
        let a = &basis * diag * basis.adjoint();
        let a = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        let top = basis.column(0).into_owned();
        loop {
            let u = random_unitary(dim, rng);
            let d = top.dotc(&(&u * &top)).norm();
            if d < 1.0 - 1e-6 {
                return Self { u, a, top, lambda, d };
            }
        }
    }

    pub fn bound(&self) -> Result<ShrinkBound> {
        shrink_bound(self.lambda, self.d)
    }

    pub fn ua(&self) -> CMatrix {
        &self.u * &self.a
    }

    /// `(x, y)` with `x` the top-eigenspace component of `v`.
    pub fn split(&self, v: &DVector<Complex64>) -> (DVector<Complex64>, DVector<Complex64>) {
        let x = &self.top * self.top.dotc(v);
        let y = v - &x;
        (x, y)
    }

    /// `||(UA)^2 v|| - g ||v||`.
    pub fn shrink_excess(&self, g: f64, v: &DVector<Complex64>) -> f64 {
        let ua = self.ua();
        (&ua * (&ua * v)).norm() - g * v.norm()
    }

    /// `||A v||^2 - (lambda^2 ||v||^2 + (1 - lambda^2) ||x||^2)`.
    pub fn length_change_excess(&self, v: &DVector<Complex64>) -> f64 {
        let (x, _) = self.split(v);
        let l2 = self.lambda * self.lambda;
        (&self.a * v).norm_squared() - (l2 * v.norm_squared() + (1.0 - l2) * x.norm_squared())
    }

    /// `||P_max U A v|| - (d ||x|| + lambda ||y||)`.
    pub fn compression_excess(&self, v: &DVector<Complex64>) -> f64 {
        let (x, y) = self.split(v);
        let w = &self.u * (&self.a * v);
        let projected = self.top.dotc(&w).norm();
        projected - (self.d * x.norm() + self.lambda * y.norm())
    }

    /// `||(UA)^{2m}||_op - g^m`.
    pub fn power_excess(&self, g: f64, m: usize) -> Result<f64> {
        let ua = self.ua();
        let mut p = CMatrix::identity(ua.nrows(), ua.ncols());
        for _ in 0..2 * m {
            p = &ua * p;
        }
        Ok(operator_norm(&p)? - g.powi(m as i32))
    }
}
