use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The shrinkage constant `g(lambda, d)` with its ingredients.
///
/// For `lambda > 0`, `alpha_0` solves `h(lambda, d, alpha) = 1 - (1 - lambda^2)(1 - d^2)/2`
/// with `h(lambda, d, alpha) = 1 - (1 - lambda^2)(1 - d^2) + lambda^2 alpha^2 + 2(1 - lambda^2) d lambda alpha`.
/// Vectors with `|y| <= alpha_0 |x|` shrink by `branch_a`, the others by
/// `branch_b`, and `g` is the larger of the two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShrinkBound {
    pub lambda: f64,
    pub d: f64,
    pub alpha0: Option<f64>,
    pub branch_a: Option<f64>,
    pub branch_b: Option<f64>,
    pub g: f64,
    /// `alpha_0` as printed without the `-d` term, kept for comparison.
    pub uncorrected_alpha0: Option<f64>,
    /// `sqrt((1 + alpha_0 lambda)/(1 + alpha_0))` at the uncorrected `alpha_0`.
    pub uncorrected_branch_b: Option<f64>,
}

pub fn h(lambda: f64, d: f64, alpha: f64) -> f64 {
    let s = 1.0 - lambda * lambda;
    1.0 - s * (1.0 - d * d) + lambda * lambda * alpha * alpha + 2.0 * s * d * lambda * alpha
}

/// Target value of `h` at `alpha_0`.
pub fn h_target(lambda: f64, d: f64) -> f64 {
    1.0 - (1.0 - lambda * lambda) * (1.0 - d * d) / 2.0
}

/// Positive root of `lambda^2 a^2 + 2(1 - lambda^2) d lambda a - (1 - lambda^2)(1 - d^2)/2`.
pub fn alpha0(lambda: f64, d: f64) -> f64 {
    let s = 1.0 - lambda * lambda;
    let c = (1.0 - d * d) / (2.0 * s);
    // -d + sqrt(d^2 + c), rewritten to avoid cancellation
    (s / lambda) * c / (d + (d * d + c).sqrt())
}

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("{name} = {x} must lie in [0, 1)")));
    }
    Ok(())
}

pub fn shrink_bound(lambda: f64, d: f64) -> Result<ShrinkBound> {
    check_unit_interval("lambda", lambda)?;
    check_unit_interval("d", d)?;
    if lambda == 0.0 {
        return Ok(ShrinkBound {
            lambda,
            d,
            alpha0: None,
            branch_a: None,
            branch_b: None,
            g: d,
            uncorrected_alpha0: None,
            uncorrected_branch_b: None,
        });
    }
    let a0 = alpha0(lambda, d);
    let branch_a = h_target(lambda, d).sqrt();
    let branch_b = ((1.0 + lambda * lambda * a0 * a0) / (1.0 + a0 * a0)).sqrt();
    let s = 1.0 - lambda * lambda;
    let paper_a0 = (s / lambda) * (d * d + (1.0 - d * d) / (2.0 * s)).sqrt();
    let paper_b = ((1.0 + paper_a0 * lambda) / (1.0 + paper_a0)).sqrt();
    Ok(ShrinkBound {
        lambda,
        d,
        alpha0: Some(a0),
        branch_a: Some(branch_a),
        branch_b: Some(branch_b),
        g: branch_a.max(branch_b),
        uncorrected_alpha0: Some(paper_a0),
        uncorrected_branch_b: Some(paper_b),
    })
}

/// `g^{floor(k/2)}`.
pub fn norm_decay(g: f64, k: usize) -> f64 {
    g.powi((k / 2) as i32)
}
