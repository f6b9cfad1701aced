use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::error::{Error, Result};

/// Smallest prime in `[lo, hi]`.
pub fn select_prime_in(lo: f64, hi: f64) -> Result<u64> {
    if !(lo.is_finite() && hi.is_finite()) || hi < lo || hi >= 1e12 {
        return Err(Error::Domain(format!("invalid prime window [{lo}, {hi}]")));
    }
    let start = lo.ceil().max(2.0) as u64;
    let end = hi.floor() as u64;
    if end < start {
        return Err(Error::EmptyPrimeWindow { lo, hi });
    }
    // primes_up_to sieves from zero; segment by trial division for large windows
    if end <= 10_000_000 {
        return primes_up_to(end).into_iter().find(|&p| p >= start).ok_or(Error::EmptyPrimeWindow { lo, hi });
    }
    (start..=end).find(|&k| crate::arith::is_prime(k)).ok_or(Error::EmptyPrimeWindow { lo, hi })
}

/// The prime used at walk length `N` for `SL(n)`: the smallest prime in
/// `[(1 - eps) T, (1 + eps) T]` with `T = c^{N/(n^2 - 1)}`.
pub fn select_prime(c: f64, length: usize, n: usize, eps: f64) -> Result<u64> {
    if !(c > 1.0) || !(eps > 0.0 && eps < 1.0) || n < 2 {
        return Err(Error::Domain(format!("select_prime needs c > 1, 0 < eps < 1, n >= 2 (c = {c}, eps = {eps}, n = {n})")));
    }
    let target = c.powf(length as f64 / (n * n - 1) as f64);
    select_prime_in((1.0 - eps) * target, (1.0 + eps) * target)
}

/// Product of the first `k` primes.
pub fn primorial(k: usize) -> BigUint {
    let mut limit = 16u64;
    loop {
        let primes = primes_up_to(limit);
        if primes.len() >= k {
            return primes.into_iter().take(k).map(BigUint::from).product();
        }
        limit *= 2;
    }
}

/// `(c_2 / p_N)(1 + (1 + eps) c_2)`: the bound on the probability that a
/// length-`N` walk is reducible modulo `p_N`.
pub fn sl_bound(c2: f64, p_n: u64, eps: f64) -> Result<f64> {
    if !(c2 > 0.0) || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("sl_bound needs c2 > 0 and 0 < eps < 1 (c2 = {c2}, eps = {eps})")));
    }
    Ok(c2 / p_n as f64 * (1.0 + (1.0 + eps) * c2))
}

/// `k ~ (N/D) log c / log(N/D)` with `D = 2h^2 + h` for `Sp(2h)`; returns
/// the real value and the rounded choice (at least 1).
pub fn sp_k_selection(length: usize, half_dim: usize, c: f64) -> Result<(f64, usize)> {
    let dim = (2 * half_dim * half_dim + half_dim) as f64;
    let ratio = length as f64 / dim;
    if !(c > 1.0) || half_dim == 0 || ratio <= 1.0 {
        return Err(Error::Domain(format!("k selection needs c > 1 and N > {dim} (N = {length}, c = {c})")));
    }
    let k = ratio * c.ln() / ratio.ln();
    Ok((k, (k.round() as usize).max(1)))
}

/// `c_3^k (1 + 2 c^{-N} k^{k D})`, evaluated in log space.
pub fn sp_bound(c3: f64, c: f64, length: usize, half_dim: usize, k: usize) -> Result<f64> {
    if !(c3 > 0.0 && c3 < 1.0) || !(c > 1.0) {
        return Err(Error::Domain(format!("sp_bound needs 0 < c3 < 1 and c > 1 (c3 = {c3}, c = {c})")));
    }
    let dim = (2 * half_dim * half_dim + half_dim) as f64;
    let log_second = 2f64.ln() - length as f64 * c.ln() + k as f64 * dim * (k as f64).ln();
    Ok((k as f64 * c3.ln()).exp() * (1.0 + log_second.exp()))
}

/// External constants for the predicted bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// Uniform decay base `c > 1` of the walk deviation.
    pub c: f64,
    /// Density constant for reducible elements of `SL(n, p)`.
    pub c2: f64,
    /// Per-prime density constant in `(0, 1)` for `Sp(2h, p)`.
    pub c3: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictedBound {
    pub length: usize,
    pub sl_prime: Option<u64>,
    pub sl_bound: Option<f64>,
    pub sp_k: Option<usize>,
    pub sp_modulus: Option<String>,
    pub sp_bound: Option<f64>,
}

/// Both predicted bounds at each length; entries that cannot be evaluated
/// (empty prime window, `N` too small for the `k` selection) are left empty.
pub fn bound_calculators(params: &BoundParams, n: usize, lengths: &[usize]) -> Result<Vec<PredictedBound>> {
    if !(params.c > 1.0) || !(params.c2 > 0.0) || !(params.c3 > 0.0 && params.c3 < 1.0) || !(params.eps > 0.0 && params.eps < 1.0) {
        return Err(Error::Domain(format!("constants out of range: {params:?}")));
    }
    lengths
        .iter()
        .map(|&length| {
            let sl_prime = select_prime(params.c, length, n, params.eps).ok();
            let sl = sl_prime.map(|p| sl_bound(params.c2, p, params.eps)).transpose()?;
            let half = (n / 2).max(1);
            let (sp_k, sp_modulus, sp) = match sp_k_selection(length, half, params.c) {
                Ok((_, k)) => (Some(k), Some(primorial(k).to_string()), Some(sp_bound(params.c3, params.c, length, half, k)?)),
                Err(_) => (None, None, None),
            };
            Ok(PredictedBound { length, sl_prime, sl_bound: sl, sp_k, sp_modulus, sp_bound: sp })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_windows() {
        assert_eq!(select_prime(2.0, 10, 2, 0.2).unwrap(), 11);
        assert_eq!(select_prime(2.0, 3, 2, 0.5).unwrap(), 2);
        assert_eq!(select_prime_in(24.5, 25.5), Err(Error::EmptyPrimeWindow { lo: 24.5, hi: 25.5 }));
        assert_eq!(select_prime_in(24.0, 28.0), Err(Error::EmptyPrimeWindow { lo: 24.0, hi: 28.0 }));
        assert_eq!(select_prime_in(1e9, 1e9 + 100.0).unwrap(), 1_000_000_007);
        assert!(select_prime(1.0, 10, 2, 0.2).is_err());
    }

    #[test]
    fn bound_values() {
        assert!((sl_bound(0.5, 11, 0.1).unwrap() - 0.5 / 11.0 * 1.55).abs() < 1e-15);
        assert!((sl_bound(0.5, 11, 0.1).unwrap() - 0.0705).abs() < 1e-4);
        assert_eq!(primorial(4), BigUint::from(210u32));
        assert_eq!(primorial(0), BigUint::from(1u32));
        let (k, chosen) = sp_k_selection(100, 2, 2.0).unwrap();
        assert!((k - 10.0 * 2f64.ln() / 10f64.ln()).abs() < 1e-12);
        assert!((k - 3.01).abs() < 0.01);
        assert_eq!(chosen, 3);
        assert!(sp_bound(1.5, 2.0, 100, 2, 3).is_err());
    }

    #[test]
    fn calculator_rows() {
        let params = BoundParams { c: 2.0, c2: 0.5, c3: 0.5, eps: 0.2 };
        let rows = bound_calculators(&params, 2, &[10]).unwrap();
        assert_eq!(rows[0].sl_prime, Some(11));
        let rows = bound_calculators(&params, 4, &[5, 10, 100]).unwrap();
        assert!(rows[0].sp_k.is_none() && rows[1].sp_k.is_none());
        assert_eq!(rows[2].sl_prime, Some(83));
        assert_eq!(rows[2].sp_k, Some(3));
        assert_eq!(rows[2].sp_modulus.as_deref(), Some("30"));
        assert!(bound_calculators(&BoundParams { c3: 1.5, ..params }, 2, &[10]).is_err());
    }
}
