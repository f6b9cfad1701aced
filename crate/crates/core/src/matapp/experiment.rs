use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::IntegerMatrixGenSet;
use super::poly::{charpoly_mod_p, is_irreducible_mod_p};
use crate::arith::{identity_mod, is_prime, matmul_mod};
use crate::error::{Error, Result};
use crate::graphwalk::{DecoratedGraph, WalkSampler};
use crate::seed::derive_seed;

/// 97.5% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// How the generator sequence of a sample is drawn.
#[derive(Debug, Clone, PartialEq)]
pub enum WalkSource {
    /// `N + 1` independent uniform letters: uniform walks with `N` edges on
    /// the complete graph with loops over the generators, both ends free.
    UniformWords,
    /// Uniform walks with `N` edges between fixed vertices of a graph whose
    /// vertex `v` carries generator `v`.
    Graph { adjacency: Vec<Vec<u64>>, start: usize, end: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub length: usize,
    pub samples: usize,
    pub reducible: usize,
    pub fraction: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Weighted least-squares slope of `ln(fraction)` against `N`.
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    /// Lengths that entered the fit (fraction strictly inside `(0, 1)`).
    pub lengths: Vec<usize>,
}

impl DecayFit {
    /// The upper end of the 95% interval for the slope is negative.
    pub fn negative_with_confidence(&self) -> bool {
        self.slope + Z95 * self.slope_stderr < 0.0
    }
}

/// Fraction of sampled walks whose characteristic polynomial is reducible
/// modulo every prime of the set, an upper-bound proxy for reducibility
/// over the integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub primes: Vec<u64>,
    pub seed: u64,
    pub rows: Vec<DecayRow>,
    pub fit: Option<DecayFit>,
}

impl DecayReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].fraction < w[0].fraction)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,samples,reducible_count,fraction,ci_lo,ci_hi\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{:.6},{:.6},{:.6}", r.length, r.samples, r.reducible, r.fraction, r.ci_lo, r.ci_hi);
        }
        out
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "primes": self.primes,
            "seed": self.seed,
            "slope": self.fit.as_ref().map(|f| f.slope),
            "intercept": self.fit.as_ref().map(|f| f.intercept),
            "slope_stderr": self.fit.as_ref().map(|f| f.slope_stderr),
            "slope_negative_95": self.fit.as_ref().map(|f| f.negative_with_confidence()),
            "strictly_decreasing": self.strictly_decreasing(),
            "event": "reducible modulo every listed prime (upper bound for reducibility over Z)",
        })
    }
}

/// Wilson score interval; for zero successes the one-sided exact bound
/// `1 - 0.05^{1/n}` is used instead.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    let n = trials as f64;
    if successes == 0 {
        return (0.0, 1.0 - 0.05f64.powf(1.0 / n));
    }
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Weighted least squares of `ln(fraction)` on `N` with the delta-method
/// weights `n p / (1 - p)`; rows at 0 or 1 are skipped.
pub fn fit_decay(rows: &[DecayRow]) -> Option<DecayFit> {
    let used: Vec<&DecayRow> = rows.iter().filter(|r| r.reducible > 0 && r.reducible < r.samples).collect();
    if used.len() < 2 {
        return None;
    }
    let w: Vec<f64> = used.iter().map(|r| r.samples as f64 * r.fraction / (1.0 - r.fraction)).collect();
    let x: Vec<f64> = used.iter().map(|r| r.length as f64).collect();
    let y: Vec<f64> = used.iter().map(|r| r.fraction.ln()).collect();
    let sw: f64 = w.iter().sum();
    let mx = w.iter().zip(&x).map(|(w, x)| w * x).sum::<f64>() / sw;
    let my = w.iter().zip(&y).map(|(w, y)| w * y).sum::<f64>() / sw;
    let sxx: f64 = w.iter().zip(&x).map(|(w, x)| w * (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = (0..x.len()).map(|i| w[i] * (x[i] - mx) * (y[i] - my)).sum();
    let slope = sxy / sxx;
    Some(DecayFit { slope, intercept: my - slope * mx, slope_stderr: (1.0 / sxx).sqrt(), lengths: used.iter().map(|r| r.length).collect() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub lengths: Vec<usize>,
    pub primes: Vec<u64>,
    pub samples: usize,
    pub seed: u64,
    pub source: WalkSource,
}

/// Reducible modulo every prime: the characteristic polynomial of the
/// accumulated product fails Rabin's test for each.
fn reducible_everywhere(gens: &IntegerMatrixGenSet, reduced: &[Vec<Vec<u64>>], primes: &[u64], word: &[usize]) -> Result<bool> {
    let n = gens.n;
    for (p, mats) in primes.iter().zip(reduced) {
        let product = word.iter().fold(identity_mod(n, *p), |acc, &i| matmul_mod(n, &acc, &mats[i], *p));
        if is_irreducible_mod_p(&charpoly_mod_p(n, &product, *p)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn reducibility_experiment(gens: &IntegerMatrixGenSet, config: &ExperimentConfig) -> Result<DecayReport> {
    if config.samples == 0 {
        return Err(Error::Domain("samples must be positive".into()));
    }
    let mut sorted = config.primes.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != config.primes.len() {
        return Err(Error::Domain("primes must be pairwise distinct".into()));
    }
    if let Some(&p) = config.primes.iter().find(|&&p| !is_prime(p) || p > crate::groups::MAX_MODULUS) {
        return Err(Error::Domain(format!("{p} is not a supported prime")));
    }
    let graph = match &config.source {
        WalkSource::UniformWords => None,
        WalkSource::Graph { adjacency, start, end } => {
            if adjacency.len() != gens.len() {
                return Err(Error::Domain(format!("graph has {} vertices for {} generators", adjacency.len(), gens.len())));
            }
            let labels = (0..gens.len() as u64).map(|v| crate::groups::Element::Cyclic { m: gens.len() as u64, r: v }).collect();
            Some((DecoratedGraph::new(adjacency.clone(), labels)?, *start, *end))
        }
    };
    let reduced: Vec<Vec<Vec<u64>>> = config.primes.iter().map(|&p| gens.reduced(p)).collect();
    let mut rows = Vec::with_capacity(config.lengths.len());
    for &length in &config.lengths {
        let sampler = match &graph {
            Some((g, s, e)) => Some(WalkSampler::new(g, *s, *e, length)?),
            None => None,
        };
        let flags: Vec<bool> = (0..config.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, &[length as u64, i as u64]));
                let word: Vec<usize> = match &sampler {
                    Some(s) => s.sample(&mut rng),
                    None => (0..=length).map(|_| rng.gen_range(0..gens.len())).collect(),
                };
                reducible_everywhere(gens, &reduced, &config.primes, &word)
            })
            .collect::<Result<_>>()?;
        let reducible = flags.iter().filter(|&&f| f).count();
        let (ci_lo, ci_hi) = wilson_interval(reducible, config.samples);
        rows.push(DecayRow { length, samples: config.samples, reducible, fraction: reducible as f64 / config.samples as f64, ci_lo, ci_hi });
    }
    let fit = fit_decay(&rows);
    Ok(DecayReport { primes: config.primes.clone(), seed: config.seed, rows, fit })
}
