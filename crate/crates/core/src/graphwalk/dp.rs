use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DecoratedGraph;
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;

/// Largest `n * |G|` state space accepted in exact mode.
pub const EXACT_STATE_CAP: usize = 1_000_000;
/// Largest `n * |G|` state space accepted in float mode.
pub const FLOAT_STATE_CAP: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Counts {
    /// Walk counts per group element.
    Exact(Vec<BigUint>),
    /// Probabilities per group element, summing to 1.
    Float(Vec<f64>),
}

/// Distribution of `gamma(w)` over walks `w` of a fixed length between two
/// vertices, indexed by the group's canonical element order.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkDistribution {
    pub length: usize,
    pub start: usize,
    pub end: usize,
    pub counts: Counts,
}

/// `num / den` as `f64` without overflowing on huge operands.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits().max(num.bits()).saturating_sub(1000);
    let (n, d) = (num >> shift, den >> shift);
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if b > 0.0 => a / b,
        _ => f64::NAN,
    }
}

impl WalkDistribution {
    pub fn group_order(&self) -> usize {
        match &self.counts {
            Counts::Exact(c) => c.len(),
            Counts::Float(p) => p.len(),
        }
    }

    /// Total number of walks (exact mode only).
    pub fn total(&self) -> Option<BigUint> {
        match &self.counts {
            Counts::Exact(c) => Some(c.iter().sum()),
            Counts::Float(_) => None,
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        match &self.counts {
            Counts::Exact(c) => {
                let total: BigUint = c.iter().sum();
                c.iter().map(|x| ratio_to_f64(x, &total)).collect()
            }
            Counts::Float(p) => p.clone(),
        }
    }

    /// Every element is hit by exactly the same number of walks.
    pub fn is_exactly_uniform(&self) -> bool {
        match &self.counts {
            Counts::Exact(c) => !c[0].is_zero() && c.iter().all(|x| x == &c[0]),
            Counts::Float(_) => false,
        }
    }
}

/// Distance of a walk distribution from the uniform distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    /// `max |p(nu) - 1/|G||`.
    pub max_deviation: f64,
    /// `(1/2) sum |p(nu) - 1/|G||`.
    pub total_variation: f64,
}

pub fn distance_to_uniform(dist: &WalkDistribution) -> Result<Deviation> {
    let order = dist.group_order();
    if order == 0 {
        return Err(Error::Domain("empty distribution".into()));
    }
    match &dist.counts {
        Counts::Exact(c) => {
            let total: BigUint = c.iter().sum();
            if total.is_zero() {
                return Err(Error::NoWalk { from: dist.start, to: dist.end, length: dist.length });
            }
            // |c * |G| - T| / (T * |G|), computed exactly.
            let t = BigInt::from(total.clone());
            let g = BigInt::from(order);
            let diffs: Vec<BigUint> =
                c.iter().map(|x| (BigInt::from(x.clone()) * &g - &t).abs().to_biguint().unwrap()).collect();
            let den = &total * BigUint::from(order);
            let max = diffs.iter().max().unwrap();
            let sum: BigUint = diffs.iter().sum();
            Ok(Deviation {
                max_deviation: ratio_to_f64(max, &den),
                total_variation: ratio_to_f64(&sum, &(den * 2u32)),
            })
        }
        Counts::Float(p) => {
            let sum: f64 = p.iter().sum();
            if sum <= 0.0 {
                return Err(Error::NoWalk { from: dist.start, to: dist.end, length: dist.length });
            }
            let u = 1.0 / order as f64;
            let diffs: Vec<f64> = p.iter().map(|x| (x / sum - u).abs()).collect();
            Ok(Deviation {
                max_deviation: diffs.iter().copied().fold(0.0, f64::max),
                total_variation: diffs.iter().sum::<f64>() / 2.0,
            })
        }
    }
}

#[derive(Debug, Clone)]
enum State {
    Exact(Vec<BigUint>),
    Float(Vec<f64>),
}

/// Step-by-step dynamic program over `(vertex, group element)` states:
/// `c_0(v, g) = [v = start][g = t_start]`,
/// `c_N(v, g) = sum_u A[u][v] c_{N-1}(u, g t_v^{-1})`.
///
/// The walk product multiplies all `N + 1` visited decorations left to right.
pub struct WalkDp<'a> {
    graph: &'a DecoratedGraph,
    order: usize,
    /// Per target vertex `v`: `g -> index of g * t_v^{-1}`.
    back: Vec<Vec<u32>>,
    start: usize,
    length: usize,
    state: State,
}

impl<'a> WalkDp<'a> {
    pub fn new(graph: &'a DecoratedGraph, group: &FiniteGroup, start: usize, mode: Mode) -> Result<Self> {
        let n = graph.n();
        if start >= n {
            return Err(Error::Domain(format!("start vertex {start} out of range")));
        }
        let order = group.order();
        let states = n * order;
        let cap = match mode {
            Mode::Exact => EXACT_STATE_CAP,
            Mode::Float => FLOAT_STATE_CAP,
        };
        if states > cap {
            return Err(Error::ResourceCap { what: format!("{mode:?} walk DP state space"), needed: states as u128, cap: cap as u128 });
        }
        let t = graph.decoration_indices(group)?;
        let back = t
            .iter()
            .map(|&tv| group.right_translation(group.inverse_idx(tv)).into_iter().map(|x| x as u32).collect())
            .collect();
        let seed = start * order + t[start];
        let state = match mode {
            Mode::Exact => {
                let mut s = vec![BigUint::zero(); states];
                s[seed] = BigUint::from(1u32);
                State::Exact(s)
            }
            Mode::Float => {
                let mut s = vec![0.0; states];
                s[seed] = 1.0;
                State::Float(s)
            }
        };
        Ok(Self { graph, order, back, start, length: 0, state })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn step(&mut self) {
        let n = self.graph.n();
        let order = self.order;
        let adjacency = self.graph.adjacency();
        let back = &self.back;
        match &mut self.state {
            State::Exact(c) => {
                let next: Vec<Vec<BigUint>> = (0..n)
                    .into_par_iter()
                    .map(|v| {
                        let mut out = vec![BigUint::zero(); order];
                        for u in 0..n {
                            let a = adjacency[u][v];
                            if a == 0 {
                                continue;
                            }
                            let src = &c[u * order..(u + 1) * order];
                            for (g, o) in out.iter_mut().enumerate() {
                                let x = &src[back[v][g] as usize];
                                if !x.is_zero() {
                                    if a == 1 {
                                        *o += x;
                                    } else {
                                        *o += x * a;
                                    }
                                }
                            }
                        }
                        out
                    })
                    .collect();
                *c = next.into_iter().flatten().collect();
            }
            State::Float(c) => {
                let next: Vec<Vec<f64>> = (0..n)
                    .into_par_iter()
                    .map(|v| {
                        let mut out = vec![0.0; order];
                        for u in 0..n {
                            let a = adjacency[u][v] as f64;
                            if a == 0.0 {
                                continue;
                            }
                            let src = &c[u * order..(u + 1) * order];
                            for (g, o) in out.iter_mut().enumerate() {
                                *o += a * src[back[v][g] as usize];
                            }
                        }
                        out
                    })
                    .collect();
                let mut flat: Vec<f64> = next.into_iter().flatten().collect();
                let total: f64 = flat.iter().sum();
                if total > 0.0 {
                    flat.iter_mut().for_each(|x| *x /= total);
                }
                *c = flat;
            }
        }
        self.length += 1;
    }

    pub fn distribution(&self, end: usize) -> WalkDistribution {
        let range = end * self.order..(end + 1) * self.order;
        let counts = match &self.state {
            State::Exact(c) => Counts::Exact(c[range].to_vec()),
            State::Float(c) => {
                let slice = &c[range];
                let total: f64 = slice.iter().sum();
                Counts::Float(if total > 0.0 { slice.iter().map(|x| x / total).collect() } else { slice.to_vec() })
            }
        };
        WalkDistribution { length: self.length, start: self.start, end, counts }
    }
}

pub fn walk_distribution(
    graph: &DecoratedGraph,
    group: &FiniteGroup,
    start: usize,
    end: usize,
    length: usize,
    mode: Mode,
) -> Result<WalkDistribution> {
    if end >= graph.n() {
        return Err(Error::Domain(format!("end vertex {end} out of range")));
    }
    let mut dp = WalkDp::new(graph, group, start, mode)?;
    for _ in 0..length {
        dp.step();
    }
    Ok(dp.distribution(end))
}

/// Distributions for every length `0..=max_length`.
pub fn walk_distributions(
    graph: &DecoratedGraph,
    group: &FiniteGroup,
    start: usize,
    end: usize,
    max_length: usize,
    mode: Mode,
) -> Result<Vec<WalkDistribution>> {
    if end >= graph.n() {
        return Err(Error::Domain(format!("end vertex {end} out of range")));
    }
    let mut dp = WalkDp::new(graph, group, start, mode)?;
    let mut out = vec![dp.distribution(end)];
    for _ in 0..max_length {
        dp.step();
        out.push(dp.distribution(end));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateOutcome {
    /// Least-squares fit `ln D(N) ~ intercept + slope * N`; `rate = exp(slope)`.
    Exponential { slope: f64, intercept: f64, rate: f64, residual: f64 },
    /// The deviation is exactly zero from this length on.
    CollapsesAt { length: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// `(N, max deviation)` per length in the fitted range.
    pub points: Vec<(usize, f64)>,
    pub outcome: RateOutcome,
}

impl RateFit {
    /// Deviation shrinks: collapse, or a fitted rate clearly below one.
    pub fn decays(&self) -> bool {
        match self.outcome {
            RateOutcome::CollapsesAt { .. } => true,
            RateOutcome::Exponential { rate, .. } => rate < 1.0 - 1e-9,
        }
    }
}

/// Least-squares line through `(x, y)` pairs: `(slope, intercept, rms residual)`.
pub fn least_squares(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rms = (points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    (slope, intercept, rms)
}

/// Exponential decay rate of the max deviation over a range of lengths,
/// from the exact dynamic program.
pub fn measured_rate(
    graph: &DecoratedGraph,
    group: &FiniteGroup,
    start: usize,
    end: usize,
    lengths: RangeInclusive<usize>,
) -> Result<RateFit> {
    if lengths.is_empty() {
        return Err(Error::Domain("empty length range".into()));
    }
    let dists = walk_distributions(graph, group, start, end, *lengths.end(), Mode::Exact)?;
    let points = lengths.map(|n| Ok((n, distance_to_uniform(&dists[n])?.max_deviation))).collect::<Result<Vec<_>>>()?;
    Ok(fit_rate(points))
}

/// Collapse at the first exact zero, otherwise a least-squares fit of
/// `ln D(N)` against `N`.
pub fn fit_rate(points: Vec<(usize, f64)>) -> RateFit {
    if let Some(&(length, _)) = points.iter().find(|p| p.1 == 0.0) {
        return RateFit { points, outcome: RateOutcome::CollapsesAt { length } };
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, d)| (n as f64, d.ln())).collect();
    let (slope, intercept, residual) = least_squares(&logs);
    RateFit { points, outcome: RateOutcome::Exponential { slope, intercept, rate: slope.exp(), residual } }
}
