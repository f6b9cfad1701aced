use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::compression::{compression_regular_with, d_from_kazhdan};
use super::kazhdan::tprime_epsilon;
use super::shrink::{norm_decay, shrink_bound, ShrinkBound};
use crate::error::{Error, Result};
use crate::graphwalk::{check_hypotheses, distance_to_uniform, perron_data, walk_distributions, DecoratedGraph, Mode, EXACT_STATE_CAP};
use crate::groups::FiniteGroup;

/// Where the compression constant `d` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompressionSource {
    /// Exact `d`, maximized over nontrivial irreducibles of the group.
    Exact,
    /// `d` bounded from a supplied pair-separation constant.
    Kazhdan { epsilon1: f64 },
    /// `d` bounded from the constant computed on the group itself.
    Quotient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub k: usize,
    /// `g^{floor(k/2)}`, bounding `||(U A / lambda_max)^k||_op`.
    pub norm_bound: f64,
    /// Certified bound on `max |p(g) - 1/|G||` after `k` steps.
    pub deviation_bound: Option<f64>,
    /// Exact deviation from the dynamic program, when affordable.
    pub observed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveRate {
    pub lambda_max: f64,
    pub d: f64,
    pub epsilon1: Option<f64>,
    pub source: CompressionSource,
    pub shrink: ShrinkBound,
    pub rows: Vec<RateRow>,
}

impl EffectiveRate {
    pub fn g(&self) -> f64 {
        self.shrink.g
    }

    /// Rows where the certified bound falls below the observed deviation.
    pub fn violations(&self, slack: f64) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| matches!((r.deviation_bound, r.observed), (Some(b), Some(o)) if o > b + slack))
            .map(|r| r.k)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,norm_bound,deviation_bound,observed\n");
        let fmt = |x: Option<f64>| x.map(|v| format!("{v:.12e}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(out, "{},{:.12e},{},{}", r.k, r.norm_bound, fmt(r.deviation_bound), fmt(r.observed));
        }
        out
    }
}

fn ln_big(x: &BigUint) -> f64 {
    let shift = x.bits().saturating_sub(64);
    (x >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Certified decay schedule `k -> g^{floor(k/2)}` of the normalized twisted
/// operators, and the deviation bound `2 g^{floor(N/2)} lambda_max^N / |W_N|`
/// for walks from `start` to `end`. Needs a symmetric adjacency matrix.
pub fn effective_rate(
    graph: &DecoratedGraph,
    group: &FiniteGroup,
    source: CompressionSource,
    start: usize,
    end: usize,
    max_length: usize,
) -> Result<EffectiveRate> {
    let n = graph.n();
    if start >= n || end >= n {
        return Err(Error::Domain(format!("vertices ({start}, {end}) out of range for {n} vertices")));
    }
    let a = graph.adjacency();
    if (0..n).any(|i| (0..n).any(|j| a[i][j] != a[j][i])) {
        return Err(Error::Domain("the shrinkage bound needs a symmetric adjacency matrix".into()));
    }
    let hyp = check_hypotheses(graph, group)?;
    if let Some(reason) = hyp.failure_reason() {
        return Err(Error::Domain(format!("hypothesis failure: {reason}")));
    }
    let perron = perron_data(graph)?;
    let (d, epsilon1) = match source {
        CompressionSource::Exact => (compression_regular_with(graph, group, &perron)?, None),
        CompressionSource::Kazhdan { epsilon1 } => (d_from_kazhdan(&perron, epsilon1)?, Some(epsilon1)),
        CompressionSource::Quotient => {
            let eps = tprime_epsilon(group, &graph.decoration_indices(group)?)?.epsilon1;
            (d_from_kazhdan(&perron, eps)?, Some(eps))
        }
    };
    if d >= 1.0 - 1e-12 {
        return Err(Error::Domain(format!("hypothesis failure: compression d = {d} leaves no gap")));
    }
    let shrink = shrink_bound(perron.ratio.min(1.0 - f64::EPSILON), d)?;
    let observed: Option<Vec<f64>> = if n * group.order() <= EXACT_STATE_CAP {
        let dists = walk_distributions(graph, group, start, end, max_length, Mode::Exact)?;
        Some(dists.iter().map(|dist| distance_to_uniform(dist).map(|x| x.max_deviation).unwrap_or(f64::NAN)).collect())
    } else {
        None
    };
    let ln_lambda = perron.lambda_max.ln();
    let rows = (0..=max_length)
        .map(|k| {
            let walks = graph.walk_count(start, end, k);
            let norm_bound = norm_decay(shrink.g, k);
            let deviation_bound =
                (!walks.is_zero()).then(|| 2.0 * norm_bound * (k as f64 * ln_lambda - ln_big(&walks)).exp());
            let observed = observed.as_ref().map(|o| o[k]).filter(|x| x.is_finite());
            RateRow { k, norm_bound, deviation_bound, observed }
        })
        .collect();
    Ok(EffectiveRate { lambda_max: perron.lambda_max, d, epsilon1, source, shrink, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Element;

    fn k2(m: u64, a: u64, b: u64) -> DecoratedGraph {
        DecoratedGraph::k2_with_loops(Element::Cyclic { m, r: a }, Element::Cyclic { m, r: b }).unwrap()
    }

    #[test]
    fn z3_anchor() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let rate = effective_rate(&k2(3, 0, 1), &z3, CompressionSource::Exact, 0, 0, 20).unwrap();
        assert!((rate.d - 0.5).abs() < 1e-12);
        assert!((rate.g() - 0.5).abs() < 1e-9);
        assert!(rate.violations(0.0).is_empty());
        assert!(rate.rows.iter().skip(1).all(|r| r.observed.unwrap() > 0.0));
        let csv = rate.to_csv();
        assert!(csv.starts_with("k,norm_bound,deviation_bound,observed\n"));
        assert_eq!(csv.lines().count(), 22);
    }

    #[test]
    fn quotient_bound_is_weaker_but_valid() {
        let z5 = FiniteGroup::cyclic(5).unwrap();
        let g = DecoratedGraph::complete_with_loops(vec![Element::Cyclic { m: 5, r: 0 }, Element::Cyclic { m: 5, r: 1 }, Element::Cyclic { m: 5, r: 3 }])
            .unwrap();
        let exact = effective_rate(&g, &z5, CompressionSource::Exact, 0, 2, 20).unwrap();
        let loose = effective_rate(&g, &z5, CompressionSource::Quotient, 0, 2, 20).unwrap();
        assert!(loose.d >= exact.d && loose.g() >= exact.g() && loose.g() < 1.0);
        assert!(exact.violations(0.0).is_empty() && loose.violations(0.0).is_empty());
    }

    #[test]
    fn equal_decorations_are_refused() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        assert!(matches!(effective_rate(&k2(3, 1, 1), &z3, CompressionSource::Exact, 0, 0, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn directed_graph_is_refused() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let e = |r| Element::Cyclic { m: 3, r };
        let g = DecoratedGraph::new(vec![vec![1, 1], vec![1, 0]], vec![e(0), e(1)]).unwrap();
        assert!(effective_rate(&g, &z3, CompressionSource::Exact, 0, 0, 5).is_ok());
        let directed = DecoratedGraph::new(vec![vec![1, 1], vec![0, 1]], vec![e(0), e(1)]).unwrap();
        assert!(effective_rate(&directed, &z3, CompressionSource::Exact, 0, 0, 5).is_err());
    }

    #[test]
    fn big_log() {
        let x = BigUint::from(3u32).pow(500);
        assert!((ln_big(&x) - 500.0 * 3f64.ln()).abs() < 1e-9);
    }
}
