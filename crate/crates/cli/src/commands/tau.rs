use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use walkbounds::bounds::{compression_regular_with, d_from_kazhdan, shrink_bound, tprime_epsilon};
use walkbounds::graphwalk::{check_hypotheses, perron_data, DecoratedGraph};
use walkbounds::groups::{Element, FiniteGroup, ModMatrix};
use walkbounds::spectral::{regular_transfer_rate, RadiusMethod, REGULAR_STATE_CAP};
use walkbounds::Error;

use super::Output;
use crate::config::{Ambient, TauConfig};
use crate::error::{CliError, CliResult};
use crate::output::{config_hash, opt_sci, Artifact};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauRow {
    pub modulus: u64,
    pub order: Option<usize>,
    /// Largest nontrivial transfer ratio `R / lambda_max`.
    pub ratio: Option<f64>,
    pub method: Option<RadiusMethod>,
    /// Exact compression over nontrivial irreducibles.
    pub d: Option<f64>,
    /// Shrinkage constant from the exact `d`.
    pub g_exact: Option<f64>,
    pub epsilon1: Option<f64>,
    /// Shrinkage constant from `epsilon1` alone.
    pub g_kazhdan: Option<f64>,
    pub status: String,
}

impl TauRow {
    fn empty(modulus: u64, status: String) -> Self {
        Self { modulus, order: None, ratio: None, method: None, d: None, g_exact: None, epsilon1: None, g_kazhdan: None, status }
    }

    fn counts(&self) -> bool {
        self.status == "ok" || self.status.starts_with("ok;")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauReport {
    pub rows: Vec<TauRow>,
    /// Largest ratio over the quotients where the hypotheses hold.
    pub r_star: Option<f64>,
    pub uniformly_below_one: bool,
}

/// `|SL(n, p)|` for a prime `p`, saturating.
fn sl_order(n: usize, p: u64) -> u128 {
    let mut order: u128 = (p as u128).saturating_pow((n * (n - 1) / 2) as u32);
    for k in 2..=n {
        order = order.saturating_mul((p as u128).saturating_pow(k as u32) - 1);
    }
    order
}

fn quotient_row(cfg: &TauConfig, modulus: u64) -> CliResult<TauRow> {
    let vertices = cfg.graph.adjacency.len();
    let dim = cfg.graph.decorations.first().map(|d| d.len()).ok_or_else(|| CliError::Config("no decorations".into()))?;
    let decorations = cfg
        .graph
        .decorations
        .iter()
        .map(|rows| ModMatrix::from_signed(dim, modulus, &rows.concat()).map(Element::Matrix))
        .collect::<walkbounds::Result<Vec<_>>>()?;
    let cap = REGULAR_STATE_CAP / vertices.max(1);
    let group = match cfg.ambient {
        Ambient::Sl => {
            if walkbounds::arith::is_prime(modulus) && sl_order(dim, modulus) > cap as u128 {
                return Ok(TauRow::empty(modulus, format!("skipped: |SL({dim}, {modulus})| exceeds the state-space cap")));
            }
            FiniteGroup::special_linear(dim, modulus)
        }
        Ambient::Generated => FiniteGroup::enumerate_by_bfs_with_cap(&decorations, cap),
    };
    let group = match group {
        Ok(g) if g.order() <= cap => g,
        Ok(_) | Err(Error::ResourceCap { .. }) => {
            return Ok(TauRow::empty(modulus, "skipped: group exceeds the state-space cap".into()))
        }
        Err(e) => return Err(e.into()),
    };
    let graph = if cfg.graph.undirected {
        DecoratedGraph::new_undirected(cfg.graph.adjacency.clone(), decorations)?
    } else {
        DecoratedGraph::new(cfg.graph.adjacency.clone(), decorations)?
    };
    let hyp = check_hypotheses(&graph, &group)?;
    let rate = regular_transfer_rate(&graph, &group)?;
    let perron = perron_data(&graph)?;
    let d = compression_regular_with(&graph, &group, &perron)?;
    let a = graph.adjacency();
    let symmetric = (0..vertices).all(|i| (0..vertices).all(|j| a[i][j] == a[j][i]));
    let lambda = perron.ratio.min(1.0 - f64::EPSILON);
    let shrink_g = |d: f64| (symmetric && d < 1.0 - 1e-12).then(|| shrink_bound(lambda, d).ok().map(|b| b.g)).flatten();
    let mut notes = Vec::new();
    let epsilon1 = match cfg.epsilon1 {
        Some(e) => Some(e),
        None => match tprime_epsilon(&group, &graph.decoration_indices(&group)?) {
            Ok(t) => Some(t.epsilon1),
            Err(e @ (Error::NotGenerating { .. } | Error::IndexTwoObstruction { .. })) => {
                notes.push(format!("no epsilon1: {e}"));
                None
            }
            Err(e) => return Err(e.into()),
        },
    };
    let g_kazhdan = match epsilon1 {
        Some(e) => shrink_g(d_from_kazhdan(&perron, e)?),
        None => None,
    };
    if !symmetric {
        notes.push("adjacency not symmetric: no shrinkage certificate".into());
    }
    let status = match hyp.failure_reason() {
        Some(reason) => format!("hypothesis failure: {reason}"),
        None if notes.is_empty() => "ok".into(),
        None => format!("ok; {}", notes.join("; ")),
    };
    Ok(TauRow {
        modulus,
        order: Some(group.order()),
        ratio: Some(rate.ratio),
        method: Some(rate.radius.method),
        d: Some(d),
        g_exact: shrink_g(d),
        epsilon1,
        g_kazhdan,
        status,
    })
}

pub fn run(cfg: &TauConfig) -> CliResult<TauReport> {
    if cfg.moduli.is_empty() {
        return Err(CliError::Config("no moduli given".into()));
    }
    if cfg.graph.decorations.len() != cfg.graph.adjacency.len() {
        return Err(CliError::Config("one decoration per vertex is required".into()));
    }
    let rows = cfg.moduli.par_iter().map(|&m| quotient_row(cfg, m)).collect::<CliResult<Vec<_>>>()?;
    let r_star = rows.iter().filter(|r| r.counts()).filter_map(|r| r.ratio).reduce(f64::max);
    Ok(TauReport { uniformly_below_one: r_star.is_some_and(|r| r < 1.0), r_star, rows })
}

pub fn render(cfg: &TauConfig, report: &TauReport, seed: u64) -> CliResult<Output> {
    let hash = config_hash(cfg)?;
    let mut body = String::from("modulus,order,ratio,d,g_exact,epsilon1,g_kazhdan,status\n");
    for r in &report.rows {
        let _ = writeln!(
            body,
            "{},{},{},{},{},{},{},\"{}\"",
            r.modulus,
            r.order.map(|o| o.to_string()).unwrap_or_default(),
            opt_sci(r.ratio),
            opt_sci(r.d),
            opt_sci(r.g_exact),
            opt_sci(r.epsilon1),
            opt_sci(r.g_kazhdan),
            r.status.replace('"', "'")
        );
    }
    let _ = writeln!(body, "max,,{},,,,,\"over quotients satisfying the hypotheses\"", opt_sci(report.r_star));
    let summary = match report.r_star {
        Some(r) => format!("r* = {r:.12} ({} quotients)", report.rows.len()),
        None => "no quotient satisfied the hypotheses".into(),
    };
    Ok(Output { artifacts: vec![Artifact::csv("tau.csv", &hash, seed, &body), Artifact::json("tau.json", report)?], summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_moduli() {
        let cfg = TauConfig { moduli: vec![3, 5, 7], ..TauConfig::default() };
        let report = run(&cfg).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.rows.iter().all(|r| r.ratio.unwrap() < 1.0 && r.status.starts_with("ok")));
        assert!(report.uniformly_below_one);
        let single = run(&TauConfig { moduli: vec![5], ..TauConfig::default() }).unwrap();
        assert_eq!(single.rows.len(), 1);
        assert_eq!(single.rows[0], report.rows[1]);
    }

    #[test]
    fn non_generating_decorations() {
        let mut cfg = TauConfig { moduli: vec![5], ..TauConfig::default() };
        cfg.graph.decorations = vec![vec![vec![1, 1], vec![0, 1]], vec![vec![1, 2], vec![0, 1]]];
        let report = run(&cfg).unwrap();
        assert!(report.rows[0].status.starts_with("hypothesis failure"));
        assert!(report.r_star.is_none());
    }

    #[test]
    fn order_formula() {
        assert_eq!(sl_order(2, 13), 2184);
        assert_eq!(sl_order(3, 2), 168);
    }
}
