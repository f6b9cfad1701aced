use std::fmt::Write as _;

use serde::Serialize;
use walkbounds::graphwalk::{
    check_hypotheses, distance_to_uniform, fit_rate, walk_distributions, Hypotheses, Mode, RateFit, RateOutcome,
};

use super::Output;
use crate::config::WalksConfig;
use crate::error::{CliError, CliResult};
use crate::output::{config_hash, sci, Artifact};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalksRow {
    pub length: usize,
    /// Exact number of walks (exact mode only), as a decimal string.
    pub walk_count: Option<String>,
    pub max_deviation: f64,
    pub total_variation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalksReport {
    pub mode: Mode,
    pub hypotheses: Hypotheses,
    pub rows: Vec<WalksRow>,
    pub rate: RateFit,
    pub notes: Vec<String>,
}

pub fn run(cfg: &WalksConfig) -> CliResult<WalksReport> {
    let lengths = cfg.lengths.values()?;
    let group = cfg.group.build()?;
    let graph = cfg.graph.build(&group)?;
    let hypotheses = check_hypotheses(&graph, &group)?;
    let max = *lengths.iter().max().expect("nonempty");
    let dists = walk_distributions(&graph, &group, cfg.start, cfg.end, max, cfg.mode)?;
    let mut rows = Vec::with_capacity(lengths.len());
    for &n in &lengths {
        let dev = distance_to_uniform(&dists[n]).map_err(|e| CliError::Config(format!("N = {n}: {e}")))?;
        rows.push(WalksRow {
            length: n,
            walk_count: dists[n].total().map(|t| t.to_string()),
            max_deviation: dev.max_deviation,
            total_variation: dev.total_variation,
        });
    }
    let rate = fit_rate(rows.iter().map(|r| (r.length, r.max_deviation)).collect());
    let mut notes = Vec::new();
    if let Some(reason) = hypotheses.failure_reason() {
        notes.push(format!("no convergence expected: {reason}"));
    }
    match rate.outcome {
        RateOutcome::CollapsesAt { length } => notes.push(format!("collapses at N = {length}")),
        RateOutcome::Exponential { rate, .. } => notes.push(format!("fitted rate {rate:.6}")),
    }
    Ok(WalksReport { mode: cfg.mode, hypotheses, rows, rate, notes })
}

pub fn render(cfg: &WalksConfig, report: &WalksReport, seed: u64) -> CliResult<Output> {
    let hash = config_hash(cfg)?;
    let mut body = String::from("N,walk_count,max_deviation,total_variation\n");
    for r in &report.rows {
        let _ = writeln!(
            body,
            "{},{},{},{}",
            r.length,
            r.walk_count.as_deref().unwrap_or(""),
            sci(r.max_deviation),
            sci(r.total_variation)
        );
    }
    Ok(Output {
        artifacts: vec![Artifact::csv("walks.csv", &hash, seed, &body), Artifact::json("walks.json", report)?],
        summary: report.notes.join("\n"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn cfg(m: u64, decorations: serde_json::Value) -> WalksConfig {
        serde_json::from_value(json!({
            "group": {"family": "cyclic", "m": m},
            "graph": {"n": 2, "adjacency": [[1, 1], [1, 1]], "decorations": decorations},
            "lengths": {"min": 1, "max": 20},
        }))
        .unwrap()
    }

    #[test]
    fn halving_deviation() {
        let report = run(&cfg(3, json!([0, 1]))).unwrap();
        for w in report.rows.windows(2).skip(1) {
            let ratio = w[1].max_deviation / w[0].max_deviation;
            assert!((ratio - 0.5).abs() < 0.01, "{ratio}");
        }
        let RateOutcome::Exponential { rate, .. } = report.rate.outcome else { panic!() };
        assert!((rate - 0.5).abs() < 0.01);
    }

    #[test]
    fn notes() {
        let report = run(&cfg(2, json!([0, 1]))).unwrap();
        assert!(report.notes.iter().any(|n| n == "collapses at N = 2"));
        let report = run(&cfg(3, json!([1, 1]))).unwrap();
        assert!(report.notes.iter().any(|n| n.starts_with("no convergence expected")));
    }

    #[test]
    fn csv_layout() {
        let c = cfg(3, json!([0, 1]));
        let out = render(&c, &run(&c).unwrap(), 7).unwrap();
        let csv = &out.artifacts[0].contents;
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("# config_hash="));
        assert_eq!(lines.next().unwrap(), "N,walk_count,max_deviation,total_variation");
        assert_eq!(lines.count(), 20);
    }
}
