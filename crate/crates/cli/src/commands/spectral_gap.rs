use std::fmt::Write as _;

use serde::Serialize;
use walkbounds::fourier::unitary_dual;
use walkbounds::graphwalk::{check_hypotheses, perron_data, Hypotheses, PerronData};
use walkbounds::spectral::{collapse_gaps, regular_transfer_rate, CollapseGap, RegularRate};
use walkbounds::Error;

use super::Output;
use crate::config::SpectralGapConfig;
use crate::error::CliResult;
use crate::output::{config_hash, sci, Artifact};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralGapReport {
    pub group: String,
    pub hypotheses: Hypotheses,
    pub perron: PerronData,
    /// Per nontrivial irreducible; absent when the dual is not available.
    pub irreps: Option<Vec<CollapseGap>>,
    pub regular: RegularRate,
    pub notes: Vec<String>,
}

pub fn run(cfg: &SpectralGapConfig) -> CliResult<SpectralGapReport> {
    let group = cfg.group.build()?;
    let graph = cfg.graph.build(&group)?;
    let hypotheses = check_hypotheses(&graph, &group)?;
    let perron = perron_data(&graph)?;
    let mut notes = Vec::new();
    if let Some(reason) = hypotheses.failure_reason() {
        notes.push(format!("no convergence expected: {reason}"));
    }
    let irreps = match unitary_dual(&group) {
        Ok(dual) => Some(collapse_gaps(&graph, &group, &dual)?),
        Err(e @ Error::Capability(_)) => {
            notes.push(format!("per-irreducible table omitted: {e}"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let regular = regular_transfer_rate(&graph, &group)?;
    Ok(SpectralGapReport { group: group.describe(), hypotheses, perron, irreps, regular, notes })
}

pub fn render(cfg: &SpectralGapConfig, report: &SpectralGapReport, seed: u64) -> CliResult<Output> {
    let hash = config_hash(cfg)?;
    let mut body = String::from("rep,radius,ratio,method,collapse_expected,certified\n");
    for g in report.irreps.iter().flatten() {
        let _ = writeln!(
            body,
            "\"{}\",{},{},{},{},{}",
            g.label,
            sci(g.radius.radius),
            sci(g.ratio),
            serde_json::to_value(g.radius.method)?.as_str().unwrap_or_default(),
            g.collapse_expected,
            g.certified
        );
    }
    let _ = writeln!(
        body,
        "regular,{},{},{},,",
        sci(report.regular.radius.radius),
        sci(report.regular.ratio),
        serde_json::to_value(report.regular.radius.method)?.as_str().unwrap_or_default()
    );
    let mut summary = report.notes.clone();
    summary.push(format!(
        "{}: lambda_max = {:.12}, transfer ratio = {:.12}",
        report.group, report.perron.lambda_max, report.regular.ratio
    ));
    Ok(Output {
        artifacts: vec![
            Artifact::csv("spectral_gap.csv", &hash, seed, &body),
            Artifact::json("spectral_gap.json", report)?,
        ],
        summary: summary.join("\n"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z3_halving() {
        let cfg = SpectralGapConfig::default();
        let report = run(&cfg).unwrap();
        assert!((report.regular.ratio - 0.5).abs() < 1e-9);
        let irreps = report.irreps.as_ref().unwrap();
        assert_eq!(irreps.len(), 2);
        assert!(irreps.iter().all(|g| (g.ratio - 0.5).abs() < 1e-9));
        let out = render(&cfg, &report, 0).unwrap();
        assert_eq!(out.artifacts[0].contents.lines().count(), 2 + 2 + 1);
    }
}
