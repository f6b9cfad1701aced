use serde::Serialize;
use walkbounds::bounds::{cayley_gap, effective_rate, tprime_epsilon, CompressionSource, EffectiveRate, KazhdanEstimate};

use super::Output;
use crate::config::{KazhdanConfig, RateSource};
use crate::error::{CliError, CliResult};
use crate::output::{config_hash, Artifact};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KazhdanReport {
    pub group: String,
    pub estimate: KazhdanEstimate,
    /// Set when `S^{-1} S` was used.
    pub epsilon1: Option<f64>,
    pub rate: Option<EffectiveRate>,
}

pub fn run(cfg: &KazhdanConfig) -> CliResult<KazhdanReport> {
    let group = cfg.group.build()?;
    let graph = cfg.graph.as_ref().map(|g| g.build(&group)).transpose()?;
    let generators: Vec<usize> = match (&cfg.generators, &graph) {
        (Some(lits), _) => lits
            .iter()
            .map(|v| group.parse_element(v).and_then(|e| group.require_index(&e)))
            .collect::<walkbounds::Result<_>>()?,
        (None, Some(g)) => g.decoration_indices(&group)?,
        (None, None) => return Err(CliError::Config("either generators or a graph is required".into())),
    };
    let (estimate, epsilon1) = if cfg.differences {
        let t = tprime_epsilon(&group, &generators)?;
        (t.estimate, Some(t.epsilon1))
    } else {
        (cayley_gap(&group, &generators)?, None)
    };
    let rate = match &graph {
        None => None,
        Some(g) => {
            let source = match cfg.rate_source {
                RateSource::Exact => CompressionSource::Exact,
                RateSource::Quotient => CompressionSource::Quotient,
                RateSource::Supplied => CompressionSource::Kazhdan {
                    epsilon1: cfg
                        .epsilon1
                        .or(epsilon1)
                        .ok_or_else(|| CliError::Config("rate_source \"supplied\" needs epsilon1".into()))?,
                },
            };
            Some(effective_rate(g, &group, source, cfg.start, cfg.end, cfg.max_length)?)
        }
    };
    Ok(KazhdanReport { group: group.describe(), estimate, epsilon1, rate })
}

pub fn render(cfg: &KazhdanConfig, report: &KazhdanReport, seed: u64) -> CliResult<Output> {
    let hash = config_hash(cfg)?;
    let mut artifacts = vec![Artifact::json("kazhdan.json", report)?];
    let mut summary = vec![format!(
        "{}: lambda1 = {:.12}, epsilon >= {:.12}",
        report.group, report.estimate.lambda1, report.estimate.epsilon_lb
    )];
    if let Some(rate) = &report.rate {
        artifacts.push(Artifact::csv("rate.csv", &hash, seed, &rate.to_csv()));
        summary.push(format!("d = {:.12}, g = {:.12}", rate.d, rate.g()));
        let bad = rate.violations(1e-12);
        if !bad.is_empty() {
            summary.push(format!("warning: observed deviation exceeds the bound at k = {bad:?}"));
        }
    }
    Ok(Output { artifacts, summary: summary.join("\n") })
}
