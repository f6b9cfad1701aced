use serde::Serialize;
use serde_json::Value;
use walkbounds::matapp::{
    bound_calculators, builtin_generators, fit_decay, reducibility_experiment, select_prime, DecayReport,
    ExperimentConfig, GeneratorFile, IntegerMatrixGenSet, PredictedBound, WalkSource,
};

use super::Output;
use crate::config::{GeneratorSource, IrreducibilityConfig};
use crate::error::{CliError, CliResult};
use crate::output::{config_hash, Artifact};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrreducibilityReport {
    #[serde(skip)]
    pub decay: DecayReport,
    /// Prime used at each length when primes are selected per length.
    pub primes_by_length: Option<Vec<(usize, u64)>>,
    pub predictions: Option<Vec<PredictedBound>>,
    pub warnings: Vec<String>,
}

pub fn resolve_generators(source: &GeneratorSource) -> CliResult<IntegerMatrixGenSet> {
    let gens = match source {
        GeneratorSource::Builtin { kind, n } => builtin_generators(*kind, *n)?,
        GeneratorSource::Inline(file) => IntegerMatrixGenSet::from_file(file)?,
        GeneratorSource::Path(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {path}: {e}")))?;
            let file: GeneratorFile = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{path}: {e}")))?;
            IntegerMatrixGenSet::from_file(&file)?
        }
    };
    Ok(gens)
}

pub fn run(cfg: &IrreducibilityConfig, seed: u64) -> CliResult<IrreducibilityReport> {
    let gens = resolve_generators(&cfg.generators)?;
    let lengths = cfg.lengths.values()?;
    let source = match &cfg.graph {
        None => WalkSource::UniformWords,
        Some(g) => WalkSource::Graph { adjacency: g.adjacency.clone(), start: g.start, end: g.end },
    };
    let base = ExperimentConfig { lengths: lengths.clone(), primes: cfg.primes.clone(), samples: cfg.samples, seed, source };
    let mut warnings = Vec::new();
    let (decay, primes_by_length) = match &cfg.prime_selection {
        None => {
            if cfg.primes.is_empty() {
                warnings.push("empty prime set: every sample counts as reducible".into());
            }
            (reducibility_experiment(&gens, &base)?, None)
        }
        Some(sel) => {
            let mut rows = Vec::with_capacity(lengths.len());
            let mut chosen = Vec::with_capacity(lengths.len());
            for &n in &lengths {
                let p = select_prime(sel.c, n, gens.n, sel.eps)?;
                let one = ExperimentConfig { lengths: vec![n], primes: vec![p], ..base.clone() };
                rows.extend(reducibility_experiment(&gens, &one)?.rows);
                chosen.push((n, p));
            }
            let mut primes: Vec<u64> = chosen.iter().map(|&(_, p)| p).collect();
            primes.sort_unstable();
            primes.dedup();
            let fit = fit_decay(&rows);
            (DecayReport { primes, seed, rows, fit }, Some(chosen))
        }
    };
    let predictions = cfg.predict.as_ref().map(|p| bound_calculators(p, gens.n, &lengths)).transpose()?;
    Ok(IrreducibilityReport { decay, primes_by_length, predictions, warnings })
}

pub fn render(cfg: &IrreducibilityConfig, report: &IrreducibilityReport, seed: u64) -> CliResult<Output> {
    let hash = config_hash(cfg)?;
    let mut json = report.decay.summary_json();
    let extra = serde_json::to_value(report)?;
    if let (Value::Object(dst), Value::Object(src)) = (&mut json, extra) {
        dst.extend(src);
        dst.insert("rows".into(), serde_json::to_value(&report.decay.rows)?);
    }
    let mut summary: Vec<String> = report.warnings.iter().map(|w| format!("warning: {w}")).collect();
    match &report.decay.fit {
        Some(f) => summary.push(format!(
            "slope {:.6} +/- {:.6}; negative at 95%: {}; strictly decreasing: {}",
            f.slope,
            f.slope_stderr,
            f.negative_with_confidence(),
            report.decay.strictly_decreasing()
        )),
        None => summary.push("too few fractions strictly inside (0, 1) for a fit".into()),
    }
    Ok(Output {
        artifacts: vec![
            Artifact::csv("irreducibility.csv", &hash, seed, &report.decay.to_csv()),
            Artifact::json("irreducibility.json", &json)?,
        ],
        summary: summary.join("\n"),
    })
}
