use serde::Serialize;
use walkbounds::bounds::{h, h_target, shrink_bound, ShrinkBound};

use super::Output;
use crate::config::ShrinkConfig;
use crate::error::CliResult;
use crate::output::Artifact;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShrinkReport {
    #[serde(flatten)]
    pub bound: ShrinkBound,
    /// `h(lambda, d, alpha_0)` and the value it must equal.
    pub h_at_alpha0: Option<f64>,
    pub h_target: Option<f64>,
    pub h_at_uncorrected_alpha0: Option<f64>,
}

pub fn run(cfg: &ShrinkConfig) -> CliResult<ShrinkReport> {
    let bound = shrink_bound(cfg.lambda, cfg.d)?;
    let at = |a: Option<f64>| a.map(|a| h(cfg.lambda, cfg.d, a));
    Ok(ShrinkReport {
        h_at_alpha0: at(bound.alpha0),
        h_target: bound.alpha0.map(|_| h_target(cfg.lambda, cfg.d)),
        h_at_uncorrected_alpha0: at(bound.uncorrected_alpha0),
        bound,
    })
}

pub fn render(report: &ShrinkReport) -> CliResult<Output> {
    let b = &report.bound;
    let mut summary = format!("g({}, {}) = {:.12}", b.lambda, b.d, b.g);
    if let (Some(a0), Some(hv), Some(ht)) = (b.alpha0, report.h_at_alpha0, report.h_target) {
        summary += &format!("\nalpha0 = {a0:.12}\nh(lambda, d, alpha0) = {hv:.12} (target {ht:.12})");
    }
    Ok(Output { artifacts: vec![Artifact::json("shrink.json", report)?], summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(run(&ShrinkConfig { lambda: 0.0, d: 0.5 }).unwrap().bound.g, 0.5);
        let r = run(&ShrinkConfig { lambda: 0.5, d: 0.5 }).unwrap();
        assert!((r.bound.alpha0.unwrap() - 0.549).abs() < 1e-3);
        assert!((r.h_at_alpha0.unwrap() - 0.71875).abs() < 1e-12);
        let g = run(&ShrinkConfig { lambda: 0.99, d: 0.99 }).unwrap().bound.g;
        assert!(g < 1.0 && g > 0.99);
        assert!(run(&ShrinkConfig { lambda: 1.0, d: 0.5 }).is_err());
    }
}
