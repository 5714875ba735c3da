//! Parameter sweeps: one payoff curve and one regime report per swept value.

use std::fmt::Write as _;

use rayon::prelude::*;
use vod_core::{sample_curve, CurveSample, RegimeReport};

use crate::config::{Param, RunConfig};
use crate::error::CliError;
use crate::output::num;

#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Model, curve range, point count and tail mode all come from here.
    pub base: RunConfig,
    pub param: Param,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub value: f64,
    pub curve: CurveSample<f64>,
    pub report: RegimeReport<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub param: Param,
    pub points: Vec<SweepPoint>,
}

impl SweepOutput {
    pub fn stable_xs(&self) -> Vec<Option<f64>> {
        self.points
            .iter()
            .map(|p| p.report.stable().map(|e| e.x.value()))
            .collect()
    }

    pub fn unstable_xs(&self) -> Vec<Option<f64>> {
        self.points
            .iter()
            .map(|p| p.report.unstable().map(|e| e.x.value()))
            .collect()
    }

    /// First zero crossing of each curve, whatever its stability.
    pub fn first_roots(&self) -> Vec<Option<f64>> {
        self.points
            .iter()
            .map(|p| p.report.equilibria.first().map(|e| e.x.value()))
            .collect()
    }

    pub fn max_nets(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.curve.max_net()).collect()
    }
}

/// Evaluates each swept value independently; output order follows
/// `spec.values`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutput, CliError> {
    if spec.values.is_empty() {
        return Err(CliError::Invalid("sweep needs at least one value".into()));
    }
    let x_range = spec.base.x_range()?;
    let points = spec
        .values
        .par_iter()
        .map(|&value| {
            let cfg = spec.param.apply(&spec.base, value)?;
            let model = cfg.model_point()?;
            let curve = sample_curve(&model, x_range, cfg.points)?;
            let report = model.equilibria(&cfg.solver()?)?;
            Ok(SweepPoint {
                value,
                curve,
                report,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(SweepOutput {
        param: spec.param,
        points,
    })
}

/// Long-format `swept_name,swept_value,x,net`.
pub fn long_csv(out: &SweepOutput) -> String {
    let mut s = String::from("swept_name,swept_value,x,net\n");
    for p in &out.points {
        for (x, net) in p.curve.xs.iter().zip(&p.curve.net) {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                out.param.name(),
                p.value,
                num(x.value()),
                num(*net)
            );
        }
    }
    s
}

/// `swept_value,regime,unstable_x,stable_x`, empty fields when absent.
pub fn summary_csv(out: &SweepOutput) -> String {
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    let mut s = String::from("swept_value,regime,unstable_x,stable_x\n");
    for p in &out.points {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            p.value,
            p.report.regime.as_str(),
            opt(p.report.unstable().map(|e| e.x.value())),
            opt(p.report.stable().map(|e| e.x.value())),
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Model;

    #[test]
    fn sigma_sweep_orders_rows() {
        let spec = SweepSpec {
            base: RunConfig {
                points: 11,
                ..RunConfig::default()
            },
            param: Param::Sigma,
            values: vec![6.0, 5.0],
        };
        let out = run_sweep(&spec).unwrap();
        let csv = long_csv(&out);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 2 * 11);
        assert!(lines[1].starts_with("sigma,6,"));
        assert!(lines[12].starts_with("sigma,5,"));
        let summary = summary_csv(&out);
        assert_eq!(summary.lines().count(), 3);
        assert!(summary.lines().nth(1).unwrap().starts_with("6,mixed,"));
    }

    #[test]
    fn empty_or_invalid_sweeps_rejected() {
        let base = RunConfig::default();
        assert!(run_sweep(&SweepSpec {
            base: base.clone(),
            param: Param::Sigma,
            values: vec![]
        })
        .is_err());
        let bad = SweepSpec {
            base,
            param: Param::K,
            values: vec![0.0],
        };
        assert!(matches!(run_sweep(&bad), Err(CliError::Invalid(_))));
    }

    #[test]
    fn dominant_rows_have_empty_fields() {
        let spec = SweepSpec {
            base: RunConfig {
                points: 5,
                ..RunConfig::default()
            },
            param: Param::Sigma,
            values: vec![2.0],
        };
        let summary = summary_csv(&run_sweep(&spec).unwrap());
        assert_eq!(summary.lines().nth(1).unwrap(), "2,dominant_defect,,");
    }

    #[test]
    fn fake_pstar_sweep() {
        let spec = SweepSpec {
            base: RunConfig {
                model: Model::Fake,
                points: 201,
                ..RunConfig::default()
            },
            param: Param::Pstar,
            values: vec![0.04, 0.10],
        };
        let out = run_sweep(&spec).unwrap();
        let m = out.max_nets();
        assert!(m[0] > m[1]);
    }
}
