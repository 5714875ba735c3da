//! CSV and JSON rendering. CSV is comma-separated with a header row, LF line
//! endings and no quoting; reals use 17 significant digits so values
//! round-trip exactly.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use vod_core::{CurveSample, RegimeReport, Sign};

use crate::error::CliError;

/// 17 significant digits, scientific notation.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn curve_csv(curve: &CurveSample<f64>) -> String {
    let mut out = String::from("x,volunteer_avg,defector_avg,net\n");
    for i in 0..curve.len() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(curve.xs[i].value()),
            num(curve.volunteer_avg[i]),
            num(curve.defector_avg[i]),
            num(curve.net[i])
        );
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

#[derive(Debug, Serialize)]
pub struct EquilibriumJson {
    pub x: f64,
    pub slope: f64,
    pub stability: &'static str,
}

#[derive(Debug, Serialize)]
pub struct RegimeJson {
    pub regime: &'static str,
    pub equilibria: Vec<EquilibriumJson>,
    pub endpoint_signs: [&'static str; 2],
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Negative => "negative",
        Sign::Zero => "zero",
        Sign::Positive => "positive",
    }
}

impl From<&RegimeReport<f64>> for RegimeJson {
    fn from(r: &RegimeReport<f64>) -> Self {
        Self {
            regime: r.regime.as_str(),
            equilibria: r
                .equilibria
                .iter()
                .map(|e| EquilibriumJson {
                    x: e.x.value(),
                    slope: e.slope,
                    stability: e.stability.as_str(),
                })
                .collect(),
            endpoint_signs: [sign_str(r.endpoint_signs.0), sign_str(r.endpoint_signs.1)],
        }
    }
}
