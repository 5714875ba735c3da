//! Canonical figure sweeps and the claims checked against them.
//!
//! - `fig1`: truth model, σ ∈ {5, 6, 7, 8}, k = 6.
//! - `fig2`: truth model, k ∈ {5, 6, 7, 8}, σ = 5.
//! - `fig3`: fake model, p* ∈ {0.04, 0.06, 0.08, 0.10}, both tail modes.

use std::fmt::Write as _;
use std::path::Path;

use crate::config::{Model, Param, RunConfig, Tail};
use crate::error::CliError;
use crate::output::write_file;
use crate::sweep::{long_csv, run_sweep, summary_csv, SweepOutput, SweepSpec};

/// Samples per curve in reproduced figures.
pub const FIGURE_POINTS: usize = 2048;

/// Accepted band for the "4-fold" max-net ratio.
pub const RATIO_BAND: (f64, f64) = (2.5, 5.5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Claim {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

pub fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

pub fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] > w[1])
}

fn all_present(v: &[Option<f64>]) -> Option<Vec<f64>> {
    v.iter().copied().collect()
}

fn fmt_opts(v: &[Option<f64>]) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|x| x.map_or_else(|| "none".to_string(), |x| format!("{x:.6}")))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn spread(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

fn truth_spec(param: Param, values: &[f64]) -> SweepSpec {
    SweepSpec {
        base: RunConfig {
            points: FIGURE_POINTS,
            ..RunConfig::default()
        },
        param,
        values: values.to_vec(),
    }
}

pub fn fig3_spec(tail: Tail) -> SweepSpec {
    SweepSpec {
        base: RunConfig {
            model: Model::Fake,
            tail,
            points: FIGURE_POINTS,
            ..RunConfig::default()
        },
        param: Param::Pstar,
        values: vec![0.04, 0.06, 0.08, 0.10],
    }
}

pub fn fig1_claims(out: &SweepOutput) -> Vec<Claim> {
    let shape_ok = out.points.iter().all(|p| {
        let e = &p.report.equilibria;
        e.len() == 2
            && e[0].stability == vod_core::Stability::Unstable
            && e[1].stability == vod_core::Stability::Stable
    });
    let stable = out.stable_xs();
    let increasing = all_present(&stable).is_some_and(|v| strictly_increasing(&v));
    vec![
        Claim::new(
            "two roots per curve, unstable then stable",
            shape_ok,
            fmt_opts(&stable),
        ),
        Claim::new(
            "stable root increasing in sigma",
            increasing,
            fmt_opts(&stable),
        ),
    ]
}

pub fn fig2_claims(out: &SweepOutput) -> Vec<Claim> {
    let stable = out.stable_xs();
    let unstable = out.unstable_xs();
    let around = all_present(&stable)
        .is_some_and(|v| v.iter().all(|x| (0.07..=0.11).contains(x)) && spread(&v) <= 0.02);
    let stable_flatter = match (all_present(&stable), all_present(&unstable)) {
        (Some(s), Some(u)) => spread(&u) > spread(&s),
        _ => false,
    };
    vec![
        Claim::new(
            "stable root ~0.09 across k (in [0.07, 0.11], spread <= 0.02)",
            around,
            fmt_opts(&stable),
        ),
        Claim::new(
            "unstable root moves more than stable root",
            stable_flatter,
            fmt_opts(&unstable),
        ),
    ]
}

/// Max-net ratio between the first and last swept `p*`.
pub fn max_net_ratio(out: &SweepOutput) -> f64 {
    let m = out.max_nets();
    m[0] / m[m.len() - 1]
}

pub fn fig3_claims(out: &SweepOutput, tail: Tail) -> Vec<Claim> {
    let mode = match tail {
        Tail::Full => "full",
        Tail::Truncated => "truncated",
    };
    let maxes = out.max_nets();
    let firsts = out.first_roots();
    let rising = all_present(&firsts).is_some_and(|v| strictly_increasing(&v));
    let ratio = max_net_ratio(out);
    vec![
        Claim::new(
            format!("[{mode}] max net decreasing in p*"),
            strictly_decreasing(&maxes),
            format!("{maxes:.6?}"),
        ),
        Claim::new(
            format!("[{mode}] first root increasing in p*"),
            rising,
            fmt_opts(&firsts),
        ),
        Claim::new(
            format!(
                "[{mode}] max-net ratio p*=0.04 / p*=0.10 in [{}, {}]",
                RATIO_BAND.0, RATIO_BAND.1
            ),
            (RATIO_BAND.0..=RATIO_BAND.1).contains(&ratio),
            format!("{ratio:.4}"),
        ),
    ]
}

fn report_block(title: &str, out: &SweepOutput, claims: &[Claim]) -> String {
    let mut s = format!("== {title} ==\n");
    for p in &out.points {
        let eqs: Vec<String> = p
            .report
            .equilibria
            .iter()
            .map(|e| {
                format!(
                    "{:.6} ({}, slope {:.4})",
                    e.x.value(),
                    e.stability.as_str(),
                    e.slope
                )
            })
            .collect();
        let _ = writeln!(
            s,
            "{} = {}: {} [{}] max net {:.6}",
            out.param.name(),
            p.value,
            p.report.regime.as_str(),
            eqs.join("; "),
            p.curve.max_net()
        );
    }
    for c in claims {
        let _ = writeln!(
            s,
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    s
}

/// Runs the canonical sweep for `fig` and writes `<fig>*.csv` plus
/// `<fig>_report.txt` into `dir`. Returns the checked claims.
pub fn reproduce(fig: Figure, dir: &Path) -> Result<Vec<Claim>, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let name = fig.name();
    let mut report = String::new();
    let mut claims = Vec::new();
    let mut emit = |stem: String, out: &SweepOutput, new: Vec<Claim>, title: &str| {
        write_file(&dir.join(format!("{stem}.csv")), &long_csv(out))?;
        write_file(&dir.join(format!("{stem}_summary.csv")), &summary_csv(out))?;
        report.push_str(&report_block(title, out, &new));
        claims.extend(new);
        Ok::<_, CliError>(())
    };
    match fig {
        Figure::Fig1 => {
            let out = run_sweep(&truth_spec(Param::Sigma, &[5.0, 6.0, 7.0, 8.0]))?;
            emit(
                name.to_string(),
                &out,
                fig1_claims(&out),
                "fig1: net payoff across sigma, k = 6",
            )?;
        }
        Figure::Fig2 => {
            let out = run_sweep(&truth_spec(Param::K, &[5.0, 6.0, 7.0, 8.0]))?;
            emit(
                name.to_string(),
                &out,
                fig2_claims(&out),
                "fig2: net payoff across k, sigma = 5",
            )?;
        }
        Figure::Fig3 => {
            for tail in [Tail::Full, Tail::Truncated] {
                let out = run_sweep(&fig3_spec(tail))?;
                let mode = match tail {
                    Tail::Full => "full",
                    Tail::Truncated => "truncated",
                };
                let claims = fig3_claims(&out, tail);
                emit(
                    format!("{name}_{mode}"),
                    &out,
                    claims,
                    &format!("fig3 ({mode} tail): fake net payoff across p*"),
                )?;
            }
        }
    }
    write_file(&dir.join(format!("{name}_report.txt")), &report)?;
    Ok(claims)
}
