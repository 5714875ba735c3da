//! Subcommand definitions and handlers.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use vod_core::{
    expected_fake_payoffs, sample_curve, simulate_fake, simulate_truth, truth_payoffs, Probability,
    SimResult, TailMode,
};

use crate::config::{Model, Param, RunConfig, Tail};
use crate::error::CliError;
use crate::output::{curve_csv, write_file, RegimeJson};
use crate::reproduce::{reproduce, Figure};
use crate::sweep::{long_csv, run_sweep, summary_csv, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "vod",
    version,
    about = "Volunteer's-dilemma equilibria for truth and fake-news dissemination"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample volunteer, defector and net payoff curves to CSV.
    Curve(ModelArgs),
    /// Print the equilibria and regime of the net payoff as JSON.
    Equilibria(ModelArgs),
    /// Sweep one parameter; writes a long CSV and a summary CSV.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// Parameter to sweep: n, f, k, c, alpha, cf, sigma, pstar.
        #[arg(long)]
        sweep: String,
        /// Comma-separated values of the swept parameter.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Monte Carlo check of the analytic payoffs.
    Simulate(ModelArgs),
    /// Regenerate the data behind one figure and check its claims.
    Reproduce {
        fig: Figure,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// Flags shared by the model subcommands. Unset flags fall back to the
/// config file, then to the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub f: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub cf: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub pstar: Option<f64>,
    /// Regular volunteering ratio used by `simulate --model truth`.
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub xf: Option<f64>,
    #[arg(long)]
    pub xmin: Option<f64>,
    #[arg(long)]
    pub xmax: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub tail: Option<Tail>,
    #[arg(long)]
    pub strict_dominance: bool,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub allow_nonstandard: bool,
}

impl ModelArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { c.$field = v; })*
            };
        }
        take!(
            model, n, f, k, c, alpha, cf, sigma, xf, xmin, xmax, points, grid, tol, tail, trials,
            seed
        );
        if self.pstar.is_some() {
            c.pstar = self.pstar;
        }
        if self.x.is_some() {
            c.x = self.x;
        }
        c.strict_dominance |= self.strict_dominance;
        c.allow_nonstandard |= self.allow_nonstandard;
        Ok(c)
    }
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

pub fn cmd_curve(args: &ModelArgs) -> Result<(), CliError> {
    let cfg = args.resolve()?;
    let model = cfg.model_point()?;
    let curve = sample_curve(&model, cfg.x_range()?, cfg.points)?;
    emit(args.out.as_deref(), &curve_csv(&curve))
}

pub fn cmd_equilibria(args: &ModelArgs) -> Result<(), CliError> {
    let cfg = args.resolve()?;
    let report = cfg.model_point()?.equilibria(&cfg.solver()?)?;
    let json = serde_json::to_string_pretty(&RegimeJson::from(&report))
        .map_err(|e| CliError::Io(e.to_string()))?;
    println!("{json}");
    Ok(())
}

/// `<out>` with a trailing `.csv` swapped for `.summary.csv`.
pub fn summary_path(out: &Path) -> PathBuf {
    let s = out.to_string_lossy();
    match s.strip_suffix(".csv") {
        Some(stem) => PathBuf::from(format!("{stem}.summary.csv")),
        None => PathBuf::from(format!("{s}.summary.csv")),
    }
}

pub fn cmd_sweep(args: &ModelArgs, name: &str, values: &[f64]) -> Result<(), CliError> {
    let base = args.resolve()?;
    let spec = SweepSpec {
        param: Param::parse(name, base.model)?,
        base,
        values: values.to_vec(),
    };
    let out = run_sweep(&spec)?;
    match &args.out {
        Some(path) => {
            write_file(path, &long_csv(&out))?;
            write_file(&summary_path(path), &summary_csv(&out))
        }
        None => {
            print!("{}", long_csv(&out));
            eprint!("{}", summary_csv(&out));
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SimReport {
    pub volunteer_avg: f64,
    pub defector_avg: f64,
    pub se_v: f64,
    pub se_d: f64,
    pub analytic_v: f64,
    pub analytic_d: f64,
    pub z_v: f64,
    pub z_d: f64,
}

/// Standardized deviation; an exact match under zero variance is 0.
pub fn z_score(estimate: f64, se: f64, analytic: f64) -> f64 {
    let diff = estimate - analytic;
    if se > 0.0 {
        diff / se
    } else if diff.abs() <= 1e-12 * analytic.abs().max(1.0) {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

/// Z threshold above which `simulate` reports a failed self-check.
pub const Z_FAIL: f64 = 5.0;

pub fn simulation_report(cfg: &RunConfig) -> Result<SimReport, CliError> {
    if cfg.trials == 0 {
        return Err(CliError::Invalid("--trials must be at least 1".into()));
    }
    let (sim, analytic): (SimResult<f64>, _) = match cfg.model {
        Model::Truth => {
            let params = cfg.truth_params()?;
            let x = match cfg.x {
                Some(v) => Probability::new(v)?,
                None => cfg.resolve_pstar()?,
            };
            (
                simulate_truth(&params, x, cfg.trials, cfg.seed)?,
                truth_payoffs(x, &params),
            )
        }
        Model::Fake => {
            let params = cfg.fake_params()?;
            let p_star = cfg.resolve_pstar()?;
            let xf = Probability::new(cfg.xf)?;
            // The simulation draws M without truncation.
            let analytic = expected_fake_payoffs(xf, p_star, cfg.n, &params, TailMode::Full);
            (
                simulate_fake(p_star, cfg.n, &params, xf, cfg.trials, cfg.seed)?,
                analytic,
            )
        }
    };
    Ok(SimReport {
        volunteer_avg: sim.volunteer_avg_hat,
        defector_avg: sim.defector_avg_hat,
        se_v: sim.volunteer_se,
        se_d: sim.defector_se,
        analytic_v: analytic.volunteer_avg,
        analytic_d: analytic.defector_avg,
        z_v: z_score(
            sim.volunteer_avg_hat,
            sim.volunteer_se,
            analytic.volunteer_avg,
        ),
        z_d: z_score(sim.defector_avg_hat, sim.defector_se, analytic.defector_avg),
    })
}

pub fn cmd_simulate(args: &ModelArgs) -> Result<(), CliError> {
    let report = simulation_report(&args.resolve()?)?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
    println!("{json}");
    if report.z_v.abs() > Z_FAIL || report.z_d.abs() > Z_FAIL {
        return Err(CliError::SelfCheck(format!(
            "simulation deviates from analytic values (z_v = {}, z_d = {})",
            report.z_v, report.z_d
        )));
    }
    Ok(())
}

pub fn cmd_reproduce(fig: Figure, out: &Path) -> Result<(), CliError> {
    let claims = reproduce(fig, out)?;
    for c in &claims {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Curve(a) => cmd_curve(a),
        Command::Equilibria(a) => cmd_equilibria(a),
        Command::Sweep {
            model,
            sweep,
            values,
        } => cmd_sweep(model, sweep, values),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Reproduce { fig, out } => cmd_reproduce(*fig, out),
    }
}
