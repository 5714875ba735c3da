//! Run configuration: defaults, optional JSON config file, flag overrides.
//!
//! Precedence is flag > config file > default, applied per field.

use std::path::Path;

use serde::{Deserialize, Serialize};
use vod_core::{
    stable_equilibrium, Dominance, FakeGameParams, ModelPoint, Probability, SolverOptions,
    TailMode, TruthGameParams,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    #[default]
    Truth,
    Fake,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Truncated,
    #[default]
    Full,
}

impl From<Tail> for TailMode {
    fn from(t: Tail) -> Self {
        match t {
            Tail::Truncated => TailMode::Truncated,
            Tail::Full => TailMode::Full,
        }
    }
}

/// Every model and solver setting, with the standard operating point as
/// defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: Model,
    pub n: u32,
    pub f: u32,
    pub k: u32,
    pub c: f64,
    pub alpha: f64,
    pub cf: f64,
    pub sigma: f64,
    /// Regular agents' equilibrium ratio for the fake model; the stable
    /// truth equilibrium when absent.
    pub pstar: Option<f64>,
    /// Regular volunteering ratio for `simulate`; the stable truth
    /// equilibrium when absent.
    pub x: Option<f64>,
    pub xf: f64,
    pub xmin: f64,
    pub xmax: f64,
    pub points: usize,
    pub grid: usize,
    pub tol: f64,
    pub tail: Tail,
    pub strict_dominance: bool,
    pub trials: u64,
    pub seed: u64,
    pub allow_nonstandard: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: Model::Truth,
            n: 100,
            f: 8,
            k: 6,
            c: 0.5,
            alpha: 0.9,
            cf: 0.1,
            sigma: 5.0,
            pstar: None,
            x: None,
            xf: 0.5,
            xmin: 0.0,
            xmax: 1.0,
            points: 101,
            grid: 2048,
            tol: 1e-10,
            tail: Tail::Full,
            strict_dominance: false,
            trials: 1_000_000,
            seed: 0,
            allow_nonstandard: false,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Invalid(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Invalid(format!("bad config {}: {e}", path.display())))
    }

    pub fn truth_params(&self) -> Result<TruthGameParams<f64>, CliError> {
        let p = TruthGameParams {
            n_regular: self.n,
            threshold: self.k,
            cost_volunteer: self.c,
            cost_failure: self.alpha,
            shared_reward: self.sigma,
        };
        p.validate(self.allow_nonstandard)?;
        Ok(p)
    }

    pub fn fake_params(&self) -> Result<FakeGameParams<f64>, CliError> {
        let p = FakeGameParams {
            n_fake: self.f,
            cost_volunteer_fake: self.cf,
            cost_failure: self.alpha,
            dominance: if self.strict_dominance {
                Dominance::Strict
            } else {
                Dominance::AtLeast
            },
        };
        p.validate(self.allow_nonstandard)?;
        Ok(p)
    }

    pub fn solver(&self) -> Result<SolverOptions<f64>, CliError> {
        if self.grid < 2 {
            return Err(CliError::Invalid(format!(
                "--grid must be at least 2, got {}",
                self.grid
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(CliError::Invalid(format!(
                "--tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(SolverOptions {
            grid_points: self.grid,
            tol: self.tol,
            ..SolverOptions::default()
        })
    }

    /// Explicit `p*`, or the stable truth equilibrium of these parameters.
    pub fn resolve_pstar(&self) -> Result<Probability<f64>, CliError> {
        match self.pstar {
            Some(v) => Ok(Probability::new(v)?),
            None => stable_equilibrium(&self.truth_params()?, &self.solver()?).ok_or_else(|| {
                CliError::Invalid(
                    "no stable truth equilibrium at these parameters; pass --pstar".into(),
                )
            }),
        }
    }

    pub fn model_point(&self) -> Result<ModelPoint<f64>, CliError> {
        match self.model {
            Model::Truth => Ok(ModelPoint::Truth(self.truth_params()?)),
            Model::Fake => Ok(ModelPoint::Fake {
                params: self.fake_params()?,
                p_star: self.resolve_pstar()?,
                n_regular: self.n,
                tail: self.tail.into(),
            }),
        }
    }

    pub fn x_range(&self) -> Result<(f64, f64), CliError> {
        if !(0.0 <= self.xmin && self.xmin < self.xmax && self.xmax <= 1.0) {
            return Err(CliError::Invalid(format!(
                "x range [{}, {}] must satisfy 0 <= xmin < xmax <= 1",
                self.xmin, self.xmax
            )));
        }
        if self.points < 2 {
            return Err(CliError::Invalid(format!(
                "--points must be at least 2, got {}",
                self.points
            )));
        }
        Ok((self.xmin, self.xmax))
    }
}

/// Parameters that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    N,
    F,
    K,
    C,
    Alpha,
    Cf,
    Sigma,
    Pstar,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::N => "n",
            Param::F => "f",
            Param::K => "k",
            Param::C => "c",
            Param::Alpha => "alpha",
            Param::Cf => "cf",
            Param::Sigma => "sigma",
            Param::Pstar => "pstar",
        }
    }

    pub fn parse(name: &str, model: Model) -> Result<Self, CliError> {
        let p = match name {
            "n" => Param::N,
            "f" => Param::F,
            "k" => Param::K,
            "c" => Param::C,
            "alpha" => Param::Alpha,
            "cf" => Param::Cf,
            "sigma" => Param::Sigma,
            "pstar" => Param::Pstar,
            other => {
                return Err(CliError::Invalid(format!(
                    "unknown sweep parameter {other:?}"
                )))
            }
        };
        let valid = match model {
            Model::Truth => matches!(
                p,
                Param::N | Param::K | Param::C | Param::Alpha | Param::Sigma
            ),
            // Truth parameters still matter to the fake model through p*.
            Model::Fake => true,
        };
        if valid {
            Ok(p)
        } else {
            Err(CliError::Invalid(format!(
                "{name:?} is not a parameter of the truth model"
            )))
        }
    }

    /// Copy of `base` with this parameter set to `value`.
    pub fn apply(self, base: &RunConfig, value: f64) -> Result<RunConfig, CliError> {
        let count = || -> Result<u32, CliError> {
            if value.fract() == 0.0 && value >= 0.0 && value <= f64::from(u32::MAX) {
                Ok(value as u32)
            } else {
                Err(CliError::Invalid(format!(
                    "{} must be a whole number, got {value}",
                    self.name()
                )))
            }
        };
        let mut cfg = base.clone();
        match self {
            Param::N => cfg.n = count()?,
            Param::F => cfg.f = count()?,
            Param::K => cfg.k = count()?,
            Param::C => cfg.c = value,
            Param::Alpha => cfg.alpha = value,
            Param::Cf => cfg.cf = value,
            Param::Sigma => cfg.sigma = value,
            Param::Pstar => cfg.pstar = Some(value),
        }
        Ok(cfg)
    }
}
