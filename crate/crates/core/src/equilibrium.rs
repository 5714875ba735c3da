//! Mixed-strategy equilibria as zeros of a net-payoff curve on `[0, 1]`.
//!
//! Roots are bracketed on a uniform grid, bisected, and classified by the
//! sign of the finite-difference slope: a negative slope means a small
//! deviation in the volunteering ratio is pushed back (stable), a positive
//! slope means it is amplified (unstable).

use crate::error::{Error, Result};
use crate::fake_model::{expected_fake_payoffs, FakeGameParams, TailMode};
use crate::numerics::{
    brackets_from_samples, refine_root, sample_unit, slope_at, Probability, DEFAULT_GRID_POINTS,
    DEFAULT_ROOT_TOL, DEFAULT_SLOPE_STEP,
};
use crate::scalar::Scalar;
use crate::truth_model::{net_payoff_regular, truth_payoffs, PayoffPair, TruthGameParams};

/// Default slope magnitude below which an equilibrium is degenerate.
pub const DEFAULT_SLOPE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    pub grid_points: usize,
    pub tol: T,
    pub slope_step: T,
    pub slope_epsilon: T,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            tol: T::lit(DEFAULT_ROOT_TOL),
            slope_step: T::lit(DEFAULT_SLOPE_STEP),
            slope_epsilon: T::lit(DEFAULT_SLOPE_EPSILON),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    Degenerate,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium<T> {
    pub x: Probability<T>,
    pub slope: T,
    pub stability: Stability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Mixed,
    DominantDefect,
    DominantVolunteer,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Mixed => "mixed",
            Regime::DominantDefect => "dominant_defect",
            Regime::DominantVolunteer => "dominant_volunteer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of<T: Scalar>(v: T) -> Self {
        if v > T::zero() {
            Sign::Positive
        } else if v < T::zero() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport<T> {
    /// Ascending in `x`.
    pub equilibria: Vec<Equilibrium<T>>,
    pub regime: Regime,
    /// Sign of the net payoff at `x = 0` and `x = 1`.
    pub endpoint_signs: (Sign, Sign),
}

impl<T: Scalar> RegimeReport<T> {
    /// Largest stable equilibrium.
    pub fn stable(&self) -> Option<&Equilibrium<T>> {
        self.equilibria
            .iter()
            .rev()
            .find(|e| e.stability == Stability::Stable)
    }

    /// Smallest unstable equilibrium.
    pub fn unstable(&self) -> Option<&Equilibrium<T>> {
        self.equilibria
            .iter()
            .find(|e| e.stability == Stability::Unstable)
    }
}

fn classify<T: Scalar>(slope: T, eps: T) -> Stability {
    if slope < -eps {
        Stability::Stable
    } else if slope > eps {
        Stability::Unstable
    } else {
        Stability::Degenerate
    }
}

/// Zeros of `net_fn` on `[0, 1]` with their stability, plus the dominance
/// regime when there are none.
pub fn find_equilibria<T, F>(net_fn: F, opts: &SolverOptions<T>) -> Result<RegimeReport<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let samples = sample_unit(&net_fn, opts.grid_points)?;
    let mut equilibria: Vec<Equilibrium<T>> = Vec::new();
    for bracket in brackets_from_samples(&samples) {
        let x = refine_root(&net_fn, &bracket, opts.tol);
        let slope = slope_at(&net_fn, x, opts.slope_step);
        let on_boundary = x.value() == T::zero() || x.value() == T::one();
        let stability = if bracket.is_degenerate() && on_boundary {
            Stability::Degenerate
        } else {
            classify(slope, opts.slope_epsilon)
        };
        if let Some(prev) = equilibria.last() {
            if x.value() - prev.x.value() < opts.tol {
                continue;
            }
        }
        equilibria.push(Equilibrium {
            x,
            slope,
            stability,
        });
    }

    let regime = if !equilibria.is_empty() {
        Regime::Mixed
    } else if samples.iter().all(|&(_, v)| v < T::zero()) {
        Regime::DominantDefect
    } else if samples.iter().all(|&(_, v)| v > T::zero()) {
        Regime::DominantVolunteer
    } else {
        Regime::Mixed
    };
    let endpoint_signs = (
        Sign::of(samples[0].1),
        Sign::of(samples[samples.len() - 1].1),
    );
    Ok(RegimeReport {
        equilibria,
        regime,
        endpoint_signs,
    })
}

/// Regime report for the regular agents' net payoff.
pub fn truth_equilibria<T: Scalar>(
    params: &TruthGameParams<T>,
    opts: &SolverOptions<T>,
) -> Result<RegimeReport<T>> {
    find_equilibria(
        |x| net_payoff_regular(Probability::clamped(x), params),
        opts,
    )
}

/// Largest stable volunteering ratio of the regular agents, i.e. the `p*`
/// fed into the fake agents' expectation. `None` under pure dominance.
pub fn stable_equilibrium<T: Scalar>(
    params: &TruthGameParams<T>,
    opts: &SolverOptions<T>,
) -> Option<Probability<T>> {
    truth_equilibria(params, opts).ok()?.stable().map(|e| e.x)
}

/// Which payoff curve to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelPoint<T> {
    Truth(TruthGameParams<T>),
    /// Fake agents as a function of their own ratio `x_f`, with regular
    /// volunteers drawn from Binomial(`n_regular`, `p_star`).
    Fake {
        params: FakeGameParams<T>,
        p_star: Probability<T>,
        n_regular: u32,
        tail: TailMode,
    },
}

impl<T: Scalar> ModelPoint<T> {
    pub fn payoffs(&self, x: Probability<T>) -> PayoffPair<T> {
        match self {
            ModelPoint::Truth(p) => truth_payoffs(x, p),
            ModelPoint::Fake {
                params,
                p_star,
                n_regular,
                tail,
            } => expected_fake_payoffs(x, *p_star, *n_regular, params, *tail),
        }
    }

    pub fn net(&self, x: T) -> T {
        self.payoffs(Probability::clamped(x)).net
    }

    pub fn equilibria(&self, opts: &SolverOptions<T>) -> Result<RegimeReport<T>> {
        find_equilibria(|x| self.net(x), opts)
    }
}

/// Payoff curves sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample<T> {
    pub xs: Vec<Probability<T>>,
    pub volunteer_avg: Vec<T>,
    pub defector_avg: Vec<T>,
    pub net: Vec<T>,
}

impl<T: Scalar> CurveSample<T> {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Largest sampled net payoff.
    pub fn max_net(&self) -> T {
        self.net.iter().copied().fold(T::neg_infinity(), T::max)
    }
}

/// `i`-th of `points` uniform samples on `[lo, hi]`, endpoints exact.
pub fn grid_value<T: Scalar>(lo: T, hi: T, i: usize, points: usize) -> T {
    if i + 1 == points {
        return hi;
    }
    lo + (hi - lo) * T::count(i as u64) / T::count((points - 1) as u64)
}

pub fn sample_curve<T: Scalar>(
    model: &ModelPoint<T>,
    x_range: (T, T),
    points: usize,
) -> Result<CurveSample<T>> {
    let (lo, hi) = x_range;
    if !(T::zero() <= lo && lo < hi && hi <= T::one()) {
        return Err(Error::Precondition(format!(
            "x range [{lo}, {hi}] must satisfy 0 <= lo < hi <= 1"
        )));
    }
    if points < 2 {
        return Err(Error::Precondition(format!(
            "need at least 2 points, got {points}"
        )));
    }
    let mut out = CurveSample {
        xs: Vec::with_capacity(points),
        volunteer_avg: Vec::with_capacity(points),
        defector_avg: Vec::with_capacity(points),
        net: Vec::with_capacity(points),
    };
    for i in 0..points {
        let x = Probability::clamped(grid_value(lo, hi, i, points));
        let pair = model.payoffs(x);
        out.xs.push(x);
        out.volunteer_avg.push(pair.volunteer_avg);
        out.defector_avg.push(pair.defector_avg);
        out.net.push(pair.net);
    }
    Ok(out)
}
