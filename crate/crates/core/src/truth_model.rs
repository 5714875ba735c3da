//! Payoffs of regular agents deciding whether to volunteer to validate news.
//!
//! A focal agent faces `N - 1` co-players who each volunteer with
//! probability `x`. The public good (truth dominating the news cycle) is
//! produced when at least `k` agents volunteer in total, counting the focal
//! agent if it volunteers. All payoffs are in units of the fictional
//! currency ζ against a baseline payoff of 1.
//!
//! The shared reward `σ` is split among the `M + 1` volunteers and funded by
//! a `σ / N` fee; both the reward and the fee apply **only when the public
//! good is produced**. This follows the summation bounds of the average
//! payoff formulas, which start at `k - 1` co-volunteers for a volunteer and
//! at `k` for a defector.

use crate::error::{Error, Result};
use crate::numerics::{binomial_expectation, binomial_tail, Probability};
use crate::scalar::Scalar;

/// Parameters of the regular-agent game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthGameParams<T> {
    /// `N`, number of regular agents.
    pub n_regular: u32,
    /// `k`, minimum number of volunteers for truth to dominate.
    pub threshold: u32,
    /// `c`, cost of volunteering.
    pub cost_volunteer: T,
    /// `α`, cost every agent bears when the public good fails.
    pub cost_failure: T,
    /// `σ`, reward pool shared among volunteers on success.
    pub shared_reward: T,
}

impl<T: Scalar> TruthGameParams<T> {
    /// Validated constructor; requires `0 < c < α`.
    pub fn new(
        n_regular: u32,
        threshold: u32,
        cost_volunteer: T,
        cost_failure: T,
        shared_reward: T,
    ) -> Result<Self> {
        let p = Self {
            n_regular,
            threshold,
            cost_volunteer,
            cost_failure,
            shared_reward,
        };
        p.validate(false)?;
        Ok(p)
    }

    /// N = 100, k = 6, c = 0.5, α = 0.9, σ = 5.
    pub fn baseline() -> Self {
        Self {
            n_regular: 100,
            threshold: 6,
            cost_volunteer: T::lit(0.5),
            cost_failure: T::lit(0.9),
            shared_reward: T::lit(5.0),
        }
    }

    pub fn with_threshold(mut self, k: u32) -> Self {
        self.threshold = k;
        self
    }

    pub fn with_shared_reward(mut self, sigma: T) -> Self {
        self.shared_reward = sigma;
        self
    }

    /// Checks the structural invariants. With `allow_nonstandard` the cost
    /// ordering `0 < c < α` is not enforced, but costs must stay finite.
    pub fn validate(&self, allow_nonstandard: bool) -> Result<()> {
        if self.n_regular < 2 {
            return Err(Error::InvalidParams(format!(
                "n_regular must be at least 2, got {}",
                self.n_regular
            )));
        }
        if self.threshold < 1 || self.threshold > self.n_regular {
            return Err(Error::InvalidParams(format!(
                "threshold must lie in 1..={}, got {}",
                self.n_regular, self.threshold
            )));
        }
        let (c, a, s) = (self.cost_volunteer, self.cost_failure, self.shared_reward);
        if !(c.is_finite() && a.is_finite() && s.is_finite()) {
            return Err(Error::InvalidParams(
                "costs and reward must be finite".into(),
            ));
        }
        if s < T::zero() {
            return Err(Error::InvalidParams(format!(
                "shared_reward must be >= 0, got {s}"
            )));
        }
        if !allow_nonstandard && !(T::zero() < c && c < a) {
            return Err(Error::InvalidParams(format!(
                "expected 0 < cost_volunteer < cost_failure, got c = {c}, alpha = {a}"
            )));
        }
        Ok(())
    }

    fn co_players(&self) -> u64 {
        u64::from(self.n_regular) - 1
    }
}

/// Volunteer and defector average payoffs at one volunteering ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffPair<T> {
    pub volunteer_avg: T,
    pub defector_avg: T,
    /// `volunteer_avg - defector_avg`.
    pub net: T,
}

impl<T: Scalar> PayoffPair<T> {
    pub fn new(volunteer_avg: T, defector_avg: T) -> Self {
        Self {
            volunteer_avg,
            defector_avg,
            net: volunteer_avg - defector_avg,
        }
    }
}

/// Individual payoff given the total number of volunteers `M` (including
/// the focal agent when it volunteers).
pub fn individual_payoff_regular<T: Scalar>(
    volunteers_total: u32,
    did_volunteer: bool,
    params: &TruthGameParams<T>,
) -> Result<T> {
    if volunteers_total > params.n_regular {
        return Err(Error::Precondition(format!(
            "{volunteers_total} volunteers among {} agents",
            params.n_regular
        )));
    }
    if did_volunteer && volunteers_total == 0 {
        return Err(Error::Precondition(
            "a volunteer implies at least one volunteer".into(),
        ));
    }
    let success = volunteers_total >= params.threshold;
    let base = if success {
        T::one()
    } else {
        T::one() - params.cost_failure
    };
    Ok(if did_volunteer {
        base - params.cost_volunteer
    } else {
        base
    })
}

/// Average payoff of a volunteer when each co-player volunteers with
/// probability `x`.
pub fn avg_payoff_volunteer<T: Scalar>(x: Probability<T>, params: &TruthGameParams<T>) -> T {
    let n = params.co_players();
    let k = i64::from(params.threshold);
    let c = params.cost_volunteer;
    let a = params.cost_failure;
    let success = binomial_tail(n, k - 1, x).value();
    let mut payoff = success * (T::one() - c) + (T::one() - success) * (T::one() - c - a);

    let sigma = params.shared_reward;
    if sigma != T::zero() {
        let lo = u64::from(params.threshold - 1);
        let fee = sigma / T::count(u64::from(params.n_regular));
        // Σ pmf(M) σ/(M+1) over the success range, minus the fee on success.
        let share = binomial_expectation(n, lo, n, x, |m| sigma / T::count(m + 1));
        payoff = payoff + share - fee * success;
    }
    payoff
}

/// Average payoff of a defector when each co-player volunteers with
/// probability `x`.
pub fn avg_payoff_defector<T: Scalar>(x: Probability<T>, params: &TruthGameParams<T>) -> T {
    let n = params.co_players();
    let success = binomial_tail(n, i64::from(params.threshold), x).value();
    let fee = params.shared_reward / T::count(u64::from(params.n_regular));
    success + (T::one() - success) * (T::one() - params.cost_failure) - fee * success
}

/// Volunteer minus defector average payoff. Zeros are candidate mixed
/// equilibria.
pub fn net_payoff_regular<T: Scalar>(x: Probability<T>, params: &TruthGameParams<T>) -> T {
    avg_payoff_volunteer(x, params) - avg_payoff_defector(x, params)
}

pub fn truth_payoffs<T: Scalar>(x: Probability<T>, params: &TruthGameParams<T>) -> PayoffPair<T> {
    PayoffPair::new(
        avg_payoff_volunteer(x, params),
        avg_payoff_defector(x, params),
    )
}
