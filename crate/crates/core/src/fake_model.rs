//! Payoffs of fake-news agents.
//!
//! `F` fake agents decide whether to spend `c_f` spreading fake news. They
//! win when the number of fake volunteers `k` at least matches the number
//! of regular volunteers `M` (or strictly exceeds it under
//! [`Dominance::Strict`]). There is no reward pool on this side.
//!
//! Regular agents do not react to fake agents, so `M` is drawn from
//! Binomial(`N`, `p*`) where `p*` is the regular agents' equilibrium
//! volunteering ratio, and the fake agents' payoffs are averaged over it.

use crate::error::{Error, Result};
use crate::numerics::{binomial_expectation, binomial_tail, Probability};
use crate::scalar::Scalar;
use crate::truth_model::PayoffPair;

/// Success rule for the fake side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dominance {
    /// Fake news wins when `k ≥ M`.
    #[default]
    AtLeast,
    /// Fake news wins when `k > M`.
    Strict,
}

impl Dominance {
    fn succeeds(self, fake_volunteers: u64, regular_volunteers: u64) -> bool {
        match self {
            Dominance::AtLeast => fake_volunteers >= regular_volunteers,
            Dominance::Strict => fake_volunteers > regular_volunteers,
        }
    }

    /// Minimum total fake volunteers needed to win against `m` regulars.
    fn needed(self, m: u64) -> u64 {
        match self {
            Dominance::AtLeast => m,
            Dominance::Strict => m + 1,
        }
    }
}

/// How the expectation over regular volunteers `M` is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailMode {
    /// Sum over `M = 0..=F` only; mass above `F` is dropped.
    Truncated,
    /// Sum over `M = 0..=N`; above `F` both sides fail.
    #[default]
    Full,
}

impl TailMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TailMode::Truncated => "truncated",
            TailMode::Full => "full",
        }
    }
}

impl std::str::FromStr for TailMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "truncated" => Ok(TailMode::Truncated),
            "full" => Ok(TailMode::Full),
            other => Err(Error::InvalidParams(format!("unknown tail mode {other:?}"))),
        }
    }
}

/// Parameters of the fake-agent game.
///
/// `cost_volunteer_fake` is meant to be a fraction of the regular agents'
/// volunteering cost; that relation is not checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FakeGameParams<T> {
    /// `F`, number of fake agents.
    pub n_fake: u32,
    /// `c_f`.
    pub cost_volunteer_fake: T,
    /// `α`, shared with the truth game.
    pub cost_failure: T,
    pub dominance: Dominance,
}

impl<T: Scalar> FakeGameParams<T> {
    pub fn new(n_fake: u32, cost_volunteer_fake: T, cost_failure: T) -> Result<Self> {
        let p = Self {
            n_fake,
            cost_volunteer_fake,
            cost_failure,
            dominance: Dominance::AtLeast,
        };
        p.validate(false)?;
        Ok(p)
    }

    /// F = 8, c_f = 0.1, α = 0.9.
    pub fn baseline() -> Self {
        Self {
            n_fake: 8,
            cost_volunteer_fake: T::lit(0.1),
            cost_failure: T::lit(0.9),
            dominance: Dominance::AtLeast,
        }
    }

    pub fn with_dominance(mut self, dominance: Dominance) -> Self {
        self.dominance = dominance;
        self
    }

    pub fn validate(&self, allow_nonstandard: bool) -> Result<()> {
        if self.n_fake < 1 {
            return Err(Error::InvalidParams("n_fake must be at least 1".into()));
        }
        let (cf, a) = (self.cost_volunteer_fake, self.cost_failure);
        if !(cf.is_finite() && a.is_finite()) {
            return Err(Error::InvalidParams("costs must be finite".into()));
        }
        if !allow_nonstandard && !(T::zero() < cf && cf < a) {
            return Err(Error::InvalidParams(format!(
                "expected 0 < cost_volunteer_fake < cost_failure, got cf = {cf}, alpha = {a}"
            )));
        }
        Ok(())
    }

    fn co_players(&self) -> u64 {
        u64::from(self.n_fake) - 1
    }
}

/// Individual payoff of a fake agent given `k` fake volunteers in total and
/// `M` regular volunteers.
pub fn individual_payoff_fake<T: Scalar>(
    fake_volunteers_total: u32,
    regular_volunteers: u64,
    did_volunteer: bool,
    params: &FakeGameParams<T>,
) -> Result<T> {
    if fake_volunteers_total > params.n_fake {
        return Err(Error::Precondition(format!(
            "{fake_volunteers_total} fake volunteers among {} fake agents",
            params.n_fake
        )));
    }
    if did_volunteer && fake_volunteers_total == 0 {
        return Err(Error::Precondition(
            "a volunteer implies at least one volunteer".into(),
        ));
    }
    Ok(fake_payoff(
        u64::from(fake_volunteers_total),
        regular_volunteers,
        did_volunteer,
        params,
    ))
}

#[inline]
pub(crate) fn fake_payoff<T: Scalar>(
    fake_total: u64,
    regular: u64,
    did_volunteer: bool,
    params: &FakeGameParams<T>,
) -> T {
    let base = if params.dominance.succeeds(fake_total, regular) {
        T::one()
    } else {
        T::one() - params.cost_failure
    };
    if did_volunteer {
        base - params.cost_volunteer_fake
    } else {
        base
    }
}

/// `P[co-volunteers ≥ needed]` for the `F - 1` fake co-players.
fn fake_success<T: Scalar>(x_f: Probability<T>, needed: u64, params: &FakeGameParams<T>) -> T {
    let lo = i64::try_from(needed).unwrap_or(i64::MAX);
    binomial_tail(params.co_players(), lo, x_f).value()
}

/// Average payoff of a volunteering fake agent facing `M` regular
/// volunteers. `M = 0` always succeeds; `M > F` always fails.
pub fn avg_payoff_fake_volunteer<T: Scalar>(
    x_f: Probability<T>,
    regular_volunteers: u64,
    params: &FakeGameParams<T>,
) -> T {
    // The focal volunteer counts itself.
    let needed = params
        .dominance
        .needed(regular_volunteers)
        .saturating_sub(1);
    let s = fake_success(x_f, needed, params);
    let cf = params.cost_volunteer_fake;
    s * (T::one() - cf) + (T::one() - s) * (T::one() - cf - params.cost_failure)
}

/// Average payoff of a defecting fake agent facing `M` regular volunteers.
pub fn avg_payoff_fake_defector<T: Scalar>(
    x_f: Probability<T>,
    regular_volunteers: u64,
    params: &FakeGameParams<T>,
) -> T {
    let needed = params.dominance.needed(regular_volunteers);
    let t = fake_success(x_f, needed, params);
    t + (T::one() - t) * (T::one() - params.cost_failure)
}

pub fn fake_payoffs<T: Scalar>(
    x_f: Probability<T>,
    regular_volunteers: u64,
    params: &FakeGameParams<T>,
) -> PayoffPair<T> {
    PayoffPair::new(
        avg_payoff_fake_volunteer(x_f, regular_volunteers, params),
        avg_payoff_fake_defector(x_f, regular_volunteers, params),
    )
}

/// Volunteer and defector payoffs of a fake agent averaged over
/// `M ~ Binomial(n_regular, p_star)`.
///
/// Above `M = F` neither side can win, so in [`TailMode::Full`] that mass
/// contributes the failure payoffs in closed form.
pub fn expected_fake_payoffs<T: Scalar>(
    x_f: Probability<T>,
    p_star: Probability<T>,
    n_regular: u32,
    params: &FakeGameParams<T>,
    tail: TailMode,
) -> PayoffPair<T> {
    let n = u64::from(n_regular);
    let f = u64::from(params.n_fake);
    let head_v = binomial_expectation(n, 0, f, p_star, |m| {
        avg_payoff_fake_volunteer(x_f, m, params)
    });
    let head_d = binomial_expectation(n, 0, f, p_star, |m| {
        avg_payoff_fake_defector(x_f, m, params)
    });
    match tail {
        TailMode::Truncated => PayoffPair::new(head_v, head_d),
        TailMode::Full => {
            let above = binomial_tail(n, f as i64 + 1, p_star).value();
            let fail_d = T::one() - params.cost_failure;
            let fail_v = fail_d - params.cost_volunteer_fake;
            PayoffPair::new(head_v + above * fail_v, head_d + above * fail_d)
        }
    }
}

/// Expected net payoff (volunteer minus defector) of a fake agent.
pub fn expected_net_payoff_fake<T: Scalar>(
    x_f: Probability<T>,
    p_star: Probability<T>,
    n_regular: u32,
    params: &FakeGameParams<T>,
    tail: TailMode,
) -> T {
    expected_fake_payoffs(x_f, p_star, n_regular, params, tail).net
}
