//! Mixed-strategy equilibria of a volunteer's-dilemma model of news
//! validation.
//!
//! Regular agents choose whether to pay to validate news, which is a public
//! good that succeeds once enough of them volunteer. A shared reward pool
//! is split among volunteers. A small group of fake-news agents plays its
//! own threshold game against the regular agents' equilibrium.
//!
//! The math is generic over [`Scalar`] (`f32` or `f64`). The `*F64` / `*F32`
//! aliases below name the concrete types.

pub mod equilibrium;
pub mod error;
pub mod fake_model;
pub mod numerics;
pub mod oracle;
pub mod scalar;
pub mod truth_model;

pub use equilibrium::{
    find_equilibria, sample_curve, stable_equilibrium, truth_equilibria, CurveSample, Equilibrium,
    ModelPoint, Regime, RegimeReport, Sign, SolverOptions, Stability,
};
pub use error::{Error, Result};
pub use fake_model::{
    avg_payoff_fake_defector, avg_payoff_fake_volunteer, expected_fake_payoffs,
    expected_net_payoff_fake, individual_payoff_fake, Dominance, FakeGameParams, TailMode,
};
pub use numerics::{
    binomial_tail, find_brackets, log_binomial_pmf, refine_root, slope_at, Bracket, Probability,
};
pub use oracle::{
    enumerate_fake_exact, enumerate_truth_exact, simulate_fake, simulate_truth, SimResult,
};
pub use scalar::Scalar;
pub use truth_model::{
    avg_payoff_defector, avg_payoff_volunteer, individual_payoff_regular, net_payoff_regular,
    truth_payoffs, PayoffPair, TruthGameParams,
};

pub type ProbabilityF64 = Probability<f64>;
pub type TruthGameParamsF64 = TruthGameParams<f64>;
pub type FakeGameParamsF64 = FakeGameParams<f64>;
pub type PayoffPairF64 = PayoffPair<f64>;
pub type EquilibriumF64 = Equilibrium<f64>;
pub type RegimeReportF64 = RegimeReport<f64>;
pub type CurveSampleF64 = CurveSample<f64>;
pub type ModelPointF64 = ModelPoint<f64>;
pub type SimResultF64 = SimResult<f64>;
pub type SolverOptionsF64 = SolverOptions<f64>;

pub type ProbabilityF32 = Probability<f32>;
pub type TruthGameParamsF32 = TruthGameParams<f32>;
pub type FakeGameParamsF32 = FakeGameParams<f32>;
pub type PayoffPairF32 = PayoffPair<f32>;
pub type RegimeReportF32 = RegimeReport<f32>;
pub type CurveSampleF32 = CurveSample<f32>;
pub type SolverOptionsF32 = SolverOptions<f32>;
