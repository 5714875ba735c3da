//! Independent checks of the analytic payoffs: a seeded Monte Carlo
//! simulator and brute-force enumeration of co-player profiles.
//!
//! Neither route touches the binomial kernels in [`crate::numerics`]; both
//! work from the individual payoff rules directly.
//!
//! # Reproducibility
//!
//! Random draws come from ChaCha8 (`rand_chacha`). Trials are cut into
//! fixed blocks of [`BLOCK_TRIALS`]; block `b` uses a generator seeded with
//! `seed_from_u64(seed)` and switched to stream `b`. Each Bernoulli(p) draw
//! is `next_u64() < floor(p · 2^64)` (`rand::distr::Bernoulli`). Each block
//! yields an integer histogram of outcomes, and histograms merge by
//! addition, so the result does not depend on how blocks are scheduled
//! across threads.

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fake_model::{fake_payoff, FakeGameParams};
use crate::numerics::Probability;
use crate::scalar::Scalar;
use crate::truth_model::{individual_payoff_regular, PayoffPair, TruthGameParams};

/// Trials per independently seeded block.
pub const BLOCK_TRIALS: u64 = 1 << 16;

/// Largest population accepted by the exact enumerators.
pub const ENUMERATION_LIMIT: u32 = 16;

/// Monte Carlo estimate of volunteer and defector payoffs.
///
/// Both estimates are computed on the same draws, so `net_se` is normally
/// well below `sqrt(volunteer_se² + defector_se²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult<T> {
    pub volunteer_avg_hat: T,
    pub defector_avg_hat: T,
    pub net_avg_hat: T,
    pub volunteer_se: T,
    pub defector_se: T,
    pub net_se: T,
    pub trials: u64,
    pub seed: u64,
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn bernoulli<T: Scalar>(p: Probability<T>) -> Bernoulli {
    Bernoulli::new(p.value().as_f64().clamp(0.0, 1.0)).expect("probability in [0, 1]")
}

fn count_successes(rng: &mut ChaCha8Rng, dist: &Bernoulli, n: u64) -> usize {
    (0..n).filter(|_| dist.sample(rng)).count()
}

/// Runs `trials` draws in fixed blocks and merges per-block histograms of
/// `bins` outcome classes.
fn histogram<D>(trials: u64, seed: u64, bins: usize, draw: D) -> Vec<u64>
where
    D: Fn(&mut ChaCha8Rng) -> usize + Sync,
{
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let len = BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
            let mut h = vec![0u64; bins];
            for _ in 0..len {
                h[draw(&mut rng)] += 1;
            }
            h
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Sample mean and standard error of a histogram over known values.
/// A single occupied class gives that value exactly and SE = 0.
fn moments<T: Scalar>(counts: &[u64], values: &[T], trials: u64) -> (T, T) {
    let Some(first) = counts.iter().position(|&c| c > 0) else {
        return (T::nan(), T::nan());
    };
    let n = T::count(trials);
    let anchor = values[first];
    let shift = counts
        .iter()
        .zip(values)
        .filter(|(&c, _)| c > 0)
        .fold(T::zero(), |acc, (&c, &v)| acc + T::count(c) * (v - anchor));
    let mean = anchor + shift / n;
    if trials < 2 {
        return (mean, T::zero());
    }
    let ss = counts
        .iter()
        .zip(values)
        .filter(|(&c, _)| c > 0)
        .fold(T::zero(), |acc, (&c, &v)| {
            acc + T::count(c) * (v - mean) * (v - mean)
        });
    let var = ss / T::count(trials - 1);
    (mean, (var / n).sqrt())
}

fn summarize<T: Scalar>(
    counts: &[u64],
    vol: &[T],
    def: &[T],
    trials: u64,
    seed: u64,
) -> SimResult<T> {
    let net: Vec<T> = vol.iter().zip(def).map(|(&v, &d)| v - d).collect();
    let (va, vse) = moments(counts, vol, trials);
    let (da, dse) = moments(counts, def, trials);
    let (na, nse) = moments(counts, &net, trials);
    SimResult {
        volunteer_avg_hat: va,
        defector_avg_hat: da,
        net_avg_hat: na,
        volunteer_se: vse,
        defector_se: dse,
        net_se: nse,
        trials,
        seed,
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        Err(Error::Precondition("trials must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Focal volunteer and defector payoffs, including the reward share and the
/// fee, when `others` of the `N - 1` co-players volunteer.
fn truth_outcome<T: Scalar>(others: u32, params: &TruthGameParams<T>) -> (T, T) {
    let sigma = params.shared_reward;
    let fee = sigma / T::count(u64::from(params.n_regular));
    let total = others + 1;
    let mut vol = individual_payoff_regular(total, true, params).expect("valid volunteer count");
    if total >= params.threshold {
        vol = vol + sigma / T::count(u64::from(total)) - fee;
    }
    let mut def = individual_payoff_regular(others, false, params).expect("valid defector count");
    if others >= params.threshold {
        def = def - fee;
    }
    (vol, def)
}

/// Monte Carlo estimate of the regular agents' average payoffs at ratio `x`.
pub fn simulate_truth<T: Scalar>(
    params: &TruthGameParams<T>,
    x: Probability<T>,
    trials: u64,
    seed: u64,
) -> Result<SimResult<T>> {
    check_trials(trials)?;
    params.validate(true)?;
    let co = u64::from(params.n_regular) - 1;
    let dist = bernoulli(x);
    let counts = histogram(trials, seed, co as usize + 1, |rng| {
        count_successes(rng, &dist, co)
    });
    let (vol, def): (Vec<T>, Vec<T>) = (0..=co as u32).map(|v| truth_outcome(v, params)).unzip();
    Ok(summarize(&counts, &vol, &def, trials, seed))
}

/// Monte Carlo estimate of the fake agents' expected payoffs with regular
/// volunteers `M ~ Binomial(n_regular, p_star)` (no truncation of `M`).
pub fn simulate_fake<T: Scalar>(
    p_star: Probability<T>,
    n_regular: u32,
    fparams: &FakeGameParams<T>,
    x_f: Probability<T>,
    trials: u64,
    seed: u64,
) -> Result<SimResult<T>> {
    check_trials(trials)?;
    fparams.validate(true)?;
    let f = u64::from(fparams.n_fake);
    let co = f - 1;
    // Regular counts above F all lose to the fake side; one bucket holds them.
    let m_buckets = f as usize + 2;
    let k_buckets = co as usize + 1;
    let regular = bernoulli(p_star);
    let fake = bernoulli(x_f);
    let counts = histogram(trials, seed, m_buckets * k_buckets, |rng| {
        let m = count_successes(rng, &regular, u64::from(n_regular)).min(m_buckets - 1);
        let k = count_successes(rng, &fake, co);
        m * k_buckets + k
    });
    let mut vol = Vec::with_capacity(counts.len());
    let mut def = Vec::with_capacity(counts.len());
    for m in 0..m_buckets as u64 {
        for k in 0..k_buckets as u64 {
            vol.push(fake_payoff(k + 1, m, true, fparams));
            def.push(fake_payoff(k, m, false, fparams));
        }
    }
    Ok(summarize(&counts, &vol, &def, trials, seed))
}

fn profile_weight<T: Scalar>(x: T, on: u32, off: u32) -> T {
    x.powi(on as i32) * (T::one() - x).powi(off as i32)
}

/// Exact average payoffs by summing over all `2^(N-1)` co-player profiles.
pub fn enumerate_truth_exact<T: Scalar>(
    params: &TruthGameParams<T>,
    x: Probability<T>,
) -> Result<PayoffPair<T>> {
    if params.n_regular > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            size: params.n_regular,
            limit: ENUMERATION_LIMIT,
        });
    }
    params.validate(true)?;
    let co = params.n_regular - 1;
    let (mut vol, mut def) = (T::zero(), T::zero());
    for profile in 0u32..(1 << co) {
        let on = profile.count_ones();
        let w = profile_weight(x.value(), on, co - on);
        let (v, d) = truth_outcome(on, params);
        vol = vol + w * v;
        def = def + w * d;
    }
    Ok(PayoffPair::new(vol, def))
}

/// Exact fake-agent average payoffs against `regular_volunteers` by summing
/// over all `2^(F-1)` fake co-player profiles.
pub fn enumerate_fake_exact<T: Scalar>(
    fparams: &FakeGameParams<T>,
    regular_volunteers: u64,
    x_f: Probability<T>,
) -> Result<PayoffPair<T>> {
    if fparams.n_fake > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            size: fparams.n_fake,
            limit: ENUMERATION_LIMIT,
        });
    }
    fparams.validate(true)?;
    let co = fparams.n_fake - 1;
    let (mut vol, mut def) = (T::zero(), T::zero());
    for profile in 0u32..(1 << co) {
        let on = profile.count_ones();
        let w = profile_weight(x_f.value(), on, co - on);
        let on = u64::from(on);
        vol = vol + w * fake_payoff(on + 1, regular_volunteers, true, fparams);
        def = def + w * fake_payoff(on, regular_volunteers, false, fparams);
    }
    Ok(PayoffPair::new(vol, def))
}
