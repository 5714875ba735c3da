//! Binomial probability kernels and bracketed root finding on `[0, 1]`.
//!
//! Every payoff in the model is an expectation over a binomial count of
//! co-players, so everything downstream leans on [`log_binomial_pmf`] and
//! [`binomial_tail`]. Both work in log space: with 99 co-players at a
//! volunteering ratio near 0.09 the naive powers underflow long before the
//! coefficient overflows.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default number of grid samples used to bracket sign changes on `[0, 1]`.
pub const DEFAULT_GRID_POINTS: usize = 2048;
/// Default bracket width at which root refinement stops.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
/// Default finite-difference step for [`slope_at`].
pub const DEFAULT_SLOPE_STEP: f64 = 1e-6;

/// A probability in `[0, 1]`. NaN is rejected.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Probability<T>(T);

impl<T: Scalar> Probability<T> {
    pub fn new(value: T) -> Result<Self> {
        if value >= T::zero() && value <= T::one() {
            Ok(Self(value))
        } else {
            Err(Error::InvalidProbability(value.as_f64()))
        }
    }

    /// Clamps into `[0, 1]`; NaN maps to 0.
    pub fn clamped(value: T) -> Self {
        if value.is_nan() {
            Self(T::zero())
        } else {
            Self(value.max(T::zero()).min(T::one()))
        }
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn one() -> Self {
        Self(T::one())
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    pub fn complement(self) -> Self {
        Self(T::one() - self.0)
    }
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x ≥ 1`.
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    let z = x - T::one();
    let mut series = T::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series = series + T::lit(c) / (z + T::count(i as u64));
    }
    let t = z + T::lit(LANCZOS_G + 0.5);
    let half_ln_two_pi = T::lit(0.918_938_533_204_672_8);
    half_ln_two_pi + (z + T::lit(0.5)) * t.ln() - t + series.ln()
}

/// `ln C(n, m)`. Exact zero at the edges.
pub fn ln_choose<T: Scalar>(n: u64, m: u64) -> T {
    debug_assert!(m <= n);
    let j = m.min(n - m);
    if j == 0 {
        return T::zero();
    }
    if j <= 32 {
        // Short products are more accurate summed directly than as a
        // difference of three large log-gamma values.
        let base = n - j;
        (1..=j).fold(T::zero(), |acc, i| {
            acc + (T::count(base + i) / T::count(i)).ln()
        })
    } else {
        ln_gamma(T::count(n) + T::one())
            - ln_gamma(T::count(m) + T::one())
            - ln_gamma(T::count(n - m) + T::one())
    }
}

/// Natural log of `C(n, m) x^m (1-x)^(n-m)`.
///
/// Returns exactly `-inf` when the probability is exactly zero and exactly
/// `0` when it is exactly one; `0^0` is taken as 1.
pub fn log_binomial_pmf<T: Scalar>(n: u64, m: u64, x: Probability<T>) -> Result<T> {
    if m > n {
        return Err(Error::CountExceedsTrials { n, m });
    }
    Ok(log_pmf_unchecked(n, m, x.value()))
}

#[inline]
fn log_pmf_unchecked<T: Scalar>(n: u64, m: u64, x: T) -> T {
    let rest = n - m;
    if x == T::zero() {
        return if m == 0 { T::zero() } else { T::neg_infinity() };
    }
    if x == T::one() {
        return if rest == 0 {
            T::zero()
        } else {
            T::neg_infinity()
        };
    }
    let mut lp = ln_choose::<T>(n, m);
    if m > 0 {
        lp = lp + T::count(m) * x.ln();
    }
    if rest > 0 {
        lp = lp + T::count(rest) * (-x).ln_1p();
    }
    lp
}

/// `C(n, m) x^m (1-x)^(n-m)`.
pub fn binomial_pmf<T: Scalar>(n: u64, m: u64, x: Probability<T>) -> Result<T> {
    log_binomial_pmf(n, m, x).map(T::exp)
}

/// Mode of Binomial(n, x), clamped to `0..=n`.
fn binomial_mode<T: Scalar>(n: u64, x: T) -> u64 {
    let mode = ((T::count(n) + T::one()) * x).floor();
    mode.to_u64().unwrap_or(0).min(n)
}

/// Relative size below which a term moving away from the mode is dropped.
fn negligible<T: Scalar>() -> T {
    T::epsilon() * T::lit(1e-6)
}

/// `Σ_{m=lo}^{hi} g(m) · pmf(m)` for `M ~ Binomial(n, x)`, with `|g|`
/// bounded on the range.
///
/// Terms are accumulated outward from the mode (or the range end nearest
/// to it) and the walk stops once terms fall below a negligible fraction of
/// the mass seen so far, so large `n` stays cheap.
pub fn binomial_expectation<T, G>(n: u64, lo: u64, hi: u64, x: Probability<T>, g: G) -> T
where
    T: Scalar,
    G: Fn(u64) -> T,
{
    let hi = hi.min(n);
    if lo > hi {
        return T::zero();
    }
    let x = x.value();
    let start = binomial_mode(n, x).clamp(lo, hi);
    let tiny = negligible::<T>();

    let mut mass = T::zero();
    let mut total = T::zero();
    let mut m = start;
    loop {
        let p = log_pmf_unchecked(n, m, x).exp();
        mass = mass + p;
        total = total + p * g(m);
        if m == hi || (mass > T::zero() && p <= mass * tiny) {
            break;
        }
        m += 1;
    }
    let mut m = start;
    while m > lo {
        m -= 1;
        let p = log_pmf_unchecked(n, m, x).exp();
        mass = mass + p;
        total = total + p * g(m);
        if mass > T::zero() && p <= mass * tiny {
            break;
        }
    }
    total
}

/// `P[M ≥ lo]` for `M ~ Binomial(n, x)`.
///
/// `lo ≤ 0` gives 1 and `lo > n` gives 0. Whichever side of `lo` carries
/// less mass is summed directly; the other is its complement.
pub fn binomial_tail<T: Scalar>(n: u64, lo: i64, x: Probability<T>) -> Probability<T> {
    if lo <= 0 {
        return Probability::one();
    }
    let lo = lo as u64;
    if lo > n {
        return Probability::zero();
    }
    let mean = T::count(n) * x.value();
    if T::count(lo) > mean {
        Probability::clamped(binomial_expectation(n, lo, n, x, |_| T::one()))
    } else {
        let below = binomial_expectation(n, 0, lo - 1, x, |_| T::one());
        Probability::clamped(T::one() - below)
    }
}

/// An interval on which a function changes sign, or a single point where it
/// is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket<T> {
    lo: T,
    hi: T,
    f_lo: T,
    f_hi: T,
}

impl<T: Scalar> Bracket<T> {
    pub fn new(lo: T, hi: T, f_lo: T, f_hi: T) -> Result<Self> {
        if f_lo.is_nan() || f_hi.is_nan() {
            return Err(Error::InvalidBracket("NaN endpoint value".into()));
        }
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidBracket(format!(
                "lo {lo} is not below hi {hi}"
            )));
        }
        if f_lo.signum() == f_hi.signum() || f_lo == T::zero() || f_hi == T::zero() {
            return Err(Error::InvalidBracket(format!(
                "no strict sign change: f({lo}) = {f_lo}, f({hi}) = {f_hi}"
            )));
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    /// Zero-width bracket at an exact zero of the function.
    pub fn degenerate(x: T) -> Self {
        Self {
            lo: x,
            hi: x,
            f_lo: T::zero(),
            f_hi: T::zero(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn f_lo(&self) -> T {
        self.f_lo
    }

    pub fn f_hi(&self) -> T {
        self.f_hi
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Uniform grid of `points` samples over `[0, 1]`, endpoints exact.
pub fn unit_grid<T: Scalar>(points: usize) -> Vec<T> {
    let last = T::count(points.saturating_sub(1).max(1) as u64);
    (0..points).map(|i| T::count(i as u64) / last).collect()
}

/// Samples `f` on the unit grid; NaN is an error.
pub(crate) fn sample_unit<T, F>(f: &F, grid_points: usize) -> Result<Vec<(T, T)>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    if grid_points < 2 {
        return Err(Error::Precondition(format!(
            "grid needs at least 2 points, got {grid_points}"
        )));
    }
    unit_grid(grid_points)
        .into_iter()
        .map(|x| {
            let fx = f(x);
            if fx.is_nan() {
                Err(Error::NotFinite { x: x.as_f64() })
            } else {
                Ok((x, fx))
            }
        })
        .collect()
}

pub(crate) fn brackets_from_samples<T: Scalar>(samples: &[(T, T)]) -> Vec<Bracket<T>> {
    let mut out = Vec::new();
    for (i, &(x, fx)) in samples.iter().enumerate() {
        if fx == T::zero() {
            out.push(Bracket::degenerate(x));
            continue;
        }
        if let Some(&(xn, fxn)) = samples.get(i + 1) {
            if fxn != T::zero() && fx.signum() != fxn.signum() {
                out.push(Bracket {
                    lo: x,
                    hi: xn,
                    f_lo: fx,
                    f_hi: fxn,
                });
            }
        }
    }
    out
}

/// Every adjacent grid pair over `[0, 1]` across which `f` strictly changes
/// sign, in ascending order. Grid points where `f` is exactly zero come back
/// as degenerate brackets.
pub fn find_brackets<T, F>(f: F, grid_points: usize) -> Result<Vec<Bracket<T>>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let samples = sample_unit(&f, grid_points)?;
    Ok(brackets_from_samples(&samples))
}

/// Bisects `bracket` down to width `tol` and returns the final endpoint with
/// the smaller `|f|`.
pub fn refine_root<T, F>(f: F, bracket: &Bracket<T>, tol: T) -> Probability<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    if bracket.is_degenerate() {
        return Probability::clamped(bracket.lo);
    }
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (bracket.f_lo, bracket.f_hi);
    let two = T::lit(2.0);
    while b - a > tol {
        let mid = a + (b - a) / two;
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Probability::clamped(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    Probability::clamped(if fa.abs() <= fb.abs() { a } else { b })
}

/// Central difference `(f(x+h) - f(x-h)) / 2h`, one-sided within `h` of
/// either end of `[0, 1]`.
pub fn slope_at<T, F>(f: F, x: Probability<T>, h: T) -> T
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let x = x.value();
    if x - h < T::zero() {
        (f(x + h) - f(x)) / h
    } else if x + h > T::one() {
        (f(x) - f(x - h)) / h
    } else {
        (f(x + h) - f(x - h)) / (T::lit(2.0) * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> Probability<f64> {
        Probability::new(v).unwrap()
    }

    #[test]
    fn probability_rejects_out_of_range_and_nan() {
        assert!(Probability::new(-1e-12).is_err());
        assert!(Probability::new(1.0 + 1e-12).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert_eq!(Probability::new(1.0).unwrap().value(), 1.0);
    }

    #[test]
    fn pmf_edge_values() {
        assert_eq!(log_binomial_pmf(0, 0, p(0.3)).unwrap(), 0.0);
        assert!((log_binomial_pmf(2, 1, p(0.5)).unwrap() - 0.5f64.ln()).abs() < 1e-15);
        assert_eq!(log_binomial_pmf(5, 0, p(0.0)).unwrap(), 0.0);
        assert_eq!(log_binomial_pmf(5, 2, p(0.0)).unwrap(), f64::NEG_INFINITY);
        assert_eq!(log_binomial_pmf(5, 5, p(1.0)).unwrap(), 0.0);
        assert_eq!(log_binomial_pmf(5, 4, p(1.0)).unwrap(), f64::NEG_INFINITY);
        assert_eq!(
            log_binomial_pmf(3, 4, p(0.5)),
            Err(Error::CountExceedsTrials { n: 3, m: 4 })
        );
    }

    #[test]
    fn pmf_large_n_is_finite() {
        let lp = log_binomial_pmf(1_000_000, 500_000, p(0.5)).unwrap();
        // Normal approximation: ln(1 / sqrt(2π n/4)).
        let approx = -(0.5 * (2.0 * std::f64::consts::PI * 250_000.0).ln());
        assert!((lp - approx).abs() < 1e-5, "{lp} vs {approx}");
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut fact = 1.0f64;
        for n in 1..=20u64 {
            fact *= n as f64;
            let lg: f64 = ln_gamma((n + 1) as f64);
            assert!((lg - fact.ln()).abs() < 1e-12 * fact.ln().max(1.0), "n={n}");
        }
    }

    #[test]
    fn ln_choose_routes_agree() {
        // Crosses the cutoff between the two evaluation routes.
        for m in [30u64, 32, 33, 40] {
            let direct = (1..=m).fold(0.0f64, |a, i| a + ((100 - m + i) as f64 / i as f64).ln());
            let got: f64 = ln_choose(100, m);
            assert!((got - direct).abs() < 1e-12, "m={m}: {got} vs {direct}");
        }
    }

    #[test]
    fn tail_edge_values() {
        assert_eq!(binomial_tail(5, 0, p(0.7)).value(), 1.0);
        assert_eq!(binomial_tail(5, -3, p(0.7)).value(), 1.0);
        assert_eq!(binomial_tail(5, 6, p(0.7)).value(), 0.0);
        assert!((binomial_tail(2, 1, p(0.5)).value() - 0.75).abs() < 1e-15);
        assert_eq!(binomial_tail(10, 1, p(0.0)).value(), 0.0);
        assert_eq!(binomial_tail(10, 10, p(1.0)).value(), 1.0);
    }

    #[test]
    fn tail_small_side_keeps_precision() {
        // P[M ≥ 99] for Binomial(99, 0.09) is 0.09^99, far below f64 epsilon
        // relative to 1; summing the upper side must still resolve it.
        let t = binomial_tail(99, 99, p(0.09)).value();
        let exact = 0.09f64.powi(99);
        assert!(((t - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn expectation_with_constant_weight_is_mass() {
        let x = p(0.3);
        let total = binomial_expectation(50, 0, 50, x, |_| 1.0f64);
        assert!((total - 1.0).abs() < 1e-13);
        let mean = binomial_expectation(50, 0, 50, x, |m| m as f64);
        assert!((mean - 15.0).abs() < 1e-12);
    }

    #[test]
    fn brackets_linear_and_constant() {
        let b = find_brackets(|x: f64| x - 0.5, 11).unwrap();
        // 0.5 is a grid point: exact zero gives one degenerate bracket.
        assert_eq!(b.len(), 1);
        assert!(b[0].contains(0.5));

        let b = find_brackets(|x: f64| x - 0.55, 11).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].contains(0.55) && !b[0].is_degenerate());

        assert!(find_brackets(|_x: f64| 1.0, 64).unwrap().is_empty());
    }

    #[test]
    fn brackets_reject_nan_and_tiny_grid() {
        assert!(matches!(
            find_brackets(|x: f64| if x > 0.5 { f64::NAN } else { x }, 11),
            Err(Error::NotFinite { .. })
        ));
        assert!(find_brackets(|x: f64| x, 1).is_err());
    }

    #[test]
    fn bracket_validation() {
        assert!(Bracket::new(0.0, 1.0, -1.0, 1.0).is_ok());
        assert!(Bracket::new(1.0, 0.0, -1.0, 1.0).is_err());
        assert!(Bracket::new(0.0, 1.0, 1.0, 2.0).is_err());
        assert!(Bracket::new(0.0, 1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn refine_simple_roots() {
        let f = |x: f64| x - 0.25;
        let b = Bracket::new(0.0, 1.0, f(0.0), f(1.0)).unwrap();
        assert!((refine_root(f, &b, 1e-10).value() - 0.25).abs() <= 1e-10);

        let g = |x: f64| (x - 0.1) * (x - 0.9);
        let b = Bracket::new(0.0, 0.5, g(0.0), g(0.5)).unwrap();
        assert!((refine_root(g, &b, 1e-10).value() - 0.1).abs() <= 1e-10);
    }

    #[test]
    fn refine_works_in_f32() {
        let f = |x: f32| x - 0.3;
        let b = Bracket::new(0.0f32, 1.0, f(0.0), f(1.0)).unwrap();
        // Tolerance below f32 resolution must still terminate.
        let r = refine_root(f, &b, 1e-12).value();
        assert!((r - 0.3).abs() < 1e-6);
    }

    #[test]
    fn slope_interior_and_edges() {
        let s = slope_at(|x: f64| 3.0 * x, p(0.5), 1e-6);
        assert!((s - 3.0).abs() < 1e-6);
        assert_eq!(slope_at(|_x: f64| 2.0, p(0.3), 1e-6), 0.0);
        assert!((slope_at(|x: f64| 3.0 * x, p(0.0), 1e-6) - 3.0).abs() < 1e-6);
        assert!((slope_at(|x: f64| 3.0 * x, p(1.0), 1e-6) - 3.0).abs() < 1e-6);
    }
}
