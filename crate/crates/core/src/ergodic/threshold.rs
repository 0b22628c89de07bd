use rayon::prelude::*;

use crate::channel::CorrelationParams;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::{marcum_q1_asymptotic_exp, q1, MarcumArgs, QuadratureSpec};

use super::rate::{check_threshold, sum_rate, ErgodicConfig};

const GRID_STEP: f64 = 0.05;
const GRID_MARGIN: f64 = 6.0;
const REFINE_WIDTH: f64 = 1e-4;

/// How the feedback threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdPolicy<T> {
    Fixed(T),
    /// `alpha = log K - delta`.
    Suboptimal(T),
    /// Numerical maximizer of the ergodic sum-rate.
    Optimal,
}

impl<T: Real> ThresholdPolicy<T> {
    pub fn resolve(
        &self,
        k: usize,
        power: T,
        c: CorrelationParams<T>,
        q: &QuadratureSpec<T>,
    ) -> Result<T> {
        match *self {
            Self::Fixed(alpha) => check_threshold(alpha).map(|_| alpha),
            Self::Suboptimal(delta) => suboptimal_threshold(k, delta),
            Self::Optimal => optimal_threshold(k, power, c, q),
        }
    }
}

/// `log K - delta`, for `0 < delta < log K`.
pub fn suboptimal_threshold<T: Real>(k: usize, delta: T) -> Result<T> {
    let log_k = T::from_count(k).ln();
    if !(delta > T::zero() && delta < log_k) {
        return Err(Error::domain(format!(
            "offset must lie in (0, log K = {log_k}), got {delta}"
        )));
    }
    Ok(log_k - delta)
}

/// Threshold maximizing [`sum_rate`] over `[0, log K + 6]`.
///
/// A 0.05-step grid is scanned first, then the best cell is refined by
/// ternary search down to width 1e-4. Ties go to the smallest threshold.
pub fn optimal_threshold<T: Real>(
    k: usize,
    power: T,
    c: CorrelationParams<T>,
    q: &QuadratureSpec<T>,
) -> Result<T> {
    let base = ErgodicConfig::new(k, power, c, T::zero())?;
    let rate = |alpha: T| sum_rate(&base.with_threshold(alpha), q);

    let step = T::lit(GRID_STEP);
    let hi = T::from_count(k).ln() + T::lit(GRID_MARGIN);
    let n = (hi / step).floor().to_usize().unwrap_or(0) + 1;
    let values = (0..n)
        .into_par_iter()
        .map(|i| rate(T::from_count(i) * step))
        .collect::<Result<Vec<T>>>()?;
    let (mut best_i, mut best) = (0, values[0]);
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > best {
            best_i = i;
            best = v;
        }
    }

    let mut lo = T::from_count(best_i.saturating_sub(1)) * step;
    let mut up = (T::from_count(best_i + 1) * step).min(hi);
    let third = T::lit(1.0 / 3.0);
    while up - lo > T::lit(REFINE_WIDTH) {
        let m1 = lo + (up - lo) * third;
        let m2 = up - (up - lo) * third;
        if rate(m1)? >= rate(m2)? {
            up = m2;
        } else {
            lo = m1;
        }
    }
    let mid = (lo + up) * T::lit(0.5);
    let grid_alpha = T::from_count(best_i) * step;
    Ok(if rate(mid)? > best { mid } else { grid_alpha })
}

/// Predicted large-K rate loss from feedback delay, `2 log |rho|` (nats, <= 0).
pub fn degradation_estimate<T: Real>(c: CorrelationParams<T>) -> Result<T> {
    if c.is_independent() {
        return Err(Error::domain("no finite degradation prediction at rho = 0"));
    }
    Ok(T::lit(2.0) * c.abs_rho().ln())
}

/// `R(alpha_o(K), rho, P, K) / log log K`; requires `K >= 16`.
pub fn scaling_ratio<T: Real>(
    k: usize,
    power: T,
    c: CorrelationParams<T>,
    q: &QuadratureSpec<T>,
) -> Result<T> {
    if k < 16 {
        return Err(Error::domain(format!(
            "scaling ratio needs K >= 16, got {k}"
        )));
    }
    let alpha = optimal_threshold(k, power, c, q)?;
    let r = sum_rate(&ErgodicConfig::new(k, power, c, alpha)?, q)?;
    Ok(r / T::from_count(k).ln().ln())
}

fn normalized_threshold<T: Real>(alpha: T, c: CorrelationParams<T>) -> T {
    (T::lit(2.0) * alpha / c.innovation()).sqrt()
}

/// `1 + Q1(|rho| c, c) - Q1(c, |rho| c)` with `c = sqrt(2 alpha / (1 - rho²))`.
///
/// This is `Pr(v_tau² >= alpha | v² >= alpha)`: the chance that a user who
/// reported `1` is still above the threshold at transmission time.
pub fn bracket_exact<T: Real>(alpha: T, c: CorrelationParams<T>) -> Result<T> {
    check_threshold(alpha)?;
    if c.is_degenerate() {
        return Ok(T::one());
    }
    let b = normalized_threshold(alpha, c);
    let a = c.abs_rho() * b;
    let v = T::one() + q1(a, b) - q1(b, a);
    Ok(v.max(T::zero()).min(T::one()))
}

/// The bracket of [`bracket_exact`] with both Marcum-Q terms replaced by the
/// large-argument form `(2 pi A B)^{-1/2} exp(-(B - A)²/2)`.
///
/// That form is symmetric in its arguments, so the two corrections cancel.
/// It is not a good approximation of the exact bracket, which decays to zero
/// for `|rho| < 1`.
pub fn bracket_asymptotic<T: Real>(alpha: T, c: CorrelationParams<T>) -> Result<T> {
    check_threshold(alpha)?;
    if c.is_degenerate() {
        return Ok(T::one());
    }
    if c.is_independent() || alpha == T::zero() {
        return Err(Error::domain(
            "asymptotic bracket needs rho != 0 and alpha > 0",
        ));
    }
    let b = normalized_threshold(alpha, c);
    let a = c.abs_rho() * b;
    let up = marcum_q1_asymptotic_exp(MarcumArgs::new(a, b)?)?;
    let down = marcum_q1_asymptotic_exp(MarcumArgs::new(b, a)?)?;
    Ok(T::one() + up - down)
}
