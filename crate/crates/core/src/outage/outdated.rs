use crate::channel::CorrelationParams;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::q1;

use super::instant::{assemble, eps0_instant, eps1_instant, outage_instant};
use super::{OutageConfig, OutageReport};

/// `mu = 2(e^R - 1)/(1 - rho²)` and `nu = 2 alpha/(1 - rho²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutdatedTerms<T> {
    pub mu: T,
    pub nu: T,
}

impl<T: Real> OutdatedTerms<T> {
    pub fn new(r: T, alpha: T, c: CorrelationParams<T>) -> Result<Self> {
        if c.is_degenerate() {
            return Err(Error::DegenerateCorrelation);
        }
        let s = c.innovation();
        Ok(Self {
            mu: T::lit(2.0) * r.exp_m1() / s,
            nu: T::lit(2.0) * alpha / s,
        })
    }
}

/// `Pr(v_tau² < (e^R - 1)/P | v² >= alpha)` without clamping.
fn below_given_above<T: Real>(r: T, p: T, alpha: T, c: CorrelationParams<T>) -> Result<T> {
    let t = OutdatedTerms::new(r, alpha, c)?;
    let rho = c.abs_rho();
    let a = (t.mu / p).sqrt();
    let b = t.nu.sqrt();
    Ok(q1(a, rho * b) - (alpha - r.exp_m1() / p).exp() * q1(rho * a, b))
}

/// Outage given some user reported `1`, feedback correlated by `rho` with
/// the transmission-time channel.
pub fn eps1_outdated<T: Real>(r: T, p1: T, alpha: T, c: CorrelationParams<T>) -> Result<T> {
    if c.is_degenerate() {
        return eps1_instant(r, p1, alpha);
    }
    if !(r > T::zero()) || !(alpha >= T::zero()) || p1 < T::zero() {
        return Err(Error::domain("need R > 0, alpha >= 0, P1 >= 0"));
    }
    if p1 == T::zero() {
        return Ok(T::one());
    }
    if c.is_independent() {
        return Ok(-(-r.exp_m1() / p1).exp_m1());
    }
    Ok(below_given_above(r, p1, alpha, c)?
        .max(T::zero())
        .min(T::one()))
}

/// Outage given every user reported `0`, using
/// `Pr(A | v² < alpha) = (Pr(A) - e^{-alpha} Pr(A | v² >= alpha)) / (1 - e^{-alpha})`.
pub fn eps0_outdated<T: Real>(r: T, p0: T, alpha: T, c: CorrelationParams<T>) -> Result<T> {
    if c.is_degenerate() {
        return eps0_instant(r, p0, alpha);
    }
    if !(r > T::zero()) || !(alpha > T::zero()) || p0 < T::zero() {
        return Err(Error::domain("need R > 0, alpha > 0, P0 >= 0"));
    }
    if p0 == T::zero() {
        return Ok(T::one());
    }
    let uncond = -(-r.exp_m1() / p0).exp_m1();
    if c.is_independent() {
        return Ok(uncond);
    }
    let above = below_given_above(r, p0, alpha, c)?;
    let v = (uncond - (-alpha).exp() * above) / -(-alpha).exp_m1();
    Ok(v.max(T::zero()).min(T::one()))
}

/// Total outage with outdated feedback. Degenerate correlation uses
/// [`outage_instant`].
pub fn outage_outdated<T: Real>(cfg: &OutageConfig<T>) -> Result<OutageReport<T>> {
    if cfg.corr.is_degenerate() {
        return outage_instant(cfg);
    }
    cfg.validate()?;
    let (p1, p0) = cfg.powers()?;
    let (r, alpha, c) = (cfg.rate_nats, cfg.threshold, cfg.corr);
    assemble(
        cfg,
        p1,
        p0,
        || eps1_outdated(r, p1, alpha, c),
        || eps0_outdated(r, p0, alpha, c),
    )
}

/// `Q1(a, |rho| a) - Q1(|rho| a, a)`, the term that sets the high-SNR slope
/// of the outdated outage when the threshold tracks the rate.
pub fn marcum_gap<T: Real>(a: T, c: CorrelationParams<T>) -> T {
    let rho = c.abs_rho();
    q1(a, rho * a) - q1(rho * a, a)
}

/// Interval containing [`marcum_gap`] from the elementary Marcum-Q bounds:
/// `exp(-(B+A)²/2) <= Q1(A, B) <= exp(-(B-A)²/2)` for `A < B`, and
/// `Q1(A, B) >= 1 - (exp(-(B-A)²/2) - exp(-(B+A)²/2))/2` for `B < A`.
pub fn marcum_gap_bounds<T: Real>(a: T, c: CorrelationParams<T>) -> (T, T) {
    let rho = c.abs_rho();
    let half = T::lit(0.5);
    let minus = (-(T::one() - rho).powi(2) * a * a * half).exp();
    let plus = (-(T::one() + rho).powi(2) * a * a * half).exp();
    (T::one() - (minus - plus) * half - minus, T::one() - plus)
}
