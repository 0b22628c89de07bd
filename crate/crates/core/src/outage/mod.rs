//! Outage probability of the threshold-feedback scheduler at a fixed rate.
//!
//! A block is in outage when `log(1 + v_tau² P_tx) < R`. The transmit power
//! depends on the feedback: `P1` when some user reported `1`, `P0` when the
//! base station had to pick a user blindly.

mod dmt;
mod instant;
mod outdated;

pub use dmt::{dmt_analytic, dmt_empirical_slope, DmtCurve, DmtPoint, DmtScheme};
pub use instant::{
    average_power, eps0_instant, eps1_instant, outage_instant, outage_longterm_closed,
    power_split_longterm, zero_outage_threshold,
};
pub use outdated::{
    eps0_outdated, eps1_outdated, marcum_gap, marcum_gap_bounds, outage_outdated, OutdatedTerms,
};

use crate::channel::CorrelationParams;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Power allocation across "some user above threshold" and "nobody above" blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerMode<T> {
    /// `P1 = P0 = P`.
    ShortTerm,
    /// `P1 = P/2`, `P0 = P / (2 Pr(N = 0))`: meets the budget on average.
    LongTermTwoLevel,
    Explicit {
        p1: T,
        p0: T,
    },
}

impl<T: Real> PowerMode<T> {
    pub fn explicit(p1: T, p0: T) -> Result<Self> {
        let ok = |x: T| x.is_finite() && x >= T::zero();
        if !ok(p1) || !ok(p0) {
            return Err(Error::domain(
                "explicit powers must be finite and nonnegative",
            ));
        }
        Ok(Self::Explicit { p1, p0 })
    }

    /// `(P1, P0)` for budget `power`, threshold `alpha` and `k` users.
    pub fn resolve(&self, power: T, alpha: T, k: usize) -> Result<(T, T)> {
        match *self {
            Self::ShortTerm => Ok((power, power)),
            Self::LongTermTwoLevel => power_split_longterm(power, alpha, k),
            Self::Explicit { p1, p0 } => Ok((p1, p0)),
        }
    }

    /// Smallest threshold that makes `P1` blocks outage-free at rate `r`:
    /// `(e^R - 1) / P1`. For the two-level split this is `2(e^R - 1)/P`.
    pub fn default_threshold(&self, power: T, r: T) -> Result<T> {
        let p1 = match *self {
            Self::ShortTerm => power,
            Self::LongTermTwoLevel => power * T::lit(0.5),
            Self::Explicit { p1, .. } => p1,
        };
        if !(p1 > T::zero()) {
            return Err(Error::domain("no default threshold when P1 = 0"));
        }
        Ok(r.exp_m1() / p1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageConfig<T> {
    pub num_users: usize,
    /// Long-term power budget.
    pub power: T,
    pub corr: CorrelationParams<T>,
    pub rate_nats: T,
    pub threshold: T,
    pub mode: PowerMode<T>,
}

impl<T: Real> OutageConfig<T> {
    pub fn new(
        num_users: usize,
        power: T,
        corr: CorrelationParams<T>,
        rate_nats: T,
        threshold: T,
        mode: PowerMode<T>,
    ) -> Result<Self> {
        let cfg = Self {
            num_users,
            power,
            corr,
            rate_nats,
            threshold,
            mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Config whose threshold is [`PowerMode::default_threshold`].
    pub fn with_default_threshold(
        num_users: usize,
        power: T,
        corr: CorrelationParams<T>,
        rate_nats: T,
        mode: PowerMode<T>,
    ) -> Result<Self> {
        let alpha = mode.default_threshold(power, rate_nats)?;
        Self::new(num_users, power, corr, rate_nats, alpha, mode)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_users == 0 {
            return Err(Error::domain("need at least one user"));
        }
        if !(self.power.is_finite() && self.power > T::zero()) {
            return Err(Error::domain(format!(
                "power must be finite and positive, got {}",
                self.power
            )));
        }
        if !(self.rate_nats.is_finite() && self.rate_nats > T::zero()) {
            return Err(Error::domain(format!(
                "rate must be finite and positive, got {}",
                self.rate_nats
            )));
        }
        if !(self.threshold.is_finite() && self.threshold >= T::zero()) {
            return Err(Error::domain(format!(
                "threshold must be finite and >= 0, got {}",
                self.threshold
            )));
        }
        Ok(())
    }

    pub fn powers(&self) -> Result<(T, T)> {
        self.mode
            .resolve(self.power, self.threshold, self.num_users)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageReport<T> {
    pub eps: T,
    /// Outage given some user reported `1`.
    pub eps1: T,
    /// Outage given every user reported `0`.
    pub eps0: T,
    pub p1: T,
    pub p0: T,
}
