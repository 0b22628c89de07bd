use crate::channel::{conditional_density_unchecked, CorrelationParams};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::{exp_e1, integrate_semi_infinite_bounded, QuadratureSpec};

use super::threshold::bracket_exact;

/// Parameters of one ergodic evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicConfig<T> {
    pub num_users: usize,
    pub power: T,
    pub corr: CorrelationParams<T>,
    pub threshold: T,
}

impl<T: Real> ErgodicConfig<T> {
    pub fn new(
        num_users: usize,
        power: T,
        corr: CorrelationParams<T>,
        threshold: T,
    ) -> Result<Self> {
        let cfg = Self {
            num_users,
            power,
            corr,
            threshold,
        };
        cfg.validate()?;
        Ok(cfg)
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
        check_threshold(self.threshold)
    }

    pub fn with_threshold(self, threshold: T) -> Self {
        Self { threshold, ..self }
    }
}

pub(crate) fn check_threshold<T: Real>(alpha: T) -> Result<()> {
    if alpha.is_finite() && alpha >= T::zero() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "threshold must be finite and >= 0, got {alpha}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicReport<T> {
    pub threshold: T,
    pub rate_nats: T,
    pub upper_nats: T,
    pub lower_nats: T,
    pub prob_transmit: T,
}

/// `(1 - e^{-alpha})^K`, the probability that no user reports `1`.
pub fn prob_none_above<T: Real>(alpha: T, k: usize) -> T {
    // 1 - e^{-alpha} via expm1 keeps small thresholds accurate
    let q = -(-alpha).exp_m1();
    (T::from_count(k) * q.ln()).exp()
}

/// `1 - (1 - e^{-alpha})^K`, the probability that the base station transmits.
pub fn prob_some_above<T: Real>(alpha: T, k: usize) -> T {
    let q = -(-alpha).exp_m1();
    -(T::from_count(k) * q.ln()).exp_m1()
}

/// `E[log(1 + P v²)]` for unit-mean exponential `v²`, i.e. `e^{1/P} E1(1/P)`.
pub fn no_csi_rate<T: Real>(power: T) -> T {
    exp_e1(power.recip())
}

/// Sum-rate with perfect, non-delayed CSI: `E[log(1 + P max_k v_k²)]`.
pub fn full_csi_rate<T: Real>(k: usize, power: T, q: &QuadratureSpec<T>) -> Result<T> {
    if k == 0 {
        return Err(Error::domain("need at least one user"));
    }
    if k == 1 {
        return Ok(no_csi_rate(power));
    }
    let kf = T::from_count(k);
    let km1 = T::from_count(k - 1);
    let density = move |x: T| kf * (km1 * (-(-x).exp_m1()).ln() - x).exp();
    let f = |x: T| {
        if x <= T::zero() {
            T::zero()
        } else {
            (power * x).ln_1p() * density(x)
        }
    };
    // density <= K e^{-x}; ∫_x^∞ log(1+Pt) e^{-t} dt <= e^{-x}(log(1+Px) + 1/x)
    let tail = |x: T| kf * (-x).exp() * ((power * x).ln_1p() + x.recip());
    integrate_semi_infinite_bounded(f, T::zero(), &[kf.ln()], tail, q)
}

/// Closed-form ergodic sum-rate with (possibly outdated) 1-bit feedback, nats.
///
/// Nearly degenerate correlation uses `log(1 + alpha P) + e^{alpha + 1/P} E1(alpha + 1/P)`;
/// `rho = 0` uses the unconditional rate; otherwise the conditional density
/// of the delayed envelope is integrated.
pub fn sum_rate<T: Real>(cfg: &ErgodicConfig<T>, q: &QuadratureSpec<T>) -> Result<T> {
    cfg.validate()?;
    let pn = prob_some_above(cfg.threshold, cfg.num_users);
    Ok(pn * conditional_rate(cfg.power, cfg.threshold, cfg.corr, q)?)
}

/// `E[log(1 + P v_tau²) | v² >= alpha]`.
pub(crate) fn conditional_rate<T: Real>(
    p: T,
    alpha: T,
    c: CorrelationParams<T>,
    q: &QuadratureSpec<T>,
) -> Result<T> {
    if c.is_degenerate() {
        return Ok((alpha * p).ln_1p() + exp_e1(alpha + p.recip()));
    }
    if c.is_independent() || alpha == T::zero() {
        return Ok(no_csi_rate(p));
    }
    let f = |z: T| (z * z * p).ln_1p() * conditional_density_unchecked(z, alpha, c);
    // conditional density <= e^{alpha} 2z e^{-z²}
    let tail = |z: T| {
        let z2 = z * z;
        (alpha - z2).exp() * ((p * z2).ln_1p() + z2.recip())
    };
    let root = alpha.sqrt();
    let rho = c.abs_rho();
    let breaks = [rho * root, root, root / rho];
    integrate_semi_infinite_bounded(f, T::zero(), &breaks, tail, q)
}

/// Jensen upper bound `Pr(N>0) log(1 + P(1 + rho² alpha))`.
pub fn sum_rate_upper<T: Real>(cfg: &ErgodicConfig<T>) -> Result<T> {
    cfg.validate()?;
    let rho = cfg.corr.abs_rho();
    let mean = T::one() + rho * rho * cfg.threshold;
    Ok(prob_some_above(cfg.threshold, cfg.num_users) * (cfg.power * mean).ln_1p())
}

/// Lower bound `Pr(N>0) log(1 + alpha P) Pr(v_tau² >= alpha | v² >= alpha)`.
pub fn sum_rate_lower<T: Real>(cfg: &ErgodicConfig<T>) -> Result<T> {
    cfg.validate()?;
    let pn = prob_some_above(cfg.threshold, cfg.num_users);
    Ok(pn * (cfg.threshold * cfg.power).ln_1p() * bracket_exact(cfg.threshold, cfg.corr)?)
}

pub fn ergodic_report<T: Real>(
    cfg: &ErgodicConfig<T>,
    q: &QuadratureSpec<T>,
) -> Result<ErgodicReport<T>> {
    Ok(ErgodicReport {
        threshold: cfg.threshold,
        rate_nats: sum_rate(cfg, q)?,
        upper_nats: sum_rate_upper(cfg)?,
        lower_nats: sum_rate_lower(cfg)?,
        prob_transmit: prob_some_above(cfg.threshold, cfg.num_users),
    })
}
