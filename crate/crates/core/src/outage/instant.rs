use crate::ergodic::{prob_none_above, prob_some_above};
use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{OutageConfig, OutageReport};

fn check_rate<T: Real>(r: T) -> Result<()> {
    if r.is_finite() && r > T::zero() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "rate must be finite and positive, got {r}"
        )))
    }
}

/// Outage given some user reported `1`, instantaneous feedback:
/// zero while `R <= log(1 + P1 alpha)`, else `1 - exp(alpha - (e^R - 1)/P1)`.
pub fn eps1_instant<T: Real>(r: T, p1: T, alpha: T) -> Result<T> {
    check_rate(r)?;
    if !(alpha >= T::zero()) || p1 < T::zero() {
        return Err(Error::domain("threshold and power must be nonnegative"));
    }
    if p1 == T::zero() {
        return Ok(T::one());
    }
    if r <= (p1 * alpha).ln_1p() {
        return Ok(T::zero());
    }
    Ok(-(alpha - r.exp_m1() / p1).exp_m1())
}

/// Outage given every user reported `0`, instantaneous feedback:
/// `(1 - exp(-(e^R - 1)/P0)) / (1 - e^{-alpha})` while `R <= log(1 + P0 alpha)`, else 1.
pub fn eps0_instant<T: Real>(r: T, p0: T, alpha: T) -> Result<T> {
    check_rate(r)?;
    if !(alpha > T::zero()) {
        return Err(Error::domain("conditioning on v² < alpha needs alpha > 0"));
    }
    if p0 < T::zero() {
        return Err(Error::domain("power must be nonnegative"));
    }
    if p0 == T::zero() || r > (p0 * alpha).ln_1p() {
        return Ok(T::one());
    }
    let v = (-r.exp_m1() / p0).exp_m1() / (-alpha).exp_m1();
    Ok(v.min(T::one()))
}

/// Combine conditional outages with the feedback-outcome probabilities.
/// When no block can have `N = 0` the `eps0` slot is reported as 1.
pub(super) fn assemble<T: Real>(
    cfg: &OutageConfig<T>,
    p1: T,
    p0: T,
    eps1: impl FnOnce() -> Result<T>,
    eps0: impl FnOnce() -> Result<T>,
) -> Result<OutageReport<T>> {
    let some = prob_some_above(cfg.threshold, cfg.num_users);
    let none = prob_none_above(cfg.threshold, cfg.num_users);
    let e1 = if some > T::zero() { eps1()? } else { T::one() };
    let e0 = if none > T::zero() { eps0()? } else { T::one() };
    Ok(OutageReport {
        eps: e1 * some + e0 * none,
        eps1: e1,
        eps0: e0,
        p1,
        p0,
    })
}

/// Total outage with instantaneous feedback (`rho` is ignored).
pub fn outage_instant<T: Real>(cfg: &OutageConfig<T>) -> Result<OutageReport<T>> {
    cfg.validate()?;
    let (p1, p0) = cfg.powers()?;
    let (r, alpha) = (cfg.rate_nats, cfg.threshold);
    assemble(
        cfg,
        p1,
        p0,
        || eps1_instant(r, p1, alpha),
        || eps0_instant(r, p0, alpha),
    )
}

/// `2(e^R - 1)/P`: with `P1 = P/2`, the threshold at which `log(1 + P1 alpha) = R`.
pub fn zero_outage_threshold<T: Real>(power: T, r: T) -> Result<T> {
    if !(power > T::zero()) || !(r > T::zero()) {
        return Err(Error::domain("power and rate must be positive"));
    }
    Ok(T::lit(2.0) * r.exp_m1() / power)
}

/// Two-level split `(P/2, P / (2 (1 - e^{-alpha})^K))`.
pub fn power_split_longterm<T: Real>(power: T, alpha: T, k: usize) -> Result<(T, T)> {
    if !(power > T::zero()) || k == 0 {
        return Err(Error::domain("power must be positive and K >= 1"));
    }
    if !(alpha > T::zero()) {
        return Err(Error::domain(
            "long-term split needs alpha > 0, otherwise P0 is unbounded",
        ));
    }
    let half = power * T::lit(0.5);
    Ok((half, half / prob_none_above(alpha, k)))
}

/// Average transmit power `Pr(N>0) P1 + Pr(N=0) P0`.
pub fn average_power<T: Real>(p1: T, p0: T, alpha: T, k: usize) -> T {
    prob_some_above(alpha, k) * p1 + prob_none_above(alpha, k) * p0
}

/// Outage under the long-term split with the zero-outage threshold:
/// `(1 - e^{-x})^{K-1} (1 - exp(-x (1 - e^{-x})^K))`, `x = 2(e^R - 1)/P`.
pub fn outage_longterm_closed<T: Real>(power: T, k: usize, r: T) -> Result<T> {
    if k == 0 {
        return Err(Error::domain("need at least one user"));
    }
    let x = zero_outage_threshold(power, r)?;
    let q = -(-x).exp_m1();
    let km1 = T::from_count(k - 1);
    Ok(q.powf(km1) * -(-x * q.powf(km1 + T::one())).exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::CorrelationParams;
    use crate::outage::PowerMode;

    fn cfg(k: usize, p: f64, r: f64, alpha: f64, mode: PowerMode<f64>) -> OutageConfig<f64> {
        OutageConfig::new(k, p, CorrelationParams::instantaneous(), r, alpha, mode).unwrap()
    }

    #[test]
    fn eps1_examples() {
        let (p1, alpha) = (10.0, 0.3);
        let r = (1.0f64 + p1 * alpha).ln();
        assert_eq!(eps1_instant(r, p1, alpha).unwrap(), 0.0);
        // just above the boundary the formula starts from zero
        assert!(eps1_instant(r * (1.0 + 1e-12), p1, alpha).unwrap() < 1e-10);
        assert!(
            (eps1_instant(2f64.ln(), 1.0, 0.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15
        );
        let want = 1.0 - (0.05 - (2f64.exp() - 1.0) / 50.0).exp();
        assert!((eps1_instant(2.0, 50.0, 0.05).unwrap() - want).abs() < 1e-15);
        assert_eq!(eps1_instant(1.0, 0.0, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn eps0_examples() {
        assert_eq!(eps0_instant(1.0, 0.0, 0.5).unwrap(), 1.0);
        assert!(eps0_instant(1.0, 10.0, 0.0).is_err());
        let (p0, alpha) = (4.0f64, 0.7);
        let r = (1.0 + p0 * alpha).ln();
        assert!((eps0_instant(r, p0, alpha).unwrap() - 1.0).abs() < 1e-12);
        let want = (1.0 - (-(1f64.exp() - 1.0) / 100.0).exp()) / (1.0 - (-0.2f64).exp());
        assert!((eps0_instant(1.0, 100.0, 0.2).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn single_user_without_feedback_is_rayleigh_outage() {
        let c = cfg(1, 100.0, 2.0, 0.0, PowerMode::ShortTerm);
        let rep = outage_instant(&c).unwrap();
        assert!((rep.eps - (1.0 - (-(2f64.exp() - 1.0) / 100.0).exp())).abs() < 1e-15);
    }

    #[test]
    fn zero_outage_threshold_examples() {
        let a = zero_outage_threshold(100.0, 2.0f64).unwrap();
        assert!((a - 0.127_781_121_978_613).abs() < 1e-12);
        assert!((1.0 + 50.0 * a).ln() - 2.0 < 1e-15);
        assert!(zero_outage_threshold(100.0, 1e-12f64).unwrap() < 1e-13);
    }

    #[test]
    fn split_examples() {
        let (p1, p0) = power_split_longterm(10.0, 2f64.ln(), 1).unwrap();
        assert_eq!(p1, 5.0);
        assert!((p0 - 10.0).abs() < 1e-12);
        assert!(power_split_longterm(10.0, 0.0f64, 3).is_err());
        for &(alpha, k) in &[(0.1, 16), (1.0, 4), (3.0, 1)] {
            let (p1, p0) = power_split_longterm(10.0f64, alpha, k).unwrap();
            let avg = average_power(p1, p0, alpha, k);
            assert!(avg <= 10.0 + 1e-12);
            assert!((avg - 5.0 * (1.0 + prob_some_above(alpha, k))).abs() < 1e-12);
        }
    }

    #[test]
    fn longterm_closed_golden() {
        let e = outage_longterm_closed(100.0, 1, 2.0f64).unwrap();
        let x = 2.0 * (2f64.exp() - 1.0) / 100.0;
        assert!((e - (1.0 - (-x * (1.0 - (-x).exp())).exp())).abs() < 1e-15);
        assert!((e - 0.01521).abs() < 5e-5, "{e}");
        assert!(outage_longterm_closed(1e12, 4, 2.0f64).unwrap() < 1e-40);
    }

    #[test]
    fn longterm_pipeline_matches_closed_form() {
        for &k in &[1usize, 2, 5, 16] {
            for &p in &[3.0f64, 30.0, 1000.0] {
                for &r in &[0.5f64, 2.0, 3.0 * 2f64.ln()] {
                    let alpha = zero_outage_threshold(p, r).unwrap();
                    let rep =
                        outage_instant(&cfg(k, p, r, alpha, PowerMode::LongTermTwoLevel)).unwrap();
                    assert!(rep.eps1 < 1e-15);
                    let closed = outage_longterm_closed(p, k, r).unwrap();
                    assert!((rep.eps - closed).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn mixture_identity() {
        let c = cfg(8, 100.0, 3.0 * 2f64.ln(), 0.4, PowerMode::ShortTerm);
        let rep = outage_instant(&c).unwrap();
        let some = prob_some_above(0.4, 8);
        assert!((rep.eps - (rep.eps1 * some + rep.eps0 * (1.0 - some))).abs() < 1e-12);
    }

    #[test]
    fn monotone_in_power_and_rate() {
        let mut last = 1.0;
        for i in 0..30 {
            let p = 10f64.powf(i as f64 / 10.0);
            let e = outage_instant(&cfg(8, p, 1.0, 0.5, PowerMode::ShortTerm))
                .unwrap()
                .eps;
            assert!(e <= last);
            last = e;
        }
        let mut last = 0.0;
        for i in 1..30 {
            let e = outage_instant(&cfg(8, 20.0, i as f64 * 0.2, 0.5, PowerMode::ShortTerm))
                .unwrap()
                .eps;
            assert!(e >= last);
            last = e;
        }
    }
}
