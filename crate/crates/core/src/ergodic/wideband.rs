use crate::channel::CorrelationParams;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::QuadratureSpec;

use super::rate::{check_threshold, prob_some_above, sum_rate, ErgodicConfig};
use super::threshold::bracket_exact;

/// Low-SNR characterization: minimum energy per bit and wideband slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidebandReport<T> {
    pub ebn0_min_linear: T,
    pub ebn0_min_db: T,
    /// Bits/s/Hz per 3 dB.
    pub slope_s0: T,
}

fn to_db<T: Real>(x: T) -> T {
    T::lit(10.0) * x.log10()
}

/// First two derivatives of the rate at zero SNR turned into `Eb/N0_min`
/// and the wideband slope `S0`.
pub fn wideband_metrics<T: Real>(
    alpha: T,
    k: usize,
    c: CorrelationParams<T>,
) -> Result<WidebandReport<T>> {
    check_threshold(alpha)?;
    if k == 0 {
        return Err(Error::domain("need at least one user"));
    }
    let pn = prob_some_above(alpha, k);
    let r2 = c.abs_rho() * c.abs_rho();
    let mean = T::one() + r2 * alpha;
    let half = T::lit(0.5);
    // E[v_tau^4 | v² >= alpha] / 2
    let second =
        T::one() + T::lit(2.0) * alpha * r2 - alpha * r2 * r2 + alpha * alpha * r2 * r2 * half;
    let ebn0 = T::LN_2() / (pn * mean);
    Ok(WidebandReport {
        ebn0_min_linear: ebn0,
        ebn0_min_db: to_db(ebn0),
        slope_s0: pn * mean * mean / second,
    })
}

/// Threshold minimizing `Eb/N0_min`, i.e. maximizing `Pr(N>0)(1 + rho² alpha)`.
pub fn wideband_threshold<T: Real>(k: usize, c: CorrelationParams<T>) -> Result<T> {
    if k == 0 {
        return Err(Error::domain("need at least one user"));
    }
    let r2 = c.abs_rho() * c.abs_rho();
    let gain = |a: T| prob_some_above(a, k) * (T::one() + r2 * a);
    let step = T::lit(0.01);
    let hi = T::from_count(k).ln() + T::lit(6.0);
    let n = (hi / step).floor().to_usize().unwrap_or(0);
    let mut best = (0usize, gain(T::zero()));
    for i in 1..=n {
        let g = gain(T::from_count(i) * step);
        if g > best.1 {
            best = (i, g);
        }
    }
    let mut lo = T::from_count(best.0.saturating_sub(1)) * step;
    let mut up = T::from_count(best.0 + 1) * step;
    let third = T::lit(1.0 / 3.0);
    while up - lo > T::lit(1e-9) {
        let m1 = lo + (up - lo) * third;
        let m2 = up - (up - lo) * third;
        if gain(m1) >= gain(m2) {
            up = m2;
        } else {
            lo = m1;
        }
    }
    let mid = (lo + up) * T::lit(0.5);
    Ok(if gain(mid) > best.1 {
        mid
    } else {
        T::from_count(best.0) * step
    })
}

/// Affine low-SNR spectral efficiency in bits/s/Hz:
/// `S0 (Eb/N0|dB - Eb/N0_min|dB) / (10 log10 2)`, zero below the minimum.
pub fn affine_rate_approx<T: Real>(ebn0_db: T, report: &WidebandReport<T>) -> T {
    let three_db = to_db(T::lit(2.0));
    (report.slope_s0 / three_db * (ebn0_db - report.ebn0_min_db)).max(T::zero())
}

/// Solve `P = R(P) Eb/N0` for the SNR at which a scheme with rate function
/// `rate_nats` operates at the given energy per bit (linear), `R` in bits.
/// Returns `(P, R_bits)`.
///
/// For a concave rate `P / R(P)` increases from `Eb/N0_min` as `P` grows, so
/// the root is bracketed and found by bisection on `log P`.
pub fn power_for_ebn0<T, F>(rate_nats: F, ebn0: T) -> Result<(T, T)>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let rate_bits = |p: T| -> Result<T> { Ok(rate_nats(p)? / T::LN_2()) };
    let excess = |p: T| -> Result<T> { Ok(p / rate_bits(p)? - ebn0) };
    let mut lo = T::lit(-30.0);
    let mut hi = T::lit(1.0);
    while excess(hi.exp())? < T::zero() {
        hi = hi + T::lit(5.0);
        if hi > T::lit(700.0) {
            return Err(Error::Range("Eb/N0 needs an unrepresentable SNR".into()));
        }
    }
    while excess(lo.exp())? > T::zero() {
        lo = lo - T::lit(10.0);
        if lo < T::lit(-700.0) {
            return Err(Error::domain(format!(
                "Eb/N0 {ebn0} is at or below the minimum"
            )));
        }
    }
    while hi - lo > T::lit(1e-10) {
        let mid = (lo + hi) * T::lit(0.5);
        if excess(mid.exp())? < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = ((lo + hi) * T::lit(0.5)).exp();
    Ok((p, rate_bits(p)?))
}

/// [`power_for_ebn0`] for the 1-bit scheme at a fixed threshold.
pub fn solve_power_for_ebn0<T: Real>(
    k: usize,
    c: CorrelationParams<T>,
    alpha: T,
    ebn0: T,
    q: &QuadratureSpec<T>,
) -> Result<(T, T)> {
    let floor = wideband_metrics(alpha, k, c)?.ebn0_min_linear;
    if !(ebn0 > floor) {
        return Err(Error::domain(format!(
            "Eb/N0 {ebn0} is not above the minimum {floor}"
        )));
    }
    power_for_ebn0(|p| sum_rate(&ErgodicConfig::new(k, p, c, alpha)?, q), ebn0)
}

/// Bounds on the multiplexing gain `(r_low, r_up)`.
pub fn multiplexing_gain_bounds<T: Real>(
    alpha: T,
    k: usize,
    c: CorrelationParams<T>,
) -> Result<(T, T)> {
    check_threshold(alpha)?;
    let up = prob_some_above(alpha, k);
    Ok((up * bracket_exact(alpha, c)?, up))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corr(rho: f64) -> CorrelationParams<f64> {
        CorrelationParams::new(rho).unwrap()
    }

    #[test]
    fn no_feedback_limit() {
        let w = wideband_metrics(0.0, 3, corr(0.0)).unwrap();
        assert!((w.ebn0_min_linear - 2f64.ln()).abs() < 1e-12);
        assert_eq!(format!("{:.2}", w.ebn0_min_db), "-1.59");
        assert!((w.slope_s0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn large_k_limits() {
        let k = 1_000_000usize;
        let alpha = (k as f64).ln() - 2.0;
        let w = wideband_metrics(alpha, k, corr(0.9)).unwrap();
        let target = 2f64.ln() / (0.81 * (k as f64).ln());
        assert!((w.ebn0_min_linear / target - 1.0).abs() < 0.10);
        assert!((w.slope_s0 / 2.0 - 1.0).abs() < 0.05);
        assert!(w.slope_s0 > 0.0 && w.slope_s0 <= 2.0);
    }

    #[test]
    fn slope_is_bounded_by_two() {
        for &k in &[1, 4, 100, 10_000] {
            for &rho in &[0.0, 0.5, 0.9, 1.0] {
                for i in 0..40 {
                    let w = wideband_metrics(i as f64 * 0.5, k, corr(rho)).unwrap();
                    assert!(w.slope_s0 > 0.0 && w.slope_s0 <= 2.0 + 1e-12);
                }
            }
        }
    }

    fn tight() -> QuadratureSpec<f64> {
        QuadratureSpec::new(1e-24, 1e-13, 4000, 1e-26).unwrap()
    }

    #[test]
    fn derivatives_match_exact_rate() {
        let q = tight();
        for &(k, rho, alpha) in &[(4, 0.9, 1.0), (16, 0.5, 2.0), (1, 0.0, 0.0), (8, 0.7, 0.5)] {
            let c = corr(rho);
            let rate = |p: f64| sum_rate(&ErgodicConfig::new(k, p, c, alpha).unwrap(), &q).unwrap();
            let w = wideband_metrics(alpha, k, c).unwrap();
            let (p, h) = (1e-6, 1e-8);
            let d1 = (rate(p + h) - rate(p - h)) / (2.0 * h);
            assert!(
                (d1 / (2f64.ln() / w.ebn0_min_linear) - 1.0).abs() < 1e-3,
                "k={k}: {d1}"
            );
            let s = 1e-3;
            let d2 = (rate(2.0 * s) - 2.0 * rate(s)) / (s * s);
            let r1 = 2f64.ln() / w.ebn0_min_linear;
            let s0 = 2.0 * r1 * r1 / -d2;
            assert!(
                (s0 / w.slope_s0 - 1.0).abs() < 1e-2,
                "k={k}: {s0} vs {}",
                w.slope_s0
            );
        }
    }

    #[test]
    fn affine_examples() {
        let w = wideband_metrics(1.0, 8, corr(0.9)).unwrap();
        assert_eq!(affine_rate_approx(w.ebn0_min_db, &w), 0.0);
        assert_eq!(affine_rate_approx(w.ebn0_min_db - 1.0, &w), 0.0);
        let step = 10.0 * 2f64.log10();
        assert!((affine_rate_approx(w.ebn0_min_db + step, &w) - w.slope_s0).abs() < 1e-12);
    }

    #[test]
    fn affine_tracks_exact_low_snr_rate() {
        let q = QuadratureSpec::default();
        let (k, c) = (100, corr(0.9));
        let alpha = wideband_threshold(k, c).unwrap();
        let w = wideband_metrics(alpha, k, c).unwrap();
        let mut checked = 0;
        for i in 1..40 {
            let ebn0 = w.ebn0_min_linear * (1.0 + 0.01 * i as f64);
            let (_, bits) = solve_power_for_ebn0(k, c, alpha, ebn0, &q).unwrap();
            if bits * 2f64.ln() > 0.3 {
                break;
            }
            let approx = affine_rate_approx(10.0 * ebn0.log10(), &w);
            assert!(
                (approx / bits - 1.0).abs() < 0.10,
                "ebn0={ebn0}: {approx} vs {bits}"
            );
            checked += 1;
        }
        assert!(checked > 5);
    }

    #[test]
    fn ebn0_inversion_is_consistent() {
        let q = QuadratureSpec::default();
        let c = corr(0.9);
        let (p, bits) = solve_power_for_ebn0(16, c, 1.0, 0.5, &q).unwrap();
        assert!((p / bits - 0.5).abs() < 1e-8);
        assert!(solve_power_for_ebn0(16, c, 1.0, 1e-3, &q).is_err());
    }

    #[test]
    fn wideband_threshold_maximizes_gain() {
        let c = corr(0.9);
        let a = wideband_threshold(100, c).unwrap();
        let g = |x: f64| prob_some_above(x, 100) * (1.0 + 0.81 * x);
        for i in 0..2000 {
            assert!(g(a) >= g(i as f64 * 0.005) - 1e-12);
        }
    }

    #[test]
    fn multiplexing_examples() {
        assert_eq!(
            multiplexing_gain_bounds(0.0, 5, corr(0.5)).unwrap(),
            (1.0, 1.0)
        );
        let k = 1_000_000usize;
        let alpha = (k as f64).ln() - 2.0;
        let (lo, up) = multiplexing_gain_bounds(alpha, k, corr(0.9)).unwrap();
        assert!(up > 0.95);
        assert!(lo <= up);
        assert!((lo - up * bracket_exact(alpha, corr(0.9)).unwrap()).abs() < 1e-15);
        let (lo, up) = multiplexing_gain_bounds(1.0, 4, corr(0.0)).unwrap();
        assert!((lo - up * (-1.0f64).exp()).abs() < 1e-14);
    }
}
