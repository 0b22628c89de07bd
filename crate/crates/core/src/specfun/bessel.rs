//! Zero-order Bessel functions: modified I0 (with an exponentially scaled
//! variant) and J0 for the Jakes correlation mapping.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Below this argument I0 is summed from its power series; above it the
/// large-argument expansion is used.
const I0_SERIES_MAX: f64 = 30.0;

/// Below this argument J0 is summed from its power series.
const J0_SERIES_MAX: f64 = 12.0;

const MAX_TERMS: usize = 500;

/// Modified Bessel function of the first kind, order zero.
///
/// Overflows `f64` near `x = 713`; use [`bessel_i0_scaled`] for large
/// arguments.
pub fn bessel_i0<T: Real>(x: T) -> Result<T> {
    check_arg(x)?;
    if x <= T::lit(I0_SERIES_MAX) {
        return Ok(i0_series(x));
    }
    let v = x.exp() * i0_asymptotic_scaled(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range(format!(
            "I0({x}) overflows; use bessel_i0_scaled"
        )))
    }
}

/// `I0(x) * exp(-x)`, finite for every finite `x >= 0`.
pub fn bessel_i0_scaled<T: Real>(x: T) -> Result<T> {
    check_arg(x)?;
    Ok(i0_scaled(x))
}

pub(crate) fn i0_scaled<T: Real>(x: T) -> T {
    if x <= T::lit(I0_SERIES_MAX) {
        i0_series(x) * (-x).exp()
    } else {
        i0_asymptotic_scaled(x)
    }
}

fn check_arg<T: Real>(x: T) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::domain(format!(
            "I0 argument must be finite, got {x}"
        )));
    }
    if x < T::zero() {
        return Err(Error::domain(format!(
            "I0 argument must be nonnegative, got {x}"
        )));
    }
    Ok(())
}

/// sum_k (x^2/4)^k / (k!)^2
fn i0_series<T: Real>(x: T) -> T {
    let q = x * x * T::lit(0.25);
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..MAX_TERMS {
        let kf = T::from_count(k);
        term = term * q / (kf * kf);
        sum = sum + term;
        if term <= sum * T::epsilon() {
            break;
        }
    }
    sum
}

/// e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k prod_{j<=k} (2j-1)^2 / (8 j x)
fn i0_asymptotic_scaled<T: Real>(x: T) -> T {
    let eight_x = T::lit(8.0) * x;
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..MAX_TERMS {
        let odd = T::from_count(2 * k - 1);
        let next = term * odd * odd / (T::from_count(k) * eight_x);
        if next >= term {
            // divergent tail of the asymptotic series
            break;
        }
        term = next;
        sum = sum + term;
        if term <= sum * T::epsilon() {
            break;
        }
    }
    sum / (T::TAU() * x).sqrt()
}

/// Bessel function of the first kind, order zero. Even in `x`.
pub fn bessel_j0<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::domain(format!(
            "J0 argument must be finite, got {x}"
        )));
    }
    let x = x.abs();
    if x <= T::lit(J0_SERIES_MAX) {
        Ok(j0_series(x))
    } else {
        Ok(j0_hankel(x))
    }
}

fn j0_series<T: Real>(x: T) -> T {
    let q = -(x * x * T::lit(0.25));
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..MAX_TERMS {
        let kf = T::from_count(k);
        term = term * q / (kf * kf);
        sum = sum + term;
        if term.abs() <= T::epsilon() * T::lit(1e-3) {
            break;
        }
    }
    sum
}

/// Hankel expansion J0(x) = sqrt(2/(pi x)) [P cos(x - pi/4) - Q sin(x - pi/4)].
fn j0_hankel<T: Real>(x: T) -> T {
    let eight_x = T::lit(8.0) * x;
    // a_k = prod_{j<=k} (2j-1)^2 / (8 j x); P takes even k with alternating
    // signs, Q the odd ones.
    let mut p = T::one();
    let mut q = T::zero();
    let mut a = T::one();
    for k in 1..MAX_TERMS {
        let odd = T::from_count(2 * k - 1);
        let next = a * odd * odd / (T::from_count(k) * eight_x);
        if next >= a {
            break;
        }
        a = next;
        let sign = if (k / 2) % 2 == 0 {
            T::one()
        } else {
            -T::one()
        };
        if k % 2 == 0 {
            p = p + sign * a;
        } else {
            q = q + sign * a;
        }
        if a <= T::epsilon() * T::lit(1e-3) {
            break;
        }
    }
    let phase = x - T::FRAC_PI_4();
    // q collects +a_1 - a_3 + ..., the negative of the usual Q
    (T::lit(2.0) / (T::PI() * x)).sqrt() * (p * phase.cos() + q * phase.sin())
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn series_oracle(x: f64) -> f64 {
        // (x^2/4)^k/(k!)^2 accumulated with explicit factorials
        let mut sum = 0.0;
        let mut k = 0u32;
        loop {
            let fact: f64 = (1..=k).map(f64::from).product();
            let term = (x * x / 4.0).powi(k as i32) / (fact * fact);
            sum += term;
            if term < 1e-16 * sum.max(1.0) {
                break;
            }
            k += 1;
        }
        sum
    }

    #[test]
    fn i0_at_zero_is_one() {
        assert_eq!(bessel_i0(0.0f64).unwrap(), 1.0);
    }

    #[test]
    fn i0_matches_power_series() {
        for &x in &[0.5, 1.0, 2.5, 7.0, 12.0, 19.5] {
            let got = bessel_i0(x).unwrap();
            let want = series_oracle(x);
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "x={x}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn i0_large_argument_form() {
        for &x in &[50.0f64, 80.0, 200.0] {
            let got = bessel_i0(x).unwrap();
            let approx = x.exp() / (2.0 * std::f64::consts::PI * x).sqrt();
            assert!(((got - approx) / approx).abs() < 0.01);
        }
    }

    #[test]
    fn series_and_asymptotic_agree_at_switch() {
        let below = i0_series(30.0f64) * (-30.0f64).exp();
        let above = i0_asymptotic_scaled(30.0f64);
        assert!(((below - above) / above).abs() < 1e-13);
    }

    #[test]
    fn i0_overflow_is_reported() {
        assert!(matches!(bessel_i0(800.0f64), Err(Error::Range(_))));
        let s = bessel_i0_scaled(800.0f64).unwrap();
        assert!((s * (2.0 * std::f64::consts::PI * 800.0).sqrt() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn i0_rejects_bad_input() {
        assert!(bessel_i0(f64::NAN).is_err());
        assert!(bessel_i0(f64::INFINITY).is_err());
        assert!(bessel_i0(-1.0f64).is_err());
    }

    #[test]
    fn i0_is_monotone() {
        let mut prev = 1.0;
        for i in 0..2000 {
            let v = bessel_i0(i as f64 * 0.25).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn j0_reference_values() {
        // reference values from scipy.special.j0
        let cases: [(f64, f64); 5] = [
            (1.0, 0.765_197_686_557_966_6),
            (5.0, -0.177_596_771_314_338_3),
            (10.0, -0.245_935_764_451_348_3),
            (15.0, -0.014_224_472_826_780_597),
            (30.0, -0.086_367_983_581_040_31),
        ];
        for (x, want) in cases {
            let got = bessel_j0(x).unwrap();
            assert!((got - want).abs() < 1e-12, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn j0_is_continuous_at_switch() {
        let lo = j0_series(12.0f64);
        let hi = j0_hankel(12.0f64);
        assert!((lo - hi).abs() < 1e-12);
    }

    #[test]
    fn f32_evaluates() {
        let v = bessel_i0(1.0f32).unwrap();
        assert!((v - 1.266_065_9).abs() < 1e-6);
    }
}
