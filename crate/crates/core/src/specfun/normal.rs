use crate::scalar::Real;

use super::gamma::erfc;

/// Standard normal CDF Φ(t).
pub fn std_normal_cdf<T: Real>(t: T) -> T {
    T::lit(0.5) * erfc(-t / T::SQRT_2())
}

/// Upper tail 1 - Φ(t), accurate deep into the tail.
pub fn std_normal_sf<T: Real>(t: T) -> T {
    T::lit(0.5) * erfc(t / T::SQRT_2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centre_and_limits() {
        assert_eq!(std_normal_cdf(0.0f64), 0.5);
        assert!(std_normal_cdf(-40.0f64) < 1e-300);
        assert_eq!(std_normal_cdf(40.0f64), 1.0);
    }

    #[test]
    fn matches_trapezoid_oracle_at_one() {
        // Φ(1) = 1/2 + ∫_0^1 φ(x) dx, trapezoid with 1e6 panels
        let n = 1_000_000;
        let h = 1.0 / n as f64;
        let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut s = 0.5 * (phi(0.0) + phi(1.0));
        for i in 1..n {
            s += phi(i as f64 * h);
        }
        let oracle = 0.5 + s * h;
        assert!((std_normal_cdf(1.0f64) - oracle).abs() < 1e-12);
    }

    #[test]
    fn symmetry() {
        for i in -60..=60 {
            let t = i as f64 * 0.1;
            assert!((std_normal_cdf(-t) - (1.0 - std_normal_cdf(t))).abs() < 1e-15);
            assert!((std_normal_sf(t) - std_normal_cdf(-t)).abs() < 1e-16);
        }
    }
}
