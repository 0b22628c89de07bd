//! Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals and
//! on `[lower, ∞)` for integrands with a sub-Gaussian tail.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Largest number of window doublings when searching for a tail cutoff.
const MAX_TAIL_STEPS: usize = 64;

/// Tolerances for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
    /// Neglected tail mass on `[z_max, ∞)`.
    pub tail_cutoff_tol: T,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        // tolerances below a few hundred ulps cannot be met in f32
        let floor = T::epsilon() * T::lit(100.0);
        Self {
            abs_tol: T::lit(1e-10).max(floor),
            rel_tol: T::lit(1e-9).max(floor),
            max_subdivisions: 1000,
            tail_cutoff_tol: T::lit(1e-12).max(floor),
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(
        abs_tol: T,
        rel_tol: T,
        max_subdivisions: usize,
        tail_cutoff_tol: T,
    ) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
            tail_cutoff_tol,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |t: T| t.is_finite() && t > T::zero();
        if !(ok(self.abs_tol) && ok(self.rel_tol) && ok(self.tail_cutoff_tol)) {
            return Err(Error::domain(
                "quadrature tolerances must be positive and finite",
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    /// Same spec with every tolerance multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            tail_cutoff_tol: self.tail_cutoff_tol * factor,
            ..*self
        }
    }
}

/// Outcome of an adaptive integration, converged or not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Estimate<T> {
    pub value: T,
    pub error: T,
    pub converged: bool,
}

impl<T: Real> Estimate<T> {
    pub fn into_result(self) -> Result<T> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Convergence {
                estimate: self.value.as_f64(),
                error_bound: self.error.as_f64(),
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Panel<T> {
    let half = T::lit(0.5);
    let centre = half * (a + b);
    let half_len = half * (b - a);
    let abs_half = half_len.abs();

    let fc = f(centre);
    let mut res_g = fc * T::lit(WG[3]);
    let mut res_k = fc * T::lit(WGK[7]);
    let mut res_abs = res_k.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];

    for j in 0..7 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let wk = T::lit(WGK[j]);
        res_k = res_k + wk * (f1 + f2);
        res_abs = res_abs + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = res_k * half;
    let mut res_asc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half_len;
    res_abs = res_abs * abs_half;
    res_asc = res_asc * abs_half;
    let mut err = ((res_k - res_g) * half_len).abs();
    if res_asc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = res_asc * scale.min(T::one());
    }
    let fifty_eps = T::lit(50.0) * T::epsilon();
    if res_abs > T::min_positive_value() / fifty_eps {
        err = err.max(fifty_eps * res_abs);
    }
    Panel {
        a,
        b,
        value,
        error: err,
    }
}

/// Adaptive integration over the consecutive intervals delimited by `points`
/// (sorted, at least two entries).
pub(crate) fn adaptive<T: Real, F: Fn(T) -> T>(
    f: &F,
    points: &[T],
    spec: &QuadratureSpec<T>,
) -> Estimate<T> {
    debug_assert!(points.len() >= 2);
    let mut panels: Vec<Panel<T>> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| kronrod15(f, w[0], w[1]))
        .collect();
    if panels.is_empty() {
        return Estimate {
            value: T::zero(),
            error: T::zero(),
            converged: true,
        };
    }
    let mut splits = 0usize;
    loop {
        let value: T = panels.iter().map(|p| p.value).sum();
        let error: T = panels.iter().map(|p| p.error).sum();
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= target {
            return Estimate {
                value,
                error,
                converged: true,
            };
        }
        if splits >= spec.max_subdivisions {
            return Estimate {
                value,
                error,
                converged: false,
            };
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |acc, (i, p)| {
                if p.error > acc.1 {
                    (i, p.error)
                } else {
                    acc
                }
            });
        let p = panels.swap_remove(worst);
        let mid = T::lit(0.5) * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // panel cannot be split further in this precision
            return Estimate {
                value,
                error,
                converged: false,
            };
        }
        panels.push(kronrod15(f, p.a, mid));
        panels.push(kronrod15(f, mid, p.b));
        splits += 1;
    }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<T> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(
            "finite limits required; use integrate_semi_infinite",
        ));
    }
    if b < a {
        return integrate(f, b, a, spec).map(|v| -v);
    }
    adaptive(&f, &[a, b], spec).into_result()
}

/// Integrate `f` over `[lower, ∞)`.
///
/// The upper window grows geometrically, each new slab being integrated
/// adaptively, until two consecutive slabs contribute less than
/// `tail_cutoff_tol` in absolute value.
pub fn integrate_semi_infinite<T: Real, F: Fn(T) -> T>(
    f: F,
    lower: T,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    spec.validate()?;
    if !lower.is_finite() {
        return Err(Error::domain("lower limit must be finite"));
    }
    let mut total = T::zero();
    let mut error = T::zero();
    let mut start = lower;
    let mut width = T::one();
    let mut quiet = 0;
    for _ in 0..MAX_TAIL_STEPS {
        let slab = adaptive(&f, &[start, start + width], spec);
        total = total + slab.value;
        error = error + slab.error;
        if !slab.converged {
            return Err(Error::Convergence {
                estimate: total.as_f64(),
                error_bound: error.as_f64(),
            });
        }
        if slab.value.abs() < spec.tail_cutoff_tol {
            quiet += 1;
            if quiet == 2 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        start = start + width;
        width = width * T::lit(2.0);
    }
    Err(Error::Convergence {
        estimate: total.as_f64(),
        error_bound: error.as_f64(),
    })
}

/// Integrate `f` over `[lower, ∞)` given an analytic bound `tail(z) >= ∫_z^∞ |f|`.
///
/// The cutoff `z_max` is grown from `lower + 1` by doubling its distance to
/// `lower` until `tail(z_max) < tail_cutoff_tol`. `breaks` are interior
/// points where `f` changes character; those outside `(lower, z_max)` are
/// ignored.
pub fn integrate_semi_infinite_bounded<T, F, B>(
    f: F,
    lower: T,
    breaks: &[T],
    tail: B,
    spec: &QuadratureSpec<T>,
) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
    B: Fn(T) -> T,
{
    spec.validate()?;
    let mut span = T::one();
    let mut z_max = lower + span;
    let mut steps = 0;
    while !(tail(z_max) < spec.tail_cutoff_tol) {
        steps += 1;
        if steps > MAX_TAIL_STEPS {
            return Err(Error::Convergence {
                estimate: f64::NAN,
                error_bound: tail(z_max).as_f64(),
            });
        }
        span = span * T::lit(2.0);
        z_max = lower + span;
    }
    let mut points = vec![lower];
    let mut interior: Vec<T> = breaks
        .iter()
        .copied()
        .filter(|&x| x > lower && x < z_max)
        .collect();
    interior.sort_by(|x, y| x.partial_cmp(y).expect("finite break points"));
    interior.dedup();
    points.extend(interior);
    points.push(z_max);
    adaptive(&f, &points, spec).into_result()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rayleigh_density_normalizes() {
        let spec = QuadratureSpec::default();
        let v = integrate_semi_infinite(|z: f64| 2.0 * z * (-z * z).exp(), 0.0, &spec).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rayleigh_tail() {
        let spec = QuadratureSpec::default();
        let v = integrate_semi_infinite(|z: f64| 2.0 * z * (-z * z).exp(), 1.0, &spec).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn bounded_variant_uses_tail_bound() {
        let spec = QuadratureSpec::default();
        let v = integrate_semi_infinite_bounded(
            |z: f64| 2.0 * z * (-z * z).exp(),
            0.0,
            &[0.5, 100.0],
            |z: f64| (-z * z).exp(),
            &spec,
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn finite_interval_polynomial_is_exact() {
        let spec = QuadratureSpec::default();
        let v = integrate(|x: f64| x.powi(5) - 3.0 * x, -1.0, 2.0, &spec).unwrap();
        assert!((v - (64.0 / 6.0 - 1.0 / 6.0 - 4.5)).abs() < 1e-13);
        let r = integrate(|x: f64| x.powi(5) - 3.0 * x, 2.0, -1.0, &spec).unwrap();
        assert!((r + v).abs() < 1e-13);
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let spec = QuadratureSpec {
            max_subdivisions: 1,
            ..QuadratureSpec::default()
        };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-3, 1.0, &spec).unwrap_err();
        match err {
            Error::Convergence {
                estimate,
                error_bound,
            } => {
                assert!(estimate.is_finite());
                assert!(error_bound > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_spec_is_rejected() {
        assert!(QuadratureSpec::new(0.0, 1e-9, 10, 1e-12).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-9, 0, 1e-12).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-9, 10, 1e-12).is_ok());
    }

    #[test]
    fn f32_default_is_attainable() {
        let spec = QuadratureSpec::<f32>::default();
        let v = integrate_semi_infinite(|z: f32| 2.0 * z * (-z * z).exp(), 0.0, &spec).unwrap();
        assert!((v - 1.0).abs() < 1e-4);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn integration_is_linear(c in -50.0f64..50.0, s in 0.3f64..3.0) {
                let spec = QuadratureSpec::default();
                let f = |z: f64| z * (-(z - 1.0) * (z - 1.0) / s).exp();
                let base = integrate_semi_infinite(f, 0.0, &spec).unwrap();
                let scaled = integrate_semi_infinite(|z| c * f(z), 0.0, &spec).unwrap();
                prop_assert!((scaled - c * base).abs() <= 1e-8 * (1.0 + (c * base).abs()));
            }
        }
    }
}
