//! Correlated block-Rayleigh fading.
//!
//! A user's complex gain `h ~ CN(0, 1)` is measured at the feedback instant;
//! by the time the base station transmits it has drifted to
//! `h_tau = rho h + sqrt(1 - rho²) w` with independent `w ~ CN(0, 1)`. The
//! envelopes `v = |h|` and `v_tau = |h_tau|` are both unit-power Rayleigh
//! with the bivariate density in [`joint_pdf`].

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::{bessel_j0, i0_scaled, q1};
use crate::DEGENERATE_RHO_TOL;

/// Temporal correlation coefficient between the channel at estimation and
/// at transmission time. Only `|rho|` enters the envelope statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationParams<T> {
    rho: T,
}

impl<T: Real> CorrelationParams<T> {
    pub fn new(rho: T) -> Result<Self> {
        if !rho.is_finite() || rho.abs() > T::one() {
            return Err(Error::domain(format!(
                "correlation must lie in [-1, 1], got {rho}"
            )));
        }
        Ok(Self { rho })
    }

    /// Instantaneous (non-delayed) feedback.
    pub fn instantaneous() -> Self {
        Self { rho: T::one() }
    }

    /// Feedback carrying no information about the transmission-time channel.
    pub fn independent() -> Self {
        Self { rho: T::zero() }
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn abs_rho(&self) -> T {
        self.rho.abs()
    }

    /// `1 - rho²`
    pub fn innovation(&self) -> T {
        T::one() - self.rho * self.rho
    }

    /// True when `|1 - |rho||` is below [`DEGENERATE_RHO_TOL`]; the closed
    /// forms divide by `1 - rho²` and must switch to instantaneous feedback.
    pub fn is_degenerate(&self) -> bool {
        (T::one() - self.rho.abs()).abs() < T::lit(DEGENERATE_RHO_TOL)
    }

    pub fn is_independent(&self) -> bool {
        self.rho == T::zero()
    }
}

/// Jakes' model parameters: Doppler spread (Hz) and feedback delay (s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JakesParams<T> {
    doppler_hz: T,
    delay_s: T,
}

impl<T: Real> JakesParams<T> {
    pub fn new(doppler_hz: T, delay_s: T) -> Result<Self> {
        let ok = |x: T| x.is_finite() && x >= T::zero();
        if !ok(doppler_hz) || !ok(delay_s) {
            return Err(Error::domain(
                "Doppler spread and delay must be finite and nonnegative",
            ));
        }
        Ok(Self {
            doppler_hz,
            delay_s,
        })
    }

    pub fn doppler_hz(&self) -> T {
        self.doppler_hz
    }

    pub fn delay_s(&self) -> T {
        self.delay_s
    }
}

/// Envelope at the estimation instant and at the transmission instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingPair<T> {
    pub v: T,
    pub v_tau: T,
}

/// `rho = J0(2 pi f_D tau)`.
pub fn rho_from_jakes<T: Real>(params: JakesParams<T>) -> Result<CorrelationParams<T>> {
    let arg = T::TAU() * params.doppler_hz * params.delay_s;
    let rho = bessel_j0(arg)?;
    // J0 is bounded by one; clamp the last ulp
    CorrelationParams::new(rho.max(-T::one()).min(T::one()))
}

/// Joint density of `(v, v_tau)`:
///
/// `4 v v_tau / (1 - rho²) · exp(-(v² + v_tau²)/(1 - rho²)) · I0(2 |rho| v v_tau / (1 - rho²))`.
pub fn joint_pdf<T: Real>(v: T, v_tau: T, c: CorrelationParams<T>) -> Result<T> {
    if c.is_degenerate() {
        return Err(Error::DegenerateCorrelation);
    }
    if v < T::zero() || v_tau < T::zero() {
        return Ok(T::zero());
    }
    let s = c.innovation();
    let x = T::lit(2.0) * c.abs_rho() * v * v_tau / s;
    let expo = -(v * v + v_tau * v_tau) / s + x;
    Ok(T::lit(4.0) * v * v_tau / s * expo.exp() * i0_scaled(x))
}

/// Density of `v_tau` given the feedback event `v² >= alpha`:
///
/// `2 z exp(-z² + alpha) · Q1(sqrt(2) |rho| z / sqrt(1 - rho²), sqrt(2 alpha) / sqrt(1 - rho²))`.
///
/// Returns the unconditional Rayleigh density `2 z e^{-z²}` exactly when
/// `alpha = 0` or `rho = 0`.
pub fn conditional_pdf_vtau<T: Real>(z: T, alpha: T, c: CorrelationParams<T>) -> Result<T> {
    if alpha < T::zero() || !alpha.is_finite() {
        return Err(Error::domain(format!(
            "threshold must be finite and >= 0, got {alpha}"
        )));
    }
    if c.is_degenerate() {
        return Err(Error::DegenerateCorrelation);
    }
    if z < T::zero() {
        return Ok(T::zero());
    }
    let two = T::lit(2.0);
    if alpha == T::zero() || c.is_independent() {
        return Ok(two * z * (-z * z).exp());
    }
    Ok(conditional_density_unchecked(z, alpha, c))
}

/// [`conditional_pdf_vtau`] without argument checks, for integrands.
pub(crate) fn conditional_density_unchecked<T: Real>(z: T, alpha: T, c: CorrelationParams<T>) -> T {
    let two = T::lit(2.0);
    let root = c.innovation().sqrt();
    let a = T::SQRT_2() * c.abs_rho() * z / root;
    let b = (two * alpha).sqrt() / root;
    two * z * (-z * z + alpha).exp() * q1(a, b)
}

/// Conditional density with instantaneous feedback: the Rayleigh density
/// truncated to `z >= sqrt(alpha)` and renormalized.
pub fn conditional_pdf_vtau_instant<T: Real>(z: T, alpha: T) -> T {
    if z < T::zero() || z * z < alpha {
        return T::zero();
    }
    T::lit(2.0) * z * (-z * z + alpha).exp()
}

/// `E[v_tau² | v² >= alpha] = 1 + rho² alpha`.
pub fn conditional_mean_power<T: Real>(alpha: T, c: CorrelationParams<T>) -> T {
    T::one() + c.rho * c.rho * alpha
}

/// One draw of `CN(0, 1)`: two independent real normals of variance 1/2.
pub(crate) fn draw_cn<T, R>(rng: &mut R) -> (T, T)
where
    T: Real,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    let s = T::FRAC_1_SQRT_2();
    let re: T = StandardNormal.sample(rng);
    let im: T = StandardNormal.sample(rng);
    (re * s, im * s)
}

/// Envelope of `rho h + sqrt(1 - rho²) w` for a fresh innovation `w`.
pub(crate) fn delayed_envelope<T, R>(h: (T, T), rng: &mut R, c: CorrelationParams<T>) -> T
where
    T: Real,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    let (w_re, w_im) = draw_cn::<T, R>(rng);
    let s = c.innovation().max(T::zero()).sqrt();
    let re = c.rho * h.0 + s * w_re;
    let im = c.rho * h.1 + s * w_im;
    re.hypot(im)
}

/// Draw a correlated envelope pair. Uses the signed `rho` in the Gaussian
/// construction; envelopes are insensitive to the sign.
pub fn sample_pair<T, R>(rng: &mut R, c: CorrelationParams<T>) -> FadingPair<T>
where
    T: Real,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    let h = draw_cn::<T, R>(rng);
    let v_tau = delayed_envelope(h, rng, c);
    FadingPair {
        v: h.0.hypot(h.1),
        v_tau,
    }
}
