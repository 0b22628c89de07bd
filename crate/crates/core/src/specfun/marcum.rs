//! First-order Marcum-Q function
//!
//! `Q1(a, b) = ∫_b^∞ x exp(-(x² + a²)/2) I0(a x) dx`, the tail probability
//! of a Rician envelope with noncentrality `a`.
//!
//! Evaluated as a Poisson mixture of integer-shape gamma tails,
//!
//! `Q1(a, b) = Σ_n Pois(n; a²/2) · Q(n + 1, b²/2)`,
//!
//! summed outward from the Poisson mode so the weights never overflow. When
//! `b < a` the complementary mixture with `P(n + 1, b²/2)` is summed instead,
//! which keeps full precision for values close to one. For very large `a`
//! the defining integral is integrated directly with the scaled Bessel
//! function.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::bessel::i0_scaled;
use super::gamma::{gamma_p, gamma_q, ln_gamma};
use super::normal::std_normal_sf;
use super::quadrature::{adaptive, QuadratureSpec};

/// Largest Poisson mean `a²/2` handled by the series.
const SERIES_LAMBDA_MAX: f64 = 2.0e4;

/// Half-width, in standard deviations, of the window holding the Rician mass.
const RICIAN_WINDOW: f64 = 40.0;

/// Arguments `(a, b)` of `Q1(a, b)`: both finite and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarcumArgs<T> {
    a: T,
    b: T,
}

impl<T: Real> MarcumArgs<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        let valid = |x: T| x.is_finite() && x >= T::zero();
        if !valid(a) || !valid(b) {
            return Err(Error::domain(format!(
                "Marcum-Q arguments must be finite and >= 0, got ({a}, {b})"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }
}

/// `Q1(a, b)`, a probability in `[0, 1]`.
pub fn marcum_q1<T: Real>(args: MarcumArgs<T>) -> T {
    q1(args.a, args.b)
}

/// Unchecked `Q1` for callers that construct valid arguments themselves.
pub(crate) fn q1<T: Real>(a: T, b: T) -> T {
    debug_assert!(a >= T::zero() && b >= T::zero(), "Q1({a:?}, {b:?})");
    if b <= T::zero() {
        return T::one();
    }
    if a <= T::zero() {
        return (-(b * b) * T::lit(0.5)).exp();
    }
    let lambda = a * a * T::lit(0.5);
    let v = if lambda <= T::lit(SERIES_LAMBDA_MAX) {
        poisson_mixture(a, b)
    } else {
        rician_window(a, b)
    };
    v.max(T::zero()).min(T::one())
}

fn poisson_mixture<T: Real>(a: T, b: T) -> T {
    let half = T::lit(0.5);
    let lambda = a * a * half;
    let y = b * b * half;
    // for b < a sum the lower tails and complement at the end
    let complement = b < a;
    let tol = T::epsilon() * T::lit(0.1);

    let n0 = lambda.floor().to_usize().unwrap_or(0);
    let n0f = T::from_count(n0);
    let ln_fact = ln_gamma(n0f + T::one());
    let w0 = (-lambda + n0f * lambda.ln() - ln_fact).exp();
    // t_n = e^{-y} y^n / n!, the Poisson(y) mass at n
    let t0 = (-y + n0f * y.ln() - ln_fact).exp();
    let g0 = if complement {
        gamma_p(n0f + T::one(), y)
    } else {
        gamma_q(n0f + T::one(), y)
    };

    let mut sum = w0 * g0;
    let mut wsum = w0;

    let cap = n0 + 60 * (lambda.sqrt().to_usize().unwrap_or(0) + 1) + 100;
    // the Poisson(y) mass may underflow at n0 and become representable
    // further up; track it in logs until then
    let ln_y = y.ln();
    let mut ln_t = -y + n0f * ln_y - ln_fact;
    let mut in_logs = t0 < T::min_positive_value() / T::epsilon();

    let (mut w, mut g, mut t) = (w0, g0, t0);
    let mut n = n0;
    while n < cap {
        n += 1;
        let nf = T::from_count(n);
        w = w * lambda / nf;
        if in_logs {
            ln_t = ln_t + ln_y - nf.ln();
            t = ln_t.exp();
            in_logs = t < T::min_positive_value() / T::epsilon();
        } else {
            t = t * y / nf;
        }
        g = if complement {
            (g - t).max(T::zero())
        } else {
            (g + t).min(T::one())
        };
        sum = sum + w * g;
        wsum = wsum + w;
        // g only grows upward in the direct sum
        let g_max = if complement { g } else { T::one() };
        let ratio = lambda / (nf + T::one());
        if ratio < T::one() && negligible(w / (T::one() - ratio), g_max, sum, wsum, tol) {
            break;
        }
    }

    let (mut w, mut g, mut t) = (w0, g0, t0);
    let mut n = n0;
    while n > 0 {
        let nf = T::from_count(n);
        // shape n+1 -> n: Q(n, y) = Q(n+1, y) - t_n
        g = if complement {
            (g + t).min(T::one())
        } else {
            (g - t).max(T::zero())
        };
        t = t * nf / y;
        w = w * nf / lambda;
        n -= 1;
        sum = sum + w * g;
        wsum = wsum + w;
        let g_max = if complement { T::one() } else { g };
        let ratio = T::from_count(n) / lambda;
        if negligible(w / (T::one() - ratio), g_max, sum, wsum, tol) {
            break;
        }
    }

    // normalizing by the summed weights removes the ln Γ rounding in w0
    let q = sum / wsum;
    if complement {
        T::one() - q
    } else {
        q
    }
}

/// The remaining Poisson weight must be small both against the weights
/// summed so far (they normalize the result) and, scaled by the largest
/// incomplete-gamma factor still to come, against the partial sum.
fn negligible<T: Real>(w_tail: T, g_max: T, sum: T, wsum: T, tol: T) -> bool {
    w_tail < tol * wsum && w_tail * g_max <= tol * sum
}

/// Direct integration of the Rician density around its mode, in the form
/// `x exp(-(x - a)²/2) · e^{-ax} I0(ax)` which stays finite for any `a`.
fn rician_window<T: Real>(a: T, b: T) -> T {
    let half = T::lit(0.5);
    let density = |x: T| {
        let d = x - a;
        x * (-(d * d) * half).exp() * i0_scaled(a * x)
    };
    let width = T::lit(RICIAN_WINDOW);
    let spec = QuadratureSpec {
        abs_tol: T::epsilon() * T::lit(10.0),
        rel_tol: T::epsilon() * T::lit(100.0),
        max_subdivisions: 400,
        tail_cutoff_tol: T::epsilon(),
    };
    if b >= a {
        if b > a + width {
            return (b / a).sqrt() * std_normal_sf(b - a);
        }
        adaptive(&density, &[b, a + width], &spec).value
    } else {
        if b < a - width {
            return T::one();
        }
        let lo = (a - width).max(T::zero());
        T::one() - adaptive(&density, &[lo, b], &spec).value
    }
}

/// Large-argument approximation `sqrt(b/a) · (1 - Φ(b - a))`.
///
/// Obtained by replacing I0 with its leading exponential asymptote inside the
/// defining integral. Intended as a cross-check for `b` well above `a`.
pub fn marcum_q1_asymptotic<T: Real>(args: MarcumArgs<T>) -> Result<T> {
    if args.a <= T::zero() {
        return Err(Error::domain("asymptotic Marcum-Q requires a > 0"));
    }
    Ok((args.b / args.a).sqrt() * std_normal_sf(args.b - args.a))
}

/// Coarser large-argument form `(2π a b)^{-1/2} exp(-(b - a)²/2)`, the
/// Mills-ratio simplification of [`marcum_q1_asymptotic`].
pub fn marcum_q1_asymptotic_exp<T: Real>(args: MarcumArgs<T>) -> Result<T> {
    if args.a <= T::zero() || args.b <= T::zero() {
        return Err(Error::domain(
            "exponential Marcum-Q asymptote requires a, b > 0",
        ));
    }
    let d = args.b - args.a;
    Ok((T::TAU() * args.a * args.b).sqrt().recip() * (-(d * d) * T::lit(0.5)).exp())
}

/// Elementary bounds `(lower, upper)` on `Q1(a, b)`.
///
/// For `a < b`: `exp(-(b+a)²/2) <= Q1 <= exp(-(b-a)²/2)`.
/// For `b < a`: `Q1 >= 1 - (exp(-(b-a)²/2) - exp(-(b+a)²/2))/2`, upper 1.
/// At `a = b` neither regime applies; `(exp(-(2a)²/2), 1)` is returned.
pub fn marcum_q1_bounds<T: Real>(args: MarcumArgs<T>) -> (T, T) {
    let half = T::lit(0.5);
    let (a, b) = (args.a, args.b);
    let plus = (-(b + a) * (b + a) * half).exp();
    let minus = (-(b - a) * (b - a) * half).exp();
    if a < b {
        (plus, minus)
    } else if b < a {
        (T::one() - half * (minus - plus), T::one())
    } else {
        (plus, T::one())
    }
}
