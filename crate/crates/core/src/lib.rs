//! Performance analysis of a K-user Rayleigh block-fading broadcast channel in
//! which every user feeds back a single bit per block, telling the base station
//! whether its channel power gain exceeds a threshold. The bit may be outdated
//! by the time the base station schedules; the staleness is captured by the
//! temporal correlation coefficient `rho` between the channel at estimation
//! and transmission time.
//!
//! Modules:
//!
//! - [`specfun`]: I0, J0, first-order Marcum-Q, normal CDF, incomplete gamma,
//!   exponential integral and adaptive Gauss-Kronrod quadrature.
//! - [`channel`]: correlated envelope pair law, conditional density of the
//!   delayed envelope given a "1" bit, Jakes mapping, pair sampler.
//! - [`ergodic`]: closed-form ergodic sum-rate, its bounds, threshold
//!   policies, wideband and multiplexing-gain characterizations.
//! - [`outage`]: outage probabilities with instantaneous and outdated
//!   feedback, power allocation, diversity-multiplexing tradeoff.
//! - [`mcsim`]: Monte-Carlo simulator of the scheduling protocol used to
//!   cross-validate the closed forms.
//!
//! All rates are in nats per channel use.

// `!(x > 0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod ergodic;
pub mod error;
pub mod mcsim;
pub mod outage;
pub mod scalar;
pub mod specfun;

pub use error::{Error, Result};
pub use scalar::Real;

/// `|1 - |rho||` below this is treated as instantaneous feedback.
pub const DEGENERATE_RHO_TOL: f64 = 1e-9;

pub type CorrelationParams = channel::CorrelationParams<f64>;
pub type FadingPair = channel::FadingPair<f64>;
pub type JakesParams = channel::JakesParams<f64>;
pub type MarcumArgs = specfun::MarcumArgs<f64>;
pub type QuadratureSpec = specfun::QuadratureSpec<f64>;
pub type ErgodicConfig = ergodic::ErgodicConfig<f64>;
pub type ErgodicReport = ergodic::ErgodicReport<f64>;
pub type ThresholdPolicy = ergodic::ThresholdPolicy<f64>;
pub type WidebandReport = ergodic::WidebandReport<f64>;
pub type PowerMode = outage::PowerMode<f64>;
pub type OutageConfig = outage::OutageConfig<f64>;
pub type OutageReport = outage::OutageReport<f64>;
pub type OutdatedTerms = outage::OutdatedTerms<f64>;
pub type DmtCurve = outage::DmtCurve<f64>;
pub type DmtPoint = outage::DmtPoint<f64>;

pub type CorrelationParamsF32 = channel::CorrelationParams<f32>;
pub type MarcumArgsF32 = specfun::MarcumArgs<f32>;
pub type QuadratureSpecF32 = specfun::QuadratureSpec<f32>;
pub type ErgodicConfigF32 = ergodic::ErgodicConfig<f32>;
