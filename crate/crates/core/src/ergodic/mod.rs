//! Ergodic sum-rate of the threshold-feedback scheduler.
//!
//! Every user reports `1` when its channel power `v²` is at least `alpha`.
//! The base station picks one of the `1` users at random and transmits with
//! power `P`; when nobody reports `1` it stays silent. The rate is paid on
//! the delayed channel `v_tau`.

mod rate;
mod threshold;
mod wideband;

pub use rate::{
    ergodic_report, full_csi_rate, no_csi_rate, prob_none_above, prob_some_above, sum_rate,
    sum_rate_lower, sum_rate_upper, ErgodicConfig, ErgodicReport,
};
pub use threshold::{
    bracket_asymptotic, bracket_exact, degradation_estimate, optimal_threshold, scaling_ratio,
    suboptimal_threshold, ThresholdPolicy,
};
pub use wideband::{
    affine_rate_approx, multiplexing_gain_bounds, power_for_ebn0, solve_power_for_ebn0,
    wideband_metrics, wideband_threshold, WidebandReport,
};
