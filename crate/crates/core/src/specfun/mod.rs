//! Special functions and numerical integration.

mod bessel;
mod gamma;
mod marcum;
mod normal;
mod quadrature;

pub use bessel::{bessel_i0, bessel_i0_scaled, bessel_j0};
pub use gamma::{erfc, exp_e1, gamma_p, gamma_q, ln_gamma};
pub use marcum::{
    marcum_q1, marcum_q1_asymptotic, marcum_q1_asymptotic_exp, marcum_q1_bounds, MarcumArgs,
};
pub use normal::{std_normal_cdf, std_normal_sf};
pub use quadrature::{
    integrate, integrate_semi_infinite, integrate_semi_infinite_bounded, QuadratureSpec,
};

pub(crate) use bessel::i0_scaled;
pub(crate) use marcum::q1;
