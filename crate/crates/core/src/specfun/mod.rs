//! Special functions: cylinder and spherical Bessel functions, Legendre
//! functions, the integral sine, and root tables for transcendental
//! characteristic equations.

mod bessel;
mod errorfn;
mod legendre;
mod sine_integral;
mod spherical;
mod zeros;

pub use bessel::{
    bessel_j, bessel_j_eval, bessel_j_prime, bessel_n, bessel_n_eval, bessel_n_prime, SERIES_SWITCH,
};
pub use errorfn::{erf, erfc, erfcx};
pub use legendre::{assoc_legendre, assoc_legendre_norm_sq, legendre, legendre_p, legendre_q, LegendreKind};
pub use sine_integral::{integral_sine, integral_sine_eval};
pub use spherical::{spherical_bessel, spherical_j, spherical_y, SphericalKind};
pub use zeros::{bessel_zero, zero_table, ZeroFamily, ZeroTable};

/// A special-function value with the truncation bound of the route used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub argument: f64,
    pub order: u32,
    pub value: f64,
    pub abs_error_bound: f64,
}
