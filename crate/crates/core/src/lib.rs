//! Spectral methods for separable boundary-value problems.
//!
//! The crate is organised by problem family:
//!
//! * [`specfun`]: Bessel, Neumann, spherical Bessel and Legendre functions,
//!   the integral sine and zero tables.
//! * [`sturm`]: Sturm–Liouville eigenproblems on an interval.
//! * [`waves1d`]: strings and rods (d'Alembert, continuation, modal sums,
//!   damping, Green's functions, Gibbs sums).
//! * [`beams`]: Euler–Bernoulli beam spectra and buckling.
//! * [`heat1d`]: diffusion kernels on line, half-line and interval.
//! * [`geomnd`]: rectangles, disks, cylinders and balls.
//! * [`weyl`]: eigenvalue counting and Weyl asymptotics.
//! * [`varsolve`]: classic variational problems.
//!
//! Batch work goes through [`par`], which uses rayon when the `parallel`
//! feature is on and a plain loop otherwise; the two give identical results.

// NaN parameters must fail validation, so range checks are written negated.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beams;
pub mod error;
pub mod geomnd;
pub mod heat1d;
pub mod par;
pub mod quad;
pub mod roots;
pub mod specfun;
pub mod sturm;
pub mod varsolve;
pub mod waves1d;
pub mod weyl;

pub use error::{Error, Result};
pub use par::Exec;

/// Shared single-variable function type used for coefficients and data.
pub type Func = std::sync::Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Wrap a closure as a [`Func`].
pub fn func<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Func {
    std::sync::Arc::new(f)
}
