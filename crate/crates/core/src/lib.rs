//! Certified bounds on the minimal squared L² norm of an autoconvolution.
//!
//! For unit-mass functions `f` supported on `[-1/2, 1/2]` the crate
//! minimizes `‖f∗f‖₂²` over even trigonometric polynomials of bounded
//! degree, turns a computed minimizer into one-sided bounds with explicit
//! tail budgets, and evaluates the arcsine-type family `α_c (1/4 − x²)^{−c}`
//! together with the additive-energy and `B_h[g]` constants that follow
//! from a lower bound.
//!
//! Module map:
//! - [`spectral`]: coefficients, objective, gradient, period-two spectrum,
//!   autoconvolution and threefold-convolution curves;
//! - [`solver`]: limited-memory quasi-Newton minimization of the truncated
//!   objective;
//! - [`certify`]: upper and Hölder-dual lower bound certificates;
//! - [`family`]: Bessel-series evaluation of the arcsine family;
//! - [`discrete`]: additive energy, the step-function embedding and the
//!   `σ_h(g)` bounds;
//! - [`io`]: solution files and JSON reports.

pub mod certify;
pub mod discrete;
mod error;
pub mod family;
pub mod io;
pub mod numeric;
pub mod reference;
pub mod solver;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{FourierCoefficients, ObjectiveBreakdown};
