//! Shared numerical kernels: adaptive quadrature, bracketed root finding,
//! a damped Newton solver for small systems, an adaptive ODE stepper and a
//! dense symmetric generalized eigensolver.
//!
//! Everything here is pure and reentrant; callers may parallelize over
//! parameter sweeps.

mod eig;
mod ode;
mod quadrature;
mod roots;
mod spline;

pub use eig::sym_generalized_eig;
pub use ode::{integrate_ode2, OdeSpec};
pub use quadrature::{integrate, QuadratureSpec};
pub use roots::{find_root, newton_system, RootSpec};
pub use spline::CubicSpline;
