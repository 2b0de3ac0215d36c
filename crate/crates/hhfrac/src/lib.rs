//! Numerical toolkit for Hadamard-type fractional calculus in logarithmic time.
//!
//! Everything is computed in the variable `s = log(t/a)`, where the Hadamard
//! fractional integrals and derivatives become Riemann-Liouville-type
//! convolutions with kernel `s^(alpha-1)` and the operator `t d/dt` becomes
//! `d/ds`. This change of variables is exact, so the singular kernels are
//! integrated against graded meshes with product quadrature and no kernel is
//! ever discretized against a nonuniform `t`-mesh.
//!
//! Modules:
//! - [`grid`]: graded log-time grids, sampled functions, the `t d/dt` operator.
//! - [`special`]: the gamma function.
//! - [`cutoff`]: quintic smoothstep and the plateau cutoff profile.
//! - [`hadamard`]: left/right fractional integrals and derivatives, the
//!   two-parameter interpolated derivative.
//! - [`spaces`]: weighted sup and Lebesgue norms, a membership diagnostic.
//! - [`laws`]: numerical verifiers for the operator identities
//!   (integration by parts, semigroup, representation, regularization).
//! - [`testfn`]: time/space cutoff pair, the right-sided derivative identity,
//!   the transition-zone decay functional and the annulus scaling integral.
//! - [`cert`]: critical-exponent arithmetic, hypothesis audit, weak-form
//!   residual.
//! - [`solver`]: desk-scale solver for the semilinear pseudo-parabolic
//!   problem with weighted initial data and blow-up detection.
//!
//! The crate is `no_std` (with `alloc`); enable the `std` feature to get
//! `std::error::Error` on [`Error`].

#![no_std]

extern crate alloc;

#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod cert;
pub mod cutoff;
pub mod error;
pub mod grid;
pub mod hadamard;
pub mod laws;
pub mod solver;
pub mod spaces;
pub mod special;
pub mod testfn;

pub use error::{Error, Result};
pub use grid::{GridFn, LogGrid};
pub use hadamard::FracParams;
