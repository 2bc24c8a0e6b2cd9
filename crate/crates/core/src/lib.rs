//! Explicit constructions of solenoidal Beltrami fields, generalized Beltrami
//! fields, ideal MHD equilibria and steady Euler flows, together with a
//! finite-difference verification toolkit for every identity they satisfy.
//!
//! The crate is organised bottom-up:
//!
//! - [`charts`]: orthogonal curvilinear coordinate systems and the
//!   harmonic-reduction hypothesis check.
//! - [`harmonic`]: harmonic-conjugate pairs on the reduced plane.
//! - [`fields`]: the four families of constructed fields and the
//!   method-of-characteristics solver.
//! - [`calculus`]: central-difference operators and residual suites.
//! - [`flow`]: RK4 field-line tracing and invariant drift.
//! - [`export`]: CSV and legacy VTK writers.
//! - [`cli`]: catalog listing, sampling, figure data and the verification
//!   runner behind the `beltrami` binary.

pub mod calculus;
pub mod charts;
pub mod cli;
pub mod export;
pub mod fields;
pub mod flow;
pub mod harmonic;
pub mod sampling;

mod error;

pub use error::Error;

/// Cartesian point or vector.
pub type Vec3 = nalgebra::Vector3<f64>;

pub type Result<T, E = Error> = std::result::Result<T, E>;
