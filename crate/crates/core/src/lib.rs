//! Mesh-free solver for piecewise-continuous function approximation and
//! elliptic interface problems with discontinuous solutions.
//!
//! The solution is modeled by a one-hidden-layer network that takes an
//! augmented input `(x, z)`, where the extra coordinate `z = ±1` labels which
//! side of the interface a point belongs to. Training minimizes a
//! least-squares collocation loss (equation residual, boundary condition,
//! and interface jump conditions) with a full-batch Levenberg-Marquardt
//! optimizer using an SVD-factored damped step.
//!
//! Modules:
//! - [`network`]: the shallow augmented network, its closed-form derivatives
//!   and parameter Jacobians.
//! - [`optimizer`]: damped least-squares (Levenberg-Marquardt) training.
//! - [`geometry`]: domains, interfaces, classification, normals, and
//!   collocation sampling.
//! - [`problems`]: residual models for function fitting and the augmented
//!   interface problem, manufactured solutions, testing errors, and the
//!   shipped experiment presets.
//! - [`harness`]: run configuration, end-to-end execution, and sweep tables.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod network;
pub mod optimizer;
pub mod problems;
#[doc(hidden)]
pub mod testing;

pub use error::{Error, Result};

// Link the system BLAS/LAPACK used by the SVD factorization.
use openblas_src as _;
