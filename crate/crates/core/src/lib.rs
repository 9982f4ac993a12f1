//! Total-variation restoration and analysis-sparse recovery.
//!
//! The crate solves
//!
//! ```text
//! min_x  Σ_i ‖D_i x‖₂ + (μ/2)‖Kx − f‖₂²
//! ```
//!
//! through its quadratic-penalty splitting
//!
//! ```text
//! min_{x,z}  Σ_i ‖z_i‖₂ + (β/2)Σ_i ‖z_i − D_i x‖₂² + (μ/2)‖Kx − f‖₂²
//! ```
//!
//! with three drivers: plain alternating minimization ([`solvers::am_solve`]),
//! the symmetric accelerated variant that sweeps `x̄ → z → x` with FISTA
//! momentum on `z` ([`solvers::sam_solve`]), and a scaled ADMM baseline on the
//! constrained form ([`solvers::admm_solve`]).
//!
//! Operators live in [`operators`] (periodic finite differences, circulant
//! blurs, dense measurement and analysis matrices). The x-subproblem is
//! handled by [`linsolve::NormalSystem`], which picks an FFT, Woodbury or CG
//! route from the operator structure. [`imaging`] covers NetPBM I/O,
//! degradation and SNR, and [`harness`] drives the benchmark suites.

pub mod error;
pub mod harness;
pub mod imaging;
pub mod linsolve;
pub mod operators;
pub mod prox;
pub mod solvers;
pub mod vecops;

pub use error::{Result, TvError};
pub use operators::{AnalysisOp, CirculantOp, DenseOp, GradField, Image, KernelSpec, LinearMap};
