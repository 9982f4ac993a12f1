//! Iterative drivers: alternating minimization, its symmetric accelerated
//! variant, and scaled ADMM, plus stopping logic and trace recording.

mod admm;
mod am;
mod momentum;
mod sam;
pub mod theory;
mod trace;

pub use admm::{admm_solve, admm_solve_observed};
pub use am::{am_solve, am_solve_observed};
pub use momentum::{momentum_next, MomentumState};
pub use sam::{sam_solve, sam_solve_observed};
pub use trace::{SolverTrace, TraceRecord, TRACE_HEADER};

use std::time::Instant;

use crate::error::{Result, TvError};
use crate::imaging::snr_db_slice;
use crate::linsolve::{NormalSystem, Strategy};
use crate::operators::GradField;
use crate::prox::{objective_phi, objective_psi, ObjectiveParams};
use crate::vecops;

/// How the symmetric solver obtains `x̄ᵏ` once `k > 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepOne {
    /// `x̄ᵏ = xᵏ⁻¹ + τ_{k−1}(xᵏ⁻¹ − xᵏ⁻²)`: one normal solve per iteration.
    #[default]
    Extrapolate,
    /// Solve the normal equations with `z = ẑᵏ` every iteration.
    ExplicitSolve,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Relative-change tolerance ζ; zero runs exactly `max_iter` iterations.
    pub tol: f64,
    pub max_iter: usize,
    /// Report the lowest-Ψ iterate instead of the last one.
    pub monotone: bool,
    pub record_trace: bool,
    pub step_one: StepOne,
    /// ADMM penalty ρ; defaults to β.
    pub admm_rho: Option<f64>,
    /// Force a normal-equation route instead of the automatic choice.
    pub strategy: Option<Strategy>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-3,
            max_iter: 500,
            monotone: false,
            record_trace: true,
            step_one: StepOne::Extrapolate,
            admm_rho: None,
            strategy: None,
        }
    }
}

impl SolverConfig {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        Self {
            tol,
            max_iter,
            ..Self::default()
        }
    }

    /// Iteration-capped run without stopping test or trace.
    pub fn fixed(iterations: usize) -> Self {
        Self {
            tol: 0.0,
            max_iter: iterations,
            record_trace: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol >= 0.0 && self.tol < 1.0) {
            return Err(TvError::InvalidParameter(format!(
                "tol must lie in [0, 1), got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(TvError::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        if let Some(rho) = self.admm_rho {
            if !(rho > 0.0 && rho.is_finite()) {
                return Err(TvError::InvalidParameter(format!(
                    "ADMM rho must be positive, got {rho}"
                )));
            }
        }
        Ok(())
    }
}

/// Result of a solver run.
#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub x: Vec<f64>,
    pub z: GradField,
    pub iterations: usize,
    pub converged: bool,
    pub trace: SolverTrace,
    /// Normal-equation solves performed in each iteration.
    pub solves_per_iter: Vec<usize>,
    /// Iteration whose iterate is reported (differs from `iterations` only
    /// for monotone runs).
    pub reported_iter: usize,
}

/// View of the state at the end of iteration `k`, passed to observers.
#[derive(Debug)]
pub struct Iterate<'a> {
    pub k: usize,
    pub x: &'a [f64],
    pub z: &'a GradField,
    /// `ẑᵏ` (symmetric solver only).
    pub zhat: Option<&'a GradField>,
    /// `x̄ᵏ` (symmetric solver only).
    pub xbar: Option<&'a [f64]>,
    pub normal: &'a NormalSystem,
}

/// `‖x_new − x_old‖₂ / max{1, ‖x_old‖₂}`.
pub fn relative_change(x_new: &[f64], x_old: &[f64]) -> f64 {
    vecops::dist(x_new, x_old) / vecops::norm(x_old).max(1.0)
}

/// The stopping rule: true iff the relative change is strictly below `tol`.
pub fn stop_check(x_new: &[f64], x_old: &[f64], tol: f64) -> bool {
    relative_change(x_new, x_old) < tol
}

/// Shared bookkeeping for trace rows and best-iterate tracking.
struct Recorder<'a> {
    params: &'a ObjectiveParams,
    reference: Option<&'a [f64]>,
    record: bool,
    monotone: bool,
    start: Instant,
    trace: SolverTrace,
    best: Option<(f64, usize, Vec<f64>, GradField)>,
}

impl<'a> Recorder<'a> {
    fn new(
        params: &'a ObjectiveParams,
        config: &SolverConfig,
        reference: Option<&'a [f64]>,
    ) -> Result<Self> {
        if let Some(r) = reference {
            crate::error::check_len("reference signal", params.dim(), r.len())?;
        }
        Ok(Self {
            params,
            reference,
            record: config.record_trace,
            monotone: config.monotone,
            start: Instant::now(),
            trace: SolverTrace::default(),
            best: None,
        })
    }

    fn observe(&mut self, k: usize, x: &[f64], z: &GradField, rel_change: f64) -> Result<()> {
        if !self.record && !self.monotone {
            return Ok(());
        }
        let psi = objective_psi(x, z, self.params)?;
        if self.monotone && self.best.as_ref().is_none_or(|b| psi < b.0) {
            self.best = Some((psi, k, x.to_vec(), z.clone()));
        }
        if self.record {
            let phi = objective_phi(x, self.params)?;
            let snr_db = self.reference.map(|r| snr_db_slice(x, r));
            self.trace.records.push(TraceRecord {
                k,
                psi,
                phi,
                snr_db,
                rel_change,
                time_s: self.start.elapsed().as_secs_f64(),
            });
        }
        Ok(())
    }

    fn finish(
        self,
        x: Vec<f64>,
        z: GradField,
        iterations: usize,
        converged: bool,
        solves_per_iter: Vec<usize>,
    ) -> SolveOutput {
        let (x, z, reported_iter) = match self.best {
            Some((_, k, bx, bz)) if self.monotone => (bx, bz, k),
            _ => (x, z, iterations),
        };
        SolveOutput {
            x,
            z,
            iterations,
            converged,
            trace: self.trace,
            solves_per_iter,
            reported_iter,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stop_rule_boundaries() {
        let x = [0.3, -0.4];
        assert!(stop_check(&x, &x, 1e-12));
        // ‖x_old‖ = 0.5, step 1e-3: denominator is 1 and 1e-3 < 1e-3 fails
        let x_old = [0.5, 0.0];
        let x_new = [0.5, 1e-3];
        assert!(!stop_check(&x_new, &x_old, 1e-3));
        assert!(stop_check(&x_new, &x_old, 1.0001e-3));
        assert!(!stop_check(&[0.0, 0.0], &[0.0, 0.0], 0.0));
        let big = [30.0, 40.0];
        assert!((relative_change(&[30.0, 40.5], &big) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(1e-3, 10).validate().is_ok());
        assert!(SolverConfig::new(0.0, 10).validate().is_ok());
        assert!(SolverConfig::new(1.0, 10).validate().is_err());
        assert!(SolverConfig::new(-1e-3, 10).validate().is_err());
        assert!(SolverConfig::new(1e-3, 0).validate().is_err());
        let c = SolverConfig {
            admm_rho: Some(0.0),
            ..SolverConfig::default()
        };
        assert!(c.validate().is_err());
    }
}
