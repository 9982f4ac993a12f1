//! Rate bounds and the ε-driven choice of β for the symmetric solver, plus
//! long-run reference solutions used to evaluate them.

use super::{admm_solve, sam_solve, SolverConfig};
use crate::error::{Result, TvError};
use crate::linsolve::NormalSystem;
use crate::operators::GradField;
use crate::prox::{objective_phi, objective_psi, ObjectiveParams};
use crate::vecops;

/// `β = 32C/ε²` and the iteration budget
/// `K = max{16√C‖z⁰ − z*_β‖₂/ε^{1.5} − 1, 1}` that make `Φ(xᴷ) − Φ* ≤ ε`
/// whenever `Ψ(xᵏ, zᵏ) ≤ C` along the run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonSchedule {
    pub beta: f64,
    pub k_bound: f64,
}

impl EpsilonSchedule {
    /// Whole number of iterations covering `k_bound`.
    pub fn iterations(&self) -> usize {
        self.k_bound.ceil() as usize
    }
}

pub fn beta_for_epsilon(c: f64, epsilon: f64, z_dist: f64) -> Result<EpsilonSchedule> {
    if !(c > 0.0 && epsilon > 0.0 && z_dist >= 0.0)
        || !(c.is_finite() && epsilon.is_finite() && z_dist.is_finite())
    {
        return Err(TvError::InvalidParameter(format!(
            "need C > 0, epsilon > 0 and a finite distance, got C={c}, epsilon={epsilon}, dist={z_dist}"
        )));
    }
    let beta = 32.0 * c / (epsilon * epsilon);
    let k_bound = (16.0 * c.sqrt() * z_dist / epsilon.powf(1.5) - 1.0).max(1.0);
    Ok(EpsilonSchedule { beta, k_bound })
}

/// `‖v‖²_Q` with `Q = I + DW⁻¹Dᵀ`, i.e. `‖v‖² + ⟨Dᵀv, W⁻¹Dᵀv⟩`.
pub fn q_norm_sq(sys: &NormalSystem, v: &GradField) -> Result<f64> {
    let dtv = sys.analysis().adjoint(v)?;
    let w_inv = sys.solve_rhs(&dtv)?;
    Ok(vecops::norm_sq(v.data()) + vecops::dot(&dtv, &w_inv))
}

/// Right-hand side `2β‖z⁰ − z*‖²_Q / (k + 1)²`.
pub fn rate_bound(k: usize, beta: f64, q_norm_sq: f64) -> f64 {
    2.0 * beta * q_norm_sq / ((k + 1) as f64).powi(2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    /// Largest `(Ψ(xᵏ,zᵏ) − Ψ*) / bound(k)` over the trace.
    pub worst_ratio: f64,
    pub first_violation: Option<usize>,
    pub q_norm_sq: f64,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks `Ψ(xᵏ,zᵏ) − Ψ* ≤ 2β‖z⁰ − z*_β‖²_Q/(k+1)²` for every entry of
/// `psi` (entry `i` is iteration `k = i + 1`).
pub fn convergence_bound_check(
    psi: &[f64],
    psi_star: f64,
    z0: &GradField,
    z_star: &GradField,
    sys: &NormalSystem,
    beta: f64,
) -> Result<BoundCheck> {
    z0.same_shape(z_star)?;
    let diff = GradField::new(
        z0.n_groups(),
        z0.group_dim(),
        vecops::sub(z0.data(), z_star.data()),
    )?;
    let q = q_norm_sq(sys, &diff)?;
    let mut worst_ratio = f64::NEG_INFINITY;
    let mut first_violation = None;
    for (i, &p) in psi.iter().enumerate() {
        let k = i + 1;
        let bound = rate_bound(k, beta, q);
        let gap = p - psi_star;
        worst_ratio = worst_ratio.max(gap / bound);
        if gap > bound && first_violation.is_none() {
            first_violation = Some(k);
        }
    }
    Ok(BoundCheck {
        worst_ratio,
        first_violation,
        q_norm_sq: q,
    })
}

/// A long-run reference solution.
#[derive(Debug, Clone)]
pub struct Reference {
    pub x: Vec<f64>,
    pub z: GradField,
    pub psi: f64,
    pub phi: f64,
}

/// Minimizer of Ψ from an iteration-capped run of the symmetric solver.
pub fn penalized_reference(params: &ObjectiveParams, iterations: usize) -> Result<Reference> {
    let out = sam_solve(params, &SolverConfig::fixed(iterations), None)?;
    Ok(Reference {
        psi: objective_psi(&out.x, &out.z, params)?,
        phi: objective_phi(&out.x, params)?,
        x: out.x,
        z: out.z,
    })
}

/// Minimizer of Φ from an iteration-capped ADMM run with penalty `rho`.
pub fn constrained_reference(
    params: &ObjectiveParams,
    iterations: usize,
    rho: f64,
) -> Result<Reference> {
    let config = SolverConfig {
        admm_rho: Some(rho),
        ..SolverConfig::fixed(iterations)
    };
    let out = admm_solve(params, &config, None)?;
    Ok(Reference {
        psi: objective_psi(&out.x, &out.z, params)?,
        phi: objective_phi(&out.x, params)?,
        x: out.x,
        z: out.z,
    })
}
