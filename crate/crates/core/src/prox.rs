//! Shrinkage, objective values and the first-order optimality residual.

use crate::error::{check_len, Result, TvError};
use crate::linsolve::NormalSystem;
use crate::operators::{AnalysisOp, GradField, LinearMap};
use crate::vecops;

/// Data of one problem instance: weights `μ`, `β`, operators `K`, `D`, and `f`.
#[derive(Debug, Clone)]
pub struct ObjectiveParams {
    pub mu: f64,
    pub beta: f64,
    pub k: LinearMap,
    pub d: AnalysisOp,
    pub f: Vec<f64>,
}

impl ObjectiveParams {
    pub fn new(mu: f64, beta: f64, k: LinearMap, d: AnalysisOp, f: Vec<f64>) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(TvError::InvalidParameter(format!(
                "mu must be positive, got {mu}"
            )));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(TvError::InvalidParameter(format!(
                "beta must be positive, got {beta}"
            )));
        }
        check_len("K input vs D input", d.input_dim(), k.in_dim())?;
        check_len("observation length", k.out_dim(), f.len())?;
        Ok(Self { mu, beta, k, d, f })
    }

    /// Same instance with a different penalty.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(
            self.mu,
            beta,
            self.k.clone(),
            self.d.clone(),
            self.f.clone(),
        )
    }

    /// Starting point in x-space: `f` itself when `K` is square, `Kᵀf` otherwise.
    pub fn initial_x(&self) -> Result<Vec<f64>> {
        match self.k {
            LinearMap::Dense(_) => self.k.adjoint(&self.f),
            _ => Ok(self.f.clone()),
        }
    }

    pub fn dim(&self) -> usize {
        self.d.input_dim()
    }
}

/// Group soft-thresholding: `max{‖g_i‖ − t, 0}·g_i/‖g_i‖`, with `0·(0/0) = 0`.
pub fn group_shrink(g: &GradField, threshold: f64) -> GradField {
    let n = g.n_groups();
    let d = g.group_dim();
    let mut out = GradField::zeros(n, d);
    for i in 0..n {
        let norm = g.group_norm(i);
        if norm > threshold {
            let scale = (norm - threshold) / norm;
            for j in 0..d {
                out.plane_mut(j)[i] = scale * g.plane(j)[i];
            }
        }
    }
    out
}

/// `Σ‖z_i‖₂`.
pub fn group_norm_sum(z: &GradField) -> f64 {
    vecops::sum((0..z.n_groups()).map(|i| z.group_norm(i)))
}

fn fidelity(x: &[f64], params: &ObjectiveParams) -> Result<f64> {
    let kx = params.k.apply(x)?;
    Ok(0.5 * params.mu * vecops::dist(&kx, &params.f).powi(2))
}

/// `Φ(x) = Σ‖D_i x‖₂ + (μ/2)‖Kx − f‖₂²`.
pub fn objective_phi(x: &[f64], params: &ObjectiveParams) -> Result<f64> {
    check_len("objective x", params.dim(), x.len())?;
    let dx = params.d.apply(x)?;
    Ok(group_norm_sum(&dx) + fidelity(x, params)?)
}

/// `Ψ(x, z) = Σ‖z_i‖₂ + (β/2)Σ‖z_i − D_i x‖₂² + (μ/2)‖Kx − f‖₂²`.
pub fn objective_psi(x: &[f64], z: &GradField, params: &ObjectiveParams) -> Result<f64> {
    check_len("objective x", params.dim(), x.len())?;
    let dx = params.d.apply(x)?;
    z.same_shape(&dx)?;
    let coupling = 0.5 * params.beta * vecops::dist(z.data(), dx.data()).powi(2);
    Ok(group_norm_sum(z) + coupling + fidelity(x, params)?)
}

/// Optimality residual of an accelerated iterate `(x, z)` produced from `ẑ`.
///
/// Returns the larger of
/// - the primal part `‖Wx − Dᵀz − b‖₂ / (1 + ‖b‖₂)`, and
/// - the worst per-group dual part of `0 ∈ ∂‖z_i‖ + βr_i` with
///   `r = (z − Dx) + DW⁻¹Dᵀ(z − ẑ)`: `‖z_i/‖z_i‖ + βr_i‖` for nonzero groups
///   and `max{β‖r_i‖ − 1, 0}` for zero groups.
pub fn kkt_residual(
    x: &[f64],
    z: &GradField,
    zhat: &GradField,
    params: &ObjectiveParams,
    normal: &NormalSystem,
) -> Result<f64> {
    check_len("kkt x", params.dim(), x.len())?;
    z.same_shape(zhat)?;

    let wx = normal.apply_w(x)?;
    let rhs = normal.rhs(z)?;
    let primal = vecops::dist(&wx, &rhs) / (1.0 + vecops::norm(normal.b()));

    let dx = params.d.apply(x)?;
    z.same_shape(&dx)?;
    let diff = GradField::new(
        z.n_groups(),
        z.group_dim(),
        vecops::sub(z.data(), zhat.data()),
    )?;
    let coupled = params
        .d
        .apply(&normal.solve_rhs(&params.d.adjoint(&diff)?)?)?;
    let r: Vec<f64> = z
        .data()
        .iter()
        .zip(dx.data())
        .zip(coupled.data())
        .map(|((zi, dxi), ci)| zi - dxi + ci)
        .collect();
    let r = GradField::new(z.n_groups(), z.group_dim(), r)?;

    let beta = params.beta;
    let mut dual: f64 = 0.0;
    for i in 0..z.n_groups() {
        let zn = z.group_norm(i);
        let res = if zn > 0.0 {
            let mut s = 0.0;
            for j in 0..z.group_dim() {
                let v = z.plane(j)[i] / zn + beta * r.plane(j)[i];
                s += v * v;
            }
            s.sqrt()
        } else {
            (beta * r.group_norm(i) - 1.0).max(0.0)
        };
        dual = dual.max(res);
    }
    Ok(primal.max(dual))
}
