use super::{relative_change, Iterate, Recorder, SolveOutput, SolverConfig};
use crate::error::Result;
use crate::linsolve::NormalSystem;
use crate::operators::GradField;
use crate::prox::{group_shrink, ObjectiveParams};
use crate::vecops;

/// Scaled ADMM on `min Σ‖z_i‖ + (μ/2)‖Kx − f‖²  s.t.  z = Dx`.
///
/// Per iteration: `z ← shrink(Dx + λ, 1/ρ)`, then
/// `(ρDᵀD + μKᵀK)x = ρDᵀ(z − λ) + μKᵀf`, then `λ ← λ + Dx − z`.
/// `ρ` defaults to `β`; trace Ψ values are evaluated with `β`.
pub fn admm_solve(
    params: &ObjectiveParams,
    config: &SolverConfig,
    reference: Option<&[f64]>,
) -> Result<SolveOutput> {
    admm_solve_observed(params, config, reference, |_| {})
}

pub fn admm_solve_observed(
    params: &ObjectiveParams,
    config: &SolverConfig,
    reference: Option<&[f64]>,
    mut observer: impl FnMut(&Iterate<'_>),
) -> Result<SolveOutput> {
    config.validate()?;
    let rho = config.admm_rho.unwrap_or(params.beta);
    let sys = NormalSystem::new(
        &params.k,
        &params.d,
        &params.f,
        params.mu,
        rho,
        config.strategy,
    )?;
    let mut rec = Recorder::new(params, config, reference)?;
    let threshold = 1.0 / rho;

    let mut x = params.initial_x()?;
    let mut dx = params.d.apply(&x)?;
    let mut lambda = params.d.zero_field();
    let mut z = dx.clone();
    let mut converged = false;
    let mut iterations = 0;
    let mut solves = Vec::with_capacity(config.max_iter.min(1 << 16));

    for k in 1..=config.max_iter {
        let shifted = GradField::new(dx.n_groups(), dx.group_dim(), add(dx.data(), lambda.data()))?;
        z = group_shrink(&shifted, threshold);
        let target = GradField::new(
            z.n_groups(),
            z.group_dim(),
            vecops::sub(z.data(), lambda.data()),
        )?;
        let x_new = sys.solve_normal(&target)?;
        solves.push(1);
        dx = params.d.apply(&x_new)?;
        for ((l, d), zz) in lambda.data_mut().iter_mut().zip(dx.data()).zip(z.data()) {
            *l += d - zz;
        }
        let rel = relative_change(&x_new, &x);
        x = x_new;
        iterations = k;
        rec.observe(k, &x, &z, rel)?;
        observer(&Iterate {
            k,
            x: &x,
            z: &z,
            zhat: None,
            xbar: None,
            normal: &sys,
        });
        if rel < config.tol {
            converged = true;
            break;
        }
    }
    Ok(rec.finish(x, z, iterations, converged, solves))
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}
