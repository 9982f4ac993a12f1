use super::{relative_change, Iterate, Recorder, SolveOutput, SolverConfig};
use crate::error::Result;
use crate::linsolve::NormalSystem;
use crate::prox::{group_shrink, ObjectiveParams};

/// Classical alternating minimization: `z ← shrink(Dx)`, then `x ← W⁻¹(Dᵀz + b)`.
///
/// Starts from `x⁰ = f` (or `Kᵀf` for a dense `K`). Each sweep is an exact
/// block minimization of Ψ, so Ψ never increases.
pub fn am_solve(
    params: &ObjectiveParams,
    config: &SolverConfig,
    reference: Option<&[f64]>,
) -> Result<SolveOutput> {
    am_solve_observed(params, config, reference, |_| {})
}

pub fn am_solve_observed(
    params: &ObjectiveParams,
    config: &SolverConfig,
    reference: Option<&[f64]>,
    mut observer: impl FnMut(&Iterate<'_>),
) -> Result<SolveOutput> {
    config.validate()?;
    let sys = NormalSystem::new(
        &params.k,
        &params.d,
        &params.f,
        params.mu,
        params.beta,
        config.strategy,
    )?;
    let mut rec = Recorder::new(params, config, reference)?;
    let threshold = 1.0 / params.beta;

    let mut x = params.initial_x()?;
    let mut z = params.d.zero_field();
    let mut converged = false;
    let mut iterations = 0;
    let mut solves = Vec::with_capacity(config.max_iter.min(1 << 16));

    for k in 1..=config.max_iter {
        z = group_shrink(&params.d.apply(&x)?, threshold);
        let x_new = sys.solve_normal(&z)?;
        solves.push(1);
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
