use super::{
    relative_change, Iterate, MomentumState, Recorder, SolveOutput, SolverConfig, StepOne,
};
use crate::error::Result;
use crate::linsolve::NormalSystem;
use crate::operators::GradField;
use crate::prox::{group_shrink, ObjectiveParams};
use crate::vecops;

/// Symmetric alternating minimization with momentum on `z`.
///
/// Iteration `k` runs `x̄ᵏ → zᵏ → xᵏ`:
/// 1. `x̄ᵏ = W⁻¹(Dᵀẑᵏ + b)`; for `k > 2` this equals
///    `xᵏ⁻¹ + τ_{k−1}(xᵏ⁻¹ − xᵏ⁻²)` because `Wxʲ = Dᵀzʲ + b`, so no solve is needed;
/// 2. `zᵏ = shrink(Dx̄ᵏ, 1/β)`;
/// 3. `xᵏ = W⁻¹(Dᵀzᵏ + b)`;
/// 4. `ẑᵏ⁺¹ = zᵏ + τ_k(zᵏ − zᵏ⁻¹)` with FISTA weights.
///
/// `z⁰ = Dx⁰` where `x⁰` is `f` (or `Kᵀf` for a dense `K`), and `ẑ¹ = z⁰`.
pub fn sam_solve(
    params: &ObjectiveParams,
    config: &SolverConfig,
    reference: Option<&[f64]>,
) -> Result<SolveOutput> {
    sam_solve_observed(params, config, reference, |_| {})
}

pub fn sam_solve_observed(
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

    let x0 = params.initial_x()?;
    let z0 = params.d.apply(&x0)?;

    let mut x_prev = x0; // x^{k-1}
    let mut x_prev2: Option<Vec<f64>> = None; // x^{k-2}
    let mut z_prev = z0.clone(); // z^{k-1}
    let mut zhat = z0; // ẑ^k
    let mut momentum = MomentumState::new();
    let mut tau_prev = 0.0; // τ_{k-1}
    let mut converged = false;
    let mut iterations = 0;
    let mut solves = Vec::with_capacity(config.max_iter.min(1 << 16));

    for k in 1..=config.max_iter {
        let mut n_solves = 0;
        let xbar = match (&x_prev2, config.step_one) {
            (Some(x2), StepOne::Extrapolate) if k > 2 => vecops::extrapolate(&x_prev, x2, tau_prev),
            _ => {
                n_solves += 1;
                sys.solve_normal(&zhat)?
            }
        };
        let z = group_shrink(&params.d.apply(&xbar)?, threshold);
        let x = sys.solve_normal(&z)?;
        n_solves += 1;
        solves.push(n_solves);

        momentum = momentum.next();
        let tau = momentum.tau();
        let zhat_next = GradField::new(
            z.n_groups(),
            z.group_dim(),
            vecops::extrapolate(z.data(), z_prev.data(), tau),
        )?;

        let rel = relative_change(&x, &x_prev);
        iterations = k;
        rec.observe(k, &x, &z, rel)?;
        observer(&Iterate {
            k,
            x: &x,
            z: &z,
            zhat: Some(&zhat),
            xbar: Some(&xbar),
            normal: &sys,
        });

        x_prev2 = Some(std::mem::replace(&mut x_prev, x));
        z_prev = z;
        zhat = zhat_next;
        tau_prev = tau;
        if rel < config.tol {
            converged = true;
            break;
        }
    }
    Ok(rec.finish(x_prev, z_prev, iterations, converged, solves))
}
