//! Solves the x-subproblem `(DᵀD + (μ/β)KᵀK) x = Dᵀz + (μ/β)Kᵀf`.
//!
//! Three routes are available:
//! - spectral: `K` circulant and `D` periodic differences, so `W` is
//!   diagonal in the Fourier basis and the solve is exact;
//! - Woodbury: `DᵀD = I` and `K` dense with fewer rows than columns, so
//!   `W⁻¹ = I − cKᵀ(I + cKKᵀ)⁻¹K` with a cached `m`×`m` Cholesky factor;
//! - CG: unpreconditioned conjugate gradients on `W` for everything else.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_len, Result, TvError};
use crate::operators::{AnalysisOp, Fft2, GradField, LinearMap};
use crate::prox::ObjectiveParams;
use crate::vecops;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Spectral,
    Woodbury,
    Cg,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Spectral => "spectral",
            Strategy::Woodbury => "woodbury",
            Strategy::Cg => "cg",
        })
    }
}

/// Stopping parameters for the CG route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgParams {
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone)]
enum Route {
    Spectral { fft: Fft2, eigs_w: Vec<f64> },
    Woodbury { gram: Cholesky<f64, Dyn> },
    Cg(CgParams),
}

/// `W = DᵀD + cKᵀK` with `c = μ/β`, bound to one solve route.
///
/// Immutable once built; every method takes `&self`.
#[derive(Debug, Clone)]
pub struct NormalSystem {
    ratio: f64,
    k: LinearMap,
    d: AnalysisOp,
    b: Vec<f64>,
    route: Route,
}

/// Which route the automatic rule picks for a (K, D) pair.
pub fn select_strategy(k: &LinearMap, d: &AnalysisOp) -> Strategy {
    if spectral_compatible(k, d) {
        Strategy::Spectral
    } else if woodbury_compatible(k, d) {
        Strategy::Woodbury
    } else {
        Strategy::Cg
    }
}

fn spectral_compatible(k: &LinearMap, d: &AnalysisOp) -> bool {
    match (k, d) {
        (LinearMap::Identity(n), AnalysisOp::TvPeriodic { .. }) => *n == d.input_dim(),
        (
            LinearMap::Circulant { op, channels },
            AnalysisOp::TvPeriodic {
                height,
                width,
                channels: dc,
            },
        ) => op.dims() == (*height, *width) && channels == dc,
        _ => false,
    }
}

fn woodbury_compatible(k: &LinearMap, d: &AnalysisOp) -> bool {
    matches!(k, LinearMap::Dense(m) if m.rows() < m.cols()) && d.has_orthonormal_columns()
}

impl NormalSystem {
    /// Builds the system for the penalty `params.beta` with the automatic route.
    pub fn build(params: &ObjectiveParams) -> Result<Self> {
        Self::new(
            &params.k,
            &params.d,
            &params.f,
            params.mu,
            params.beta,
            None,
        )
    }

    /// Builds `DᵀD + (mu/penalty)KᵀK`, optionally forcing a route.
    pub fn new(
        k: &LinearMap,
        d: &AnalysisOp,
        f: &[f64],
        mu: f64,
        penalty: f64,
        strategy: Option<Strategy>,
    ) -> Result<Self> {
        if !(mu > 0.0 && penalty > 0.0 && mu.is_finite() && penalty.is_finite()) {
            return Err(TvError::InvalidParameter(format!(
                "mu and the penalty must be positive, got mu={mu}, penalty={penalty}"
            )));
        }
        check_len("forward/analysis input", d.input_dim(), k.in_dim())?;
        check_len("observation", k.out_dim(), f.len())?;
        let ratio = mu / penalty;
        let mut b = k.adjoint(f)?;
        b.iter_mut().for_each(|v| *v *= ratio);

        let strategy = match strategy {
            Some(s) => s,
            None => select_strategy(k, d),
        };
        let route = match strategy {
            Strategy::Spectral => {
                if !spectral_compatible(k, d) {
                    return Err(TvError::InvalidParameter(
                        "spectral route needs a circulant K and periodic TV on the same grid"
                            .into(),
                    ));
                }
                Self::spectral_route(k, d, ratio)?
            }
            Strategy::Woodbury => {
                if !woodbury_compatible(k, d) {
                    return Err(TvError::InvalidParameter(
                        "woodbury route needs DᵀD = I and a dense K with m < n".into(),
                    ));
                }
                let LinearMap::Dense(km) = k else {
                    unreachable!()
                };
                let m = km.matrix();
                let mut gram = m * m.transpose();
                gram *= ratio;
                for i in 0..gram.nrows() {
                    gram[(i, i)] += 1.0;
                }
                let gram = Cholesky::new(gram).ok_or_else(|| {
                    TvError::SingularNormal("I + cKKᵀ is not positive definite".into())
                })?;
                Route::Woodbury { gram }
            }
            Strategy::Cg => {
                check_null_space_for_cg(k, d)?;
                let n = d.input_dim();
                Route::Cg(CgParams {
                    tol: 1e-10,
                    max_iter: 10 * n,
                })
            }
        };
        Ok(Self {
            ratio,
            k: k.clone(),
            d: d.clone(),
            b,
            route,
        })
    }

    fn spectral_route(k: &LinearMap, d: &AnalysisOp, ratio: f64) -> Result<Route> {
        let AnalysisOp::TvPeriodic { height, width, .. } = *d else {
            unreachable!()
        };
        let fft = Fft2::new(height, width);
        let mut eigs_w = Vec::with_capacity(height * width);
        for l in 0..width {
            let sx = (std::f64::consts::PI * l as f64 / width as f64).sin();
            for kk in 0..height {
                let sy = (std::f64::consts::PI * kk as f64 / height as f64).sin();
                let i = l * height + kk;
                let blur = match k {
                    LinearMap::Circulant { op, .. } => op.eigs()[i].norm_sqr(),
                    _ => 1.0,
                };
                eigs_w.push(4.0 * sx * sx + 4.0 * sy * sy + ratio * blur);
            }
        }
        let max = eigs_w.iter().cloned().fold(0.0, f64::max);
        let min = eigs_w.iter().cloned().fold(f64::INFINITY, f64::min);
        if min.is_nan() || min <= 1e-14 * max {
            return Err(TvError::SingularNormal(format!(
                "smallest eigenvalue {min:e} vs largest {max:e}; K annihilates constant images"
            )));
        }
        Ok(Route::Spectral { fft, eigs_w })
    }

    pub fn strategy(&self) -> Strategy {
        match self.route {
            Route::Spectral { .. } => Strategy::Spectral,
            Route::Woodbury { .. } => Strategy::Woodbury,
            Route::Cg(_) => Strategy::Cg,
        }
    }

    /// `μ/β`.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// `b = (μ/β)Kᵀf`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn analysis(&self) -> &AnalysisOp {
        &self.d
    }

    pub fn forward(&self) -> &LinearMap {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.d.input_dim()
    }

    /// Eigenvalues of `W` on the spectral route, one per frequency.
    pub fn eigs_w(&self) -> Option<&[f64]> {
        match &self.route {
            Route::Spectral { eigs_w, .. } => Some(eigs_w),
            _ => None,
        }
    }

    pub fn cg_params(&self) -> Option<CgParams> {
        match self.route {
            Route::Cg(p) => Some(p),
            _ => None,
        }
    }

    /// `Wx`.
    pub fn apply_w(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.d.adjoint(&self.d.apply(x)?)?;
        let ktk = self.k.adjoint(&self.k.apply(x)?)?;
        vecops::axpy(self.ratio, &ktk, &mut out);
        Ok(out)
    }

    /// `Dᵀz + b`.
    pub fn rhs(&self, z: &GradField) -> Result<Vec<f64>> {
        let mut r = self.d.adjoint(z)?;
        vecops::axpy(1.0, &self.b, &mut r);
        Ok(r)
    }

    /// Solves `Wx = Dᵀz + b`.
    pub fn solve_normal(&self, z: &GradField) -> Result<Vec<f64>> {
        self.solve_rhs(&self.rhs(z)?)
    }

    /// Solves `Wx = r` for an arbitrary right-hand side.
    pub fn solve_rhs(&self, r: &[f64]) -> Result<Vec<f64>> {
        check_len("normal rhs", self.dim(), r.len())?;
        match &self.route {
            Route::Spectral { fft, eigs_w } => Ok(fft.filter_planes(r, |i, v| v / eigs_w[i])),
            Route::Woodbury { gram } => {
                let LinearMap::Dense(km) = &self.k else {
                    unreachable!()
                };
                let m = km.matrix();
                let rv = DVector::from_column_slice(r);
                let kr = m * &rv;
                let s = gram.solve(&kr);
                let correction = m.tr_mul(&s);
                Ok((rv - correction * self.ratio).data.into())
            }
            Route::Cg(params) => self.cg(r, *params),
        }
    }

    fn cg(&self, rhs: &[f64], params: CgParams) -> Result<Vec<f64>> {
        let n = rhs.len();
        let mut x = vec![0.0; n];
        let rhs_norm = vecops::norm(rhs);
        if rhs_norm == 0.0 {
            return Ok(x);
        }
        let mut r = rhs.to_vec();
        let mut p = r.clone();
        let mut rr = vecops::norm_sq(&r);
        for _ in 0..params.max_iter {
            if rr.sqrt() <= params.tol * rhs_norm {
                return Ok(x);
            }
            let wp = self.apply_w(&p)?;
            let alpha = rr / vecops::dot(&p, &wp);
            vecops::axpy(alpha, &p, &mut x);
            vecops::axpy(-alpha, &wp, &mut r);
            let rr_new = vecops::norm_sq(&r);
            let beta = rr_new / rr;
            for (pi, ri) in p.iter_mut().zip(&r) {
                *pi = ri + beta * *pi;
            }
            rr = rr_new;
        }
        if rr.sqrt() <= params.tol * rhs_norm {
            return Ok(x);
        }
        Err(TvError::CgNotConverged {
            iterations: params.max_iter,
            residual: rr.sqrt() / rhs_norm,
        })
    }
}

/// For the CG route the null-space condition is checked directly:
/// periodic TV only annihilates per-channel constants.
fn check_null_space_for_cg(k: &LinearMap, d: &AnalysisOp) -> Result<()> {
    let AnalysisOp::TvPeriodic {
        height,
        width,
        channels,
    } = *d
    else {
        return Ok(());
    };
    let n = height * width;
    for c in 0..channels {
        let mut ones = vec![0.0; n * channels];
        ones[c * n..(c + 1) * n].iter_mut().for_each(|v| *v = 1.0);
        let image = k.apply(&ones)?;
        if vecops::norm(&image) <= 1e-14 * (n as f64).sqrt() {
            return Err(TvError::SingularNormal(format!(
                "K annihilates the constant image of channel {c}"
            )));
        }
    }
    Ok(())
}

/// Lanczos estimate of `‖DW⁻¹Dᵀ‖₂`, which never exceeds one.
///
/// The operator is symmetric positive semidefinite, so the largest Ritz value
/// of a fully reorthogonalized Krylov basis approaches the norm from below.
pub fn opnorm_dwinvdt(sys: &NormalSystem) -> Result<f64> {
    const MAX_STEPS: usize = 120;
    let d = sys.analysis();
    let len = d.n_groups() * d.group_dim();
    let steps = MAX_STEPS.min(len);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut q: Vec<f64> = (0..len).map(|_| StandardNormal.sample(&mut rng)).collect();
    let q_norm = vecops::norm(&q);
    q.iter_mut().for_each(|x| *x /= q_norm);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut estimate = 0.0;
    for j in 0..steps {
        let v = GradField::new(d.n_groups(), d.group_dim(), q.clone())?;
        let mut w = d.apply(&sys.solve_rhs(&d.adjoint(&v)?)?)?.into_data();
        let a = vecops::dot(&q, &w);
        alpha.push(a);
        basis.push(q);
        // full reorthogonalization, twice for stability
        for _ in 0..2 {
            for b in &basis {
                let c = vecops::dot(b, &w);
                vecops::axpy(-c, b, &mut w);
            }
        }
        let ritz = largest_ritz(&alpha, &beta);
        let converged = j > 0 && (ritz - estimate).abs() <= 1e-14 * ritz;
        estimate = ritz;
        let b = vecops::norm(&w);
        if converged || b <= 1e-12 * ritz.max(1e-300) {
            break;
        }
        beta.push(b);
        q = w.into_iter().map(|x| x / b).collect();
    }
    Ok(estimate)
}

fn largest_ritz(alpha: &[f64], beta: &[f64]) -> f64 {
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    t.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Dense `W` (for small problems and diagnostics).
pub fn assemble_dense(sys: &NormalSystem) -> Result<DMatrix<f64>> {
    let n = sys.dim();
    let mut w = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = sys.apply_w(&e)?;
        w.column_mut(j).copy_from_slice(&col);
        e[j] = 0.0;
    }
    Ok(w)
}
