//! Analysis-sparse recovery instances: `x = Dᵀy` with `y` s-sparse,
//! observed through a column-normalized Gaussian matrix.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_len, Result, TvError};
use crate::imaging::add_noise;
use crate::operators::{
    gen_dct, gen_gaussian_matrix, gen_tight_frame, AnalysisOp, DenseOp, LinearMap,
};
use crate::prox::ObjectiveParams;
use crate::vecops;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameKind {
    /// Orthonormal columns of a `ratio·n`×`n` Gaussian matrix.
    Tight,
    Dct,
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameKind::Tight => "tight",
            FrameKind::Dct => "dct",
        })
    }
}

impl FromStr for FrameKind {
    type Err = TvError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tight" => Ok(FrameKind::Tight),
            "dct" => Ok(FrameKind::Dct),
            _ => Err(TvError::InvalidParameter(format!(
                "unknown frame {s:?}, expected tight or dct"
            ))),
        }
    }
}

/// Default sparsity `⌊m/8⌋`.
pub fn default_sparsity(m: usize) -> usize {
    m / 8
}

#[derive(Debug, Clone)]
pub struct RecoverySpec {
    pub m: usize,
    pub n: usize,
    pub frame: FrameKind,
    /// `p/n` for tight frames.
    pub frame_ratio: usize,
    pub s: usize,
    pub sigma: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct RecoveryProblem {
    pub k: DenseOp,
    pub d: AnalysisOp,
    pub x_true: Vec<f64>,
    pub y_true: Vec<f64>,
    pub f: Vec<f64>,
    pub sigma: f64,
    pub s: usize,
    pub seed: u64,
}

// independent sub-seeds for the matrix, the frame, the support and the noise
fn sub_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(k.wrapping_mul(0xD1B5_4A32_D192_ED03))
        ^ k
}

pub fn gen_recovery_problem(spec: &RecoverySpec) -> Result<RecoveryProblem> {
    let RecoverySpec {
        m,
        n,
        frame,
        frame_ratio,
        s,
        sigma,
        seed,
    } = *spec;
    if m == 0 || n == 0 {
        return Err(TvError::InvalidParameter(format!(
            "problem size must be positive, got {m}x{n}"
        )));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(TvError::InvalidParameter(format!(
            "sigma must be >= 0, got {sigma}"
        )));
    }
    if s > n {
        return Err(TvError::InvalidParameter(format!(
            "sparsity {s} exceeds n = {n}"
        )));
    }
    let k = gen_gaussian_matrix(m, n, sub_seed(seed, 1))?;
    let d = match frame {
        FrameKind::Tight => {
            if frame_ratio == 0 {
                return Err(TvError::InvalidParameter(
                    "frame ratio must be at least 1".into(),
                ));
            }
            let p = n
                .checked_mul(frame_ratio)
                .ok_or_else(|| TvError::InvalidParameter("frame too large".into()))?;
            AnalysisOp::TightFrame(gen_tight_frame(p, n, sub_seed(seed, 2))?)
        }
        FrameKind::Dct => AnalysisOp::Dct(gen_dct(n)?),
    };
    let p = d.n_groups();
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 3));
    let mut y_true = vec![0.0; p];
    for i in index::sample(&mut rng, p, s) {
        y_true[i] = StandardNormal.sample(&mut rng);
    }
    let x_true = match &d {
        AnalysisOp::TightFrame(op) | AnalysisOp::Dct(op) => op.adjoint(&y_true)?,
        AnalysisOp::TvPeriodic { .. } => unreachable!(),
    };
    let mut f = k.apply(&x_true)?;
    add_noise(&mut f, sigma, sub_seed(seed, 4), 0);
    Ok(RecoveryProblem {
        k,
        d,
        x_true,
        y_true,
        f,
        sigma,
        s,
        seed,
    })
}

impl RecoveryProblem {
    pub fn params(&self, mu: f64, beta: f64) -> Result<ObjectiveParams> {
        ObjectiveParams::new(
            mu,
            beta,
            LinearMap::Dense(self.k.clone()),
            self.d.clone(),
            self.f.clone(),
        )
    }

    pub fn m(&self) -> usize {
        self.k.rows()
    }

    pub fn n(&self) -> usize {
        self.k.cols()
    }
}

/// `‖x_rec − x_true‖₂ / ‖x_true‖₂`.
pub fn rel_error(x_rec: &[f64], x_true: &[f64]) -> Result<f64> {
    check_len("rel_error", x_true.len(), x_rec.len())?;
    let denom = vecops::norm(x_true);
    if denom == 0.0 {
        return Err(TvError::InvalidParameter(
            "relative error against a zero signal".into(),
        ));
    }
    Ok(vecops::dist(x_rec, x_true) / denom)
}
