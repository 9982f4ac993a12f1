//! Linear operators: finite differences, circulant blurs, dense matrices.

mod analysis;
mod circulant;
mod dense;
mod diff;
mod field;
mod image;
mod kernel;

pub use analysis::AnalysisOp;
pub use circulant::{circ_eigs, CirculantOp, Fft2};
pub use dense::{gen_dct, gen_gaussian_matrix, gen_tight_frame, DenseOp};
pub use diff::{div_adjoint, grad};
pub use field::GradField;
pub use image::Image;
pub use kernel::{make_kernel, KernelData, KernelSpec};

use crate::error::{check_len, Result};

/// The forward operator `K`.
#[derive(Debug, Clone)]
pub enum LinearMap {
    Identity(usize),
    /// The same blur applied to each of `channels` planes.
    Circulant {
        op: CirculantOp,
        channels: usize,
    },
    Dense(DenseOp),
}

impl LinearMap {
    pub fn circulant(op: CirculantOp) -> Self {
        LinearMap::Circulant { op, channels: 1 }
    }

    pub fn in_dim(&self) -> usize {
        match self {
            LinearMap::Identity(n) => *n,
            LinearMap::Circulant { op, channels } => {
                let (h, w) = op.dims();
                h * w * channels
            }
            LinearMap::Dense(d) => d.cols(),
        }
    }

    pub fn out_dim(&self) -> usize {
        match self {
            LinearMap::Dense(d) => d.rows(),
            _ => self.in_dim(),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("forward apply", self.in_dim(), x.len())?;
        match self {
            LinearMap::Identity(_) => Ok(x.to_vec()),
            LinearMap::Circulant { op, .. } => Ok(op.apply(x)),
            LinearMap::Dense(d) => d.apply(x),
        }
    }

    pub fn adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len("forward adjoint", self.out_dim(), y.len())?;
        match self {
            LinearMap::Identity(_) => Ok(y.to_vec()),
            LinearMap::Circulant { op, .. } => Ok(op.adjoint(y)),
            LinearMap::Dense(d) => d.adjoint(y),
        }
    }
}
