use super::dense::DenseOp;
use super::diff;
use super::field::GradField;
use crate::error::{check_len, Result};

/// The operator `D` whose grouped output is penalized.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisOp {
    /// Periodic isotropic TV on `channels` independent planes, groups of 2.
    TvPeriodic {
        height: usize,
        width: usize,
        channels: usize,
    },
    /// `p`×`n` matrix with orthonormal columns, groups of 1.
    TightFrame(DenseOp),
    /// Orthonormal DCT, groups of 1.
    Dct(DenseOp),
}

impl AnalysisOp {
    pub fn tv(height: usize, width: usize) -> Self {
        AnalysisOp::TvPeriodic {
            height,
            width,
            channels: 1,
        }
    }

    /// Length of `x`.
    pub fn input_dim(&self) -> usize {
        match self {
            AnalysisOp::TvPeriodic {
                height,
                width,
                channels,
            } => height * width * channels,
            AnalysisOp::TightFrame(d) | AnalysisOp::Dct(d) => d.cols(),
        }
    }

    pub fn n_groups(&self) -> usize {
        match self {
            AnalysisOp::TvPeriodic { .. } => self.input_dim(),
            AnalysisOp::TightFrame(d) | AnalysisOp::Dct(d) => d.rows(),
        }
    }

    pub fn group_dim(&self) -> usize {
        match self {
            AnalysisOp::TvPeriodic { .. } => 2,
            _ => 1,
        }
    }

    /// True when `DᵀD = I` by construction.
    pub fn has_orthonormal_columns(&self) -> bool {
        !matches!(self, AnalysisOp::TvPeriodic { .. })
    }

    pub fn zero_field(&self) -> GradField {
        GradField::zeros(self.n_groups(), self.group_dim())
    }

    pub fn apply(&self, x: &[f64]) -> Result<GradField> {
        check_len("analysis apply", self.input_dim(), x.len())?;
        match self {
            AnalysisOp::TvPeriodic { height, width, .. } => Ok(diff::grad(x, *height, *width)),
            AnalysisOp::TightFrame(d) | AnalysisOp::Dct(d) => {
                GradField::new(d.rows(), 1, d.apply(x)?)
            }
        }
    }

    pub fn adjoint(&self, z: &GradField) -> Result<Vec<f64>> {
        check_len("analysis adjoint groups", self.n_groups(), z.n_groups())?;
        check_len(
            "analysis adjoint group_dim",
            self.group_dim(),
            z.group_dim(),
        )?;
        match self {
            AnalysisOp::TvPeriodic { height, width, .. } => diff::div_adjoint(z, *height, *width),
            AnalysisOp::TightFrame(d) | AnalysisOp::Dct(d) => d.adjoint(z.data()),
        }
    }
}
