//! Dense measurement and analysis matrices.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_len, Result, TvError};

/// An explicit `rows`×`cols` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOp {
    matrix: DMatrix<f64>,
}

impl DenseOp {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.ncols() == 0 {
            return Err(TvError::InvalidParameter(
                "dense operator must be non-empty".into(),
            ));
        }
        Ok(Self { matrix })
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("dense apply", self.cols(), x.len())?;
        let v = DVector::from_column_slice(x);
        Ok((&self.matrix * v).data.into())
    }

    pub fn adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len("dense adjoint", self.rows(), y.len())?;
        let v = DVector::from_column_slice(y);
        Ok(self.matrix.tr_mul(&v).data.into())
    }
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    // column-major fill, so the stream order does not depend on nalgebra internals
    let data: Vec<f64> = (0..rows * cols)
        .map(|_| StandardNormal.sample(rng))
        .collect();
    DMatrix::from_vec(rows, cols, data)
}

/// `m`×`n` matrix with i.i.d. N(0,1) entries and unit-norm columns.
pub fn gen_gaussian_matrix(m: usize, n: usize, seed: u64) -> Result<DenseOp> {
    if m == 0 || n == 0 {
        return Err(TvError::InvalidParameter(format!(
            "matrix size must be positive, got {m}x{n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = gaussian_matrix(m, n, &mut rng);
    for mut col in a.column_iter_mut() {
        let norm = col.norm();
        col /= norm;
    }
    DenseOp::new(a)
}

/// Random tight frame: the `p`×`n` orthonormal factor of a Gaussian matrix.
pub fn gen_tight_frame(p: usize, n: usize, seed: u64) -> Result<DenseOp> {
    if n == 0 || p < n {
        return Err(TvError::InvalidParameter(format!(
            "tight frame needs p >= n >= 1, got p={p}, n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = gaussian_matrix(p, n, &mut rng);
    let q = a.qr().q();
    DenseOp::new(q)
}

/// Orthonormal type-II DCT matrix.
pub fn gen_dct(n: usize) -> Result<DenseOp> {
    if n == 0 {
        return Err(TvError::InvalidParameter(
            "DCT size must be positive".into(),
        ));
    }
    let nf = n as f64;
    let m = DMatrix::from_fn(n, n, |k, j| {
        let alpha = if k == 0 {
            (1.0 / nf).sqrt()
        } else {
            (2.0 / nf).sqrt()
        };
        alpha * (std::f64::consts::PI * (2 * j + 1) as f64 * k as f64 / (2.0 * nf)).cos()
    });
    DenseOp::new(m)
}
