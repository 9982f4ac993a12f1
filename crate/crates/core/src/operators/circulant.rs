//! Circulant (periodic-boundary) convolution diagonalized by the 2-D DFT.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, TvError};

/// Forward/inverse 2-D DFT on a column-major `height`×`width` grid.
#[derive(Clone)]
pub struct Fft2 {
    height: usize,
    width: usize,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fft2")
            .field("height", &self.height)
            .field("width", &self.width)
            .finish()
    }
}

impl Fft2 {
    pub fn new(height: usize, width: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            height,
            width,
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        let (h, w) = (self.height, self.width);
        debug_assert_eq!(buf.len(), h * w);
        let (col, row) = if inverse {
            (&self.col_inv, &self.row_inv)
        } else {
            (&self.col_fwd, &self.row_fwd)
        };
        col.process(buf);
        if w > 1 {
            let mut line = vec![Complex64::new(0.0, 0.0); w];
            for r in 0..h {
                for (c, v) in line.iter_mut().enumerate() {
                    *v = buf[c * h + r];
                }
                row.process(&mut line);
                for (c, v) in line.iter().enumerate() {
                    buf[c * h + r] = *v;
                }
            }
        }
        if inverse {
            let scale = 1.0 / (h * w) as f64;
            buf.iter_mut().for_each(|v| *v *= scale);
        }
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.transform(buf, false);
    }

    /// Normalized inverse, so `inverse(forward(x)) = x`.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.transform(buf, true);
    }

    pub fn forward_real(&self, x: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }

    /// Multiplies every plane of `x` by `multiplier` in the frequency domain
    /// and returns the real part of the result.
    pub fn filter_planes(
        &self,
        x: &[f64],
        multiplier: impl Fn(usize, Complex64) -> Complex64,
    ) -> Vec<f64> {
        let n = self.height * self.width;
        assert!(
            x.len().is_multiple_of(n),
            "filter_planes: length is not a whole number of planes"
        );
        let mut out = Vec::with_capacity(x.len());
        for plane in x.chunks_exact(n) {
            let mut buf = self.forward_real(plane);
            for (i, v) in buf.iter_mut().enumerate() {
                *v = multiplier(i, *v);
            }
            self.inverse(&mut buf);
            out.extend(buf.iter().map(|v| v.re));
        }
        out
    }
}

/// Eigenvalues of the circulant operator generated by `kernel`.
///
/// `kernel` is column-major with `k_rows`×`k_cols` entries. Its center pixel
/// `((k_rows−1)/2, (k_cols−1)/2)` is moved to the origin with circular wrap
/// before transforming, so a centered delta gives all ones.
pub fn circ_eigs(
    kernel: &[f64],
    k_rows: usize,
    k_cols: usize,
    dims: (usize, usize),
) -> Result<Vec<Complex64>> {
    let fft = Fft2::new(dims.0, dims.1);
    circ_eigs_with(&fft, kernel, k_rows, k_cols)
}

pub(crate) fn circ_eigs_with(
    fft: &Fft2,
    kernel: &[f64],
    k_rows: usize,
    k_cols: usize,
) -> Result<Vec<Complex64>> {
    let (h, w) = fft.dims();
    crate::error::check_len("kernel entries", k_rows * k_cols, kernel.len())?;
    if k_rows == 0 || k_cols == 0 {
        return Err(TvError::InvalidParameter("empty kernel".into()));
    }
    if k_rows > h || k_cols > w {
        return Err(TvError::KernelTooLarge {
            kernel_rows: k_rows,
            kernel_cols: k_cols,
            rows: h,
            cols: w,
        });
    }
    let (cr, cc) = ((k_rows - 1) / 2, (k_cols - 1) / 2);
    let mut buf = vec![Complex64::new(0.0, 0.0); h * w];
    for b in 0..k_cols {
        for a in 0..k_rows {
            let r = (a + h - cr) % h;
            let c = (b + w - cc) % w;
            buf[c * h + r].re += kernel[b * k_rows + a];
        }
    }
    fft.forward(&mut buf);
    Ok(buf)
}

/// Periodic convolution with a fixed kernel on a fixed grid.
#[derive(Debug, Clone)]
pub struct CirculantOp {
    kernel: Vec<f64>,
    k_rows: usize,
    k_cols: usize,
    eigs: Vec<Complex64>,
    fft: Fft2,
}

impl CirculantOp {
    pub fn new(
        kernel: Vec<f64>,
        k_rows: usize,
        k_cols: usize,
        dims: (usize, usize),
    ) -> Result<Self> {
        let fft = Fft2::new(dims.0, dims.1);
        let eigs = circ_eigs_with(&fft, &kernel, k_rows, k_cols)?;
        Ok(Self {
            kernel,
            k_rows,
            k_cols,
            eigs,
            fft,
        })
    }

    pub fn identity(dims: (usize, usize)) -> Self {
        Self::new(vec![1.0], 1, 1, dims).expect("1x1 kernel always fits")
    }

    pub fn dims(&self) -> (usize, usize) {
        self.fft.dims()
    }

    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    pub fn kernel_shape(&self) -> (usize, usize) {
        (self.k_rows, self.k_cols)
    }

    pub fn eigs(&self) -> &[Complex64] {
        &self.eigs
    }

    pub fn fft(&self) -> &Fft2 {
        &self.fft
    }

    /// Circular convolution of every plane in `x` with the kernel.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.fft.filter_planes(x, |i, v| v * self.eigs[i])
    }

    /// Circular correlation, the adjoint of [`CirculantOp::apply`].
    pub fn adjoint(&self, x: &[f64]) -> Vec<f64> {
        self.fft.filter_planes(x, |i, v| v * self.eigs[i].conj())
    }

    /// Applies `KᵀK`.
    pub fn normal(&self, x: &[f64]) -> Vec<f64> {
        self.fft
            .filter_planes(x, |i, v| v * self.eigs[i].norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_kernel_gives_unit_eigenvalues() {
        let eigs = circ_eigs(&[1.0], 1, 1, (4, 5)).unwrap();
        assert!(eigs
            .iter()
            .all(|e| (e - Complex64::new(1.0, 0.0)).norm() < 1e-15));
        let eigs = circ_eigs(&[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0], 3, 3, (5, 5)).unwrap();
        assert!(eigs
            .iter()
            .all(|e| (e - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn dc_eigenvalue_is_kernel_sum() {
        let k = [0.3, -0.1, 0.7, 0.25, 0.05, 0.9];
        let eigs = circ_eigs(&k, 2, 3, (6, 7)).unwrap();
        let sum: f64 = k.iter().sum();
        assert!((eigs[0].re - sum).abs() < 1e-14 && eigs[0].im.abs() < 1e-14);
    }

    #[test]
    fn oversized_kernel_rejected() {
        let err = circ_eigs(&[1.0; 9], 3, 3, (2, 2)).unwrap_err();
        assert!(matches!(err, TvError::KernelTooLarge { .. }));
    }

    #[test]
    fn identity_returns_input() {
        let op = CirculantOp::identity((3, 4));
        let x: Vec<f64> = (0..24).map(|i| (i as f64).sin()).collect();
        let y = op.apply(&x);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn shift_kernel_moves_pixels() {
        // kernel [1, 0, 0] (vertical, center at index 1): y[r] = x[r + 1]
        let op = CirculantOp::new(vec![1.0, 0.0, 0.0], 3, 1, (4, 1)).unwrap();
        let y = op.apply(&[1.0, 2.0, 3.0, 4.0]);
        let expect = [2.0, 3.0, 4.0, 1.0];
        for (a, b) in y.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14, "{y:?}");
        }
    }
}
