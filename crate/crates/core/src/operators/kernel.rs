//! Blur kernel construction and the `KIND:ARGS` string grammar.

use std::fmt;
use std::str::FromStr;

use super::circulant::CirculantOp;
use crate::error::{Result, TvError};

/// Point-spread function description.
///
/// Grammar: `gaussian:SIZE:SIGMA`, `motion:LEN:THETA`, `average:SIZE`, `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Gaussian {
        size: usize,
        sigma: f64,
    },
    /// Line of length `len` pixels at `theta` degrees counter-clockwise.
    Motion {
        len: f64,
        theta: f64,
    },
    Average {
        size: usize,
    },
    Delta,
}

/// A sampled kernel, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelData {
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
}

impl KernelData {
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[c * self.rows + r]
    }
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(TvError::InvalidParameter(msg));
        match *self {
            KernelSpec::Gaussian { size, sigma } => {
                if size == 0 || size % 2 == 0 {
                    return bad(format!(
                        "gaussian size must be odd and positive, got {size}"
                    ));
                }
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return bad(format!("gaussian sigma must be positive, got {sigma}"));
                }
            }
            KernelSpec::Motion { len, theta } => {
                if !(len >= 1.0 && len.is_finite()) {
                    return bad(format!("motion length must be at least 1, got {len}"));
                }
                if !theta.is_finite() {
                    return bad(format!("motion angle must be finite, got {theta}"));
                }
            }
            KernelSpec::Average { size } => {
                if size == 0 || size % 2 == 0 {
                    return bad(format!("average size must be odd and positive, got {size}"));
                }
            }
            KernelSpec::Delta => {}
        }
        Ok(())
    }

    /// Samples the kernel; the result is nonnegative and sums to one.
    pub fn sample(&self) -> Result<KernelData> {
        self.validate()?;
        Ok(match *self {
            KernelSpec::Gaussian { size, sigma } => gaussian(size, sigma),
            KernelSpec::Motion { len, theta } => motion(len, theta),
            KernelSpec::Average { size } => KernelData {
                rows: size,
                cols: size,
                values: vec![1.0 / (size * size) as f64; size * size],
            },
            KernelSpec::Delta => KernelData {
                rows: 1,
                cols: 1,
                values: vec![1.0],
            },
        })
    }
}

/// Builds the circulant blur for `spec` on a `dims` grid.
pub fn make_kernel(spec: &KernelSpec, dims: (usize, usize)) -> Result<CirculantOp> {
    let k = spec.sample()?;
    CirculantOp::new(k.values, k.rows, k.cols, dims)
}

fn gaussian(size: usize, sigma: f64) -> KernelData {
    let half = (size as f64 - 1.0) / 2.0;
    let mut values = Vec::with_capacity(size * size);
    for c in 0..size {
        for r in 0..size {
            let (y, x) = (r as f64 - half, c as f64 - half);
            values.push((-(x * x + y * y) / (2.0 * sigma * sigma)).exp());
        }
    }
    let sum: f64 = values.iter().sum();
    values.iter_mut().for_each(|v| *v /= sum);
    KernelData {
        rows: size,
        cols: size,
        values,
    }
}

/// Anti-aliased line of unit width.
///
/// One quadrant is rasterized from the perpendicular distance of each pixel
/// to the line (with the end caps measured to the end point), then mirrored
/// through the center. Pixels further than one unit from the segment get
/// zero weight.
fn motion(len: f64, theta: f64) -> KernelData {
    let eps = f64::EPSILON;
    let half = (len - 1.0) / 2.0;
    let phi = theta.rem_euclid(180.0) / 180.0 * std::f64::consts::PI;
    let (sinphi, cosphi) = phi.sin_cos();
    let xsign = if cosphi > 0.0 {
        1.0
    } else if cosphi < 0.0 {
        -1.0
    } else {
        0.0
    };
    let linewdt = 1.0;

    let sx = (half * cosphi + linewdt * xsign - len * eps).trunc();
    let sy = (half * sinphi + linewdt - len * eps).trunc();
    let qc = sx.abs() as usize + 1;
    let qr = sy as usize + 1;

    // quadrant, row-major: rows follow y = 0..=sy, cols follow x = 0, xsign, ..
    let mut quad = vec![0.0; qr * qc];
    for r in 0..qr {
        for c in 0..qc {
            let y = r as f64;
            let x = xsign * c as f64;
            let mut dist = y * cosphi - x * sinphi;
            let rad = (x * x + y * y).sqrt();
            if rad >= half && dist.abs() <= linewdt {
                let x2last = half - ((x + dist * sinphi) / cosphi).abs();
                dist = (dist * dist + x2last * x2last).sqrt();
            }
            quad[r * qc + c] = (linewdt + eps - dist.abs()).max(0.0);
        }
    }

    let rows = 2 * qr - 1;
    let cols = 2 * qc - 1;
    let mut full = vec![0.0; rows * cols];
    for r in 0..qr {
        for c in 0..qc {
            // 180-degree rotated copy in the top-left block
            full[(qr - 1 - r) * cols + (qc - 1 - c)] = quad[r * qc + c];
        }
    }
    for r in 0..qr {
        for c in 0..qc {
            full[(qr - 1 + r) * cols + (qc - 1 + c)] = quad[r * qc + c];
        }
    }
    let sum: f64 = full.iter().sum::<f64>() + eps * len * len;
    let flip = cosphi > 0.0;
    let mut values = vec![0.0; rows * cols];
    for r in 0..rows {
        let src = if flip { rows - 1 - r } else { r };
        for c in 0..cols {
            values[c * rows + r] = full[src * cols + c] / sum;
        }
    }
    // tiny eps-driven mass loss is renormalized away
    let total: f64 = values.iter().sum();
    values.iter_mut().for_each(|v| *v /= total);
    KernelData { rows, cols, values }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Gaussian { size, sigma } => write!(f, "gaussian:{size}:{sigma}"),
            KernelSpec::Motion { len, theta } => write!(f, "motion:{len}:{theta}"),
            KernelSpec::Average { size } => write!(f, "average:{size}"),
            KernelSpec::Delta => write!(f, "delta"),
        }
    }
}

impl FromStr for KernelSpec {
    type Err = TvError;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| TvError::KernelSpec {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        let int = |p: &str| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| err("expected a positive integer"))
        };
        let real = |p: &str| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err("expected a finite number"))
        };
        let spec = match parts.as_slice() {
            ["gaussian", size, sigma] => KernelSpec::Gaussian {
                size: int(size)?,
                sigma: real(sigma)?,
            },
            ["motion", len, theta] => KernelSpec::Motion {
                len: real(len)?,
                theta: real(theta)?,
            },
            ["average", size] => KernelSpec::Average { size: int(size)? },
            ["delta"] => KernelSpec::Delta,
            [kind, ..] if ["gaussian", "motion", "average", "delta"].contains(kind) => {
                return Err(err("wrong number of fields"))
            }
            _ => return Err(err("unknown kernel kind")),
        };
        spec.validate().map_err(|e| err(&e.to_string()))?;
        Ok(spec)
    }
}
