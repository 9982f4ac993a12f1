//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use tvsam::harness::{gen_recovery_problem, FrameKind, RecoverySpec};
use tvsam::imaging::{degrade, DegradationSpec};
use tvsam::prox::ObjectiveParams;
use tvsam::{AnalysisOp, Image, KernelSpec, LinearMap};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn randn(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Explicit `2hw × hw` difference matrix, built entry by entry from the
/// pixel index formulas: rows `0..hw` hold the horizontal differences
/// `x[r, c+1] - x[r, c]`, rows `hw..2hw` the vertical ones, both periodic.
pub fn explicit_d(h: usize, w: usize) -> DMatrix<f64> {
    let n = h * w;
    let idx = |r: usize, c: usize| c * h + r;
    let mut d = DMatrix::zeros(2 * n, n);
    for c in 0..w {
        for r in 0..h {
            let i = idx(r, c);
            d[(i, i)] -= 1.0;
            d[(i, idx(r, (c + 1) % w))] += 1.0;
            d[(n + i, i)] -= 1.0;
            d[(n + i, idx((r + 1) % h, c))] += 1.0;
        }
    }
    d
}

/// Direct periodic convolution of a column-major `h×w` image with a
/// column-major `kr×kc` kernel whose centre sits at `((kr-1)/2, (kc-1)/2)`.
pub fn direct_conv(
    x: &[f64],
    h: usize,
    w: usize,
    kernel: &[f64],
    kr: usize,
    kc: usize,
) -> Vec<f64> {
    let (cr, cc) = (((kr - 1) / 2) as isize, ((kc - 1) / 2) as isize);
    let (hi, wi) = (h as isize, w as isize);
    let mut y = vec![0.0; h * w];
    for c in 0..w {
        for r in 0..h {
            let mut acc = 0.0;
            for b in 0..kc {
                for a in 0..kr {
                    let sr = (r as isize - (a as isize - cr)).rem_euclid(hi) as usize;
                    let sc = (c as isize - (b as isize - cc)).rem_euclid(wi) as usize;
                    acc += kernel[b * kr + a] * x[sc * h + sr];
                }
            }
            y[c * h + r] = acc;
        }
    }
    y
}

/// Dense matrix of the periodic convolution, column by column.
pub fn dense_conv(h: usize, w: usize, kernel: &[f64], kr: usize, kc: usize) -> DMatrix<f64> {
    let n = h * w;
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = direct_conv(&e, h, w, kernel, kr, kc);
        for i in 0..n {
            m[(i, j)] = col[i];
        }
    }
    m
}

/// Dense `K` for any forward map, by probing with unit vectors.
pub fn dense_forward(k: &LinearMap) -> DMatrix<f64> {
    let n = k.in_dim();
    let mut m = DMatrix::zeros(k.out_dim(), n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = k.apply(&e).unwrap();
        for (i, v) in col.into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    m
}

/// Dense analysis matrix for the dense frame variants and single-channel TV.
pub fn dense_analysis(d: &AnalysisOp) -> DMatrix<f64> {
    match d {
        AnalysisOp::TvPeriodic {
            height,
            width,
            channels: 1,
        } => explicit_d(*height, *width),
        AnalysisOp::TightFrame(op) | AnalysisOp::Dct(op) => op.matrix().clone(),
        other => panic!("no dense oracle for {other:?}"),
    }
}

/// `DᵀD + (mu/beta)KᵀK` from dense pieces.
pub fn dense_w(params: &ObjectiveParams) -> DMatrix<f64> {
    let d = dense_analysis(&params.d);
    let k = dense_forward(&params.k);
    d.transpose() * &d + (params.mu / params.beta) * k.transpose() * &k
}

/// Piecewise-constant test scene in [0, 1].
pub fn phantom(h: usize, w: usize) -> Image {
    Image::from_fn(h, w, 1, |r, c, _| {
        let (y, x) = (r as f64 / h as f64, c as f64 / w as f64);
        let mut v = 0.2;
        if (0.15..0.55).contains(&y) && (0.2..0.7).contains(&x) {
            v = 0.8;
        }
        if (y - 0.7).powi(2) + (x - 0.65).powi(2) < 0.04 {
            v = 0.5;
        }
        v
    })
    .unwrap()
}

pub fn deblur_instance(
    h: usize,
    w: usize,
    kernel: KernelSpec,
    sigma: f64,
    mu: f64,
    beta: f64,
    seed: u64,
) -> (Image, ObjectiveParams) {
    let truth = phantom(h, w);
    let (f, op) = degrade(
        &truth,
        &DegradationSpec {
            kernel,
            sigma,
            seed,
        },
    )
    .unwrap();
    let params = ObjectiveParams::new(
        mu,
        beta,
        LinearMap::circulant(op),
        AnalysisOp::tv(h, w),
        f.into_data(),
    )
    .unwrap();
    (truth, params)
}

/// Small Gaussian-blurred phantom used by several checks.
pub fn small_deblur(n: usize, seed: u64) -> ObjectiveParams {
    deblur_instance(
        n,
        n,
        KernelSpec::Gaussian {
            size: 5,
            sigma: 1.5,
        },
        1e-2,
        50.0,
        10.0,
        seed,
    )
    .1
}

pub fn small_recovery(
    m: usize,
    n: usize,
    frame: FrameKind,
    mu: f64,
    beta: f64,
    seed: u64,
) -> ObjectiveParams {
    let problem = gen_recovery_problem(&RecoverySpec {
        m,
        n,
        frame,
        frame_ratio: 2,
        s: (m / 8).max(1),
        sigma: 1e-3,
        seed,
    })
    .unwrap();
    problem.params(mu, beta).unwrap()
}
