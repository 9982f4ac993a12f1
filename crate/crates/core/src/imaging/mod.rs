//! Image I/O, synthetic degradation and quality metrics.

pub mod netpbm;

pub use netpbm::{load_image, save_image, NetpbmError};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_len, Result, TvError};
use crate::operators::{make_kernel, CirculantOp, Image, KernelSpec};
use crate::vecops;

/// SNR reported when the reconstruction error vanishes.
pub const SNR_CAP_DB: f64 = 300.0;

/// Blur plus additive Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegradationSpec {
    pub kernel: KernelSpec,
    pub sigma: f64,
    pub seed: u64,
}

/// `f = k ⊛ x + σ·η`, channel by channel with periodic boundaries.
///
/// The noise for channel `c` comes from the ChaCha stream `c` keyed by `seed`.
pub fn degrade(x: &Image, spec: &DegradationSpec) -> Result<(Image, CirculantOp)> {
    if !(spec.sigma >= 0.0 && spec.sigma.is_finite()) {
        return Err(TvError::InvalidParameter(format!(
            "noise sigma must be >= 0, got {}",
            spec.sigma
        )));
    }
    let op = make_kernel(&spec.kernel, (x.height(), x.width()))?;
    let mut f = op.apply(x.data());
    if spec.sigma > 0.0 {
        for (c, plane) in f.chunks_exact_mut(x.pixels()).enumerate() {
            add_noise(plane, spec.sigma, spec.seed, c as u64);
        }
    }
    Ok((x.with_data(f)?, op))
}

/// Adds `sigma·N(0,1)` draws from stream `stream` of the generator seeded by `seed`.
pub fn add_noise(values: &mut [f64], sigma: f64, seed: u64, stream: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    for v in values {
        let e: f64 = StandardNormal.sample(&mut rng);
        *v += sigma * e;
    }
}

/// `20·log₁₀(‖x_true − mean(x_true)‖ / ‖x_rec − x_true‖)`, capped at 300 dB.
pub fn snr_db(x_rec: &Image, x_true: &Image) -> Result<f64> {
    check_len("snr image size", x_true.data().len(), x_rec.data().len())?;
    Ok(snr_db_slice(x_rec.data(), x_true.data()))
}

pub fn snr_db_slice(x_rec: &[f64], x_true: &[f64]) -> f64 {
    let err = vecops::dist(x_rec, x_true);
    if err < 1e-15 {
        return SNR_CAP_DB;
    }
    let mean = vecops::sum(x_true.iter().copied()) / x_true.len() as f64;
    let signal = vecops::sum(x_true.iter().map(|v| (v - mean) * (v - mean))).sqrt();
    20.0 * (signal / err).log10()
}

/// Fidelity weight `μ = 0.05/σ²`.
pub fn mu_auto(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(TvError::InvalidParameter(format!(
            "automatic mu needs sigma > 0 (got {sigma}); supply mu explicitly"
        )));
    }
    Ok(0.05 / (sigma * sigma))
}
