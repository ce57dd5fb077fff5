use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::frame::{DDFrame, FrameConfig};
use crate::{Error, Result};

/// Adds i.i.d. circular complex Gaussian noise of variance `noise_var` per entry.
pub fn add_noise(y: &DDFrame, noise_var: f64, seed: u64) -> DDFrame {
    if noise_var == 0.0 {
        return y.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = (noise_var / 2.0).sqrt();
    let mut out = y.clone();
    for z in out.as_mut_slice() {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *z += Complex64::new(re * s, im * s);
    }
    out
}

/// σ² = E[|α|²] N M / SNR.
pub fn snr_to_noise_var(snr_linear: f64, mean_amp_sq: f64, cfg: &FrameConfig) -> Result<f64> {
    if !(snr_linear > 0.0) {
        return Err(Error::Domain(format!("SNR must be positive, got {snr_linear}")));
    }
    Ok(mean_amp_sq * cfg.len() as f64 / snr_linear)
}

/// Circular complex Gaussian amplitude with E[|α|²] = mean_power.
pub fn draw_swerling1_amplitude(mean_power: f64, seed: u64) -> Complex64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    swerling1(mean_power, &mut rng)
}

pub(crate) fn swerling1(mean_power: f64, rng: &mut impl rand::Rng) -> Complex64 {
    let s = (mean_power / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * s, im * s)
}
