use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::FrameConfig;
use super::grid::DDFrame;

/// Anything that can fill a delay-Doppler frame with transmitted symbols.
pub trait SymbolSource {
    fn frame(&mut self, cfg: &FrameConfig) -> DDFrame;
}

/// Unit-energy 4-QAM, i.i.d. uniform over {(±1 ± i)/√2}.
#[derive(Debug, Clone)]
pub struct Qam4 {
    rng: ChaCha8Rng,
}

impl Qam4 {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl SymbolSource for Qam4 {
    fn frame(&mut self, cfg: &FrameConfig) -> DDFrame {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        DDFrame::from_fn(cfg.n(), cfg.m(), |_, _| {
            let bits: u8 = self.rng.random_range(0..4);
            let re = if bits & 1 == 0 { a } else { -a };
            let im = if bits & 2 == 0 { a } else { -a };
            Complex64::new(re, im)
        })
    }
}

/// Replays a fixed frame, for tests that need known symbols.
#[derive(Debug, Clone)]
pub struct FixedSymbols(pub DDFrame);

impl SymbolSource for FixedSymbols {
    fn frame(&mut self, _cfg: &FrameConfig) -> DDFrame {
        self.0.clone()
    }
}

pub fn random_qam_frame(cfg: &FrameConfig, seed: u64) -> DDFrame {
    Qam4::new(seed).frame(cfg)
}
