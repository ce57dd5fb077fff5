//! Ground-truth echo synthesis from the continuous-time model, plus noise and
//! amplitude draws.

mod noise;
mod oracle;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use noise::{add_noise, draw_swerling1_amplitude, snr_to_noise_var};
pub(crate) use noise::swerling1;
pub use oracle::{ideal_echo_dd, oracle_echo_dd, oracle_echo_geometries};

use crate::frame::{EchoGeometry, FrameConfig, SceneWindow};
use crate::{Error, Result};

/// A point target in excess coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub excess_range_m: f64,
    pub excess_range_rate_mps: f64,
    pub amplitude: Complex64,
}

impl Target {
    pub fn new(excess_range_m: f64, excess_range_rate_mps: f64, amplitude: Complex64) -> Self {
        Self { excess_range_m, excess_range_rate_mps, amplitude }
    }

    pub fn geometry(&self, window: &SceneWindow) -> EchoGeometry {
        window.geometry(self.excess_range_m, self.excess_range_rate_mps)
    }
}

/// Everything needed to synthesize a received frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub cfg: FrameConfig,
    pub window: SceneWindow,
    pub targets: Vec<Target>,
    pub noise_var: f64,
    /// Quadrature nodes per subcarrier spacing in the receive integral.
    pub oversample: usize,
}

/// Minimum quadrature nodes per subcarrier; below this the midpoint rule aliases the
/// top subcarriers.
pub const MIN_OVERSAMPLE: usize = 2;
pub const DEFAULT_OVERSAMPLE: usize = 4;

impl Scenario {
    pub fn new(cfg: FrameConfig, window: SceneWindow, targets: Vec<Target>, noise_var: f64, oversample: usize) -> Result<Self> {
        let s = Self { cfg, window, targets, noise_var, oversample };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        SceneWindow::new(
            &self.cfg,
            self.window.r_bar_min_m,
            self.window.r_bar_max_m,
            self.window.v_bar_min_mps,
            self.window.v_bar_max_mps,
        )?;
        if self.oversample < MIN_OVERSAMPLE {
            return Err(Error::Config(format!(
                "oversample = {} is below the minimum of {MIN_OVERSAMPLE}",
                self.oversample
            )));
        }
        if !(self.noise_var >= 0.0 && self.noise_var.is_finite()) {
            return Err(Error::Config(format!("noise variance must be nonnegative, got {}", self.noise_var)));
        }
        for t in &self.targets {
            self.window.check(t.excess_range_m, t.excess_range_rate_mps)?;
        }
        Ok(())
    }
}

/// How finely the range is sampled along the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Granularity {
    /// r(nT) for every symbol.
    PerSymbol,
    /// r(b T_B), frozen over blocks of N/B symbols.
    PerBlock(usize),
}

/// Excess range seen by every symbol of the frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeTrajectory {
    pub ranges_m: Vec<f64>,
}

impl RangeTrajectory {
    pub fn new(geo: &EchoGeometry, cfg: &FrameConfig, granularity: Granularity) -> Result<Self> {
        let n = cfg.n();
        let t = cfg.symbol_interval_s();
        let ranges_m = match granularity {
            Granularity::PerSymbol => geo.symbol_ranges(cfg),
            Granularity::PerBlock(b) => {
                if b == 0 || n % b != 0 {
                    return Err(Error::Config(format!("block count {b} must divide N = {n}")));
                }
                let q = n / b;
                (0..n).map(|i| geo.range_at((i / q * q) as f64 * t)).collect()
            }
        };
        Ok(Self { ranges_m })
    }
}
