use serde::{Deserialize, Serialize};

use crate::frame::{EchoGeometry, FrameConfig, SceneWindow};
use crate::Result;

/// Integer and fractional bin parts of the Doppler and of the per-block delay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinDecomposition {
    pub k_int: usize,
    pub k_fra: f64,
    pub l_int: Vec<usize>,
    pub l_fra: Vec<f64>,
}

/// Splits x into an integer and a fraction in (-1/2, 1/2]; a tie at exactly one half
/// goes to the fraction.
pub fn split_bin(x: f64) -> (i64, f64) {
    let i = (x - 0.5).ceil();
    (i as i64, x - i)
}

impl BinDecomposition {
    pub fn from_geometry(geo: &EchoGeometry, cfg: &FrameConfig) -> Self {
        let (k, k_fra) = split_bin(geo.range_rate_mps / cfg.doppler_bin_mps());
        let bin = cfg.delay_bin_m();
        let (l_int, l_fra) = geo
            .block_ranges(cfg)
            .into_iter()
            .map(|r| {
                let (l, f) = split_bin(r / bin);
                (l.rem_euclid(cfg.m() as i64) as usize, f)
            })
            .unzip();
        Self { k_int: k.rem_euclid(cfg.n() as i64) as usize, k_fra, l_int, l_fra }
    }

    /// r(b T_B) rebuilt from the bins.
    pub fn block_range(&self, b: usize, cfg: &FrameConfig) -> f64 {
        (self.l_int[b] as f64 + self.l_fra[b]) * cfg.delay_bin_m()
    }

    pub fn range_rate(&self, cfg: &FrameConfig) -> f64 {
        (self.k_int as f64 + self.k_fra) * cfg.doppler_bin_mps()
    }
}

/// Bin decomposition of an in-window target.
pub fn decompose_bins(d: f64, v: f64, cfg: &FrameConfig, window: &SceneWindow) -> Result<BinDecomposition> {
    window.check(d, v)?;
    Ok(BinDecomposition::from_geometry(&window.geometry(d, v), cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_keeps_half_in_fraction() {
        assert_eq!(split_bin(42.5), (42, 0.5));
        assert_eq!(split_bin(42.0), (42, 0.0));
        let (i, f) = split_bin(42.6);
        assert_eq!(i, 43);
        assert!((f + 0.4).abs() < 1e-12);
        assert_eq!(split_bin(-0.5), (-1, 0.5));
    }

    #[test]
    fn origin_decomposes_to_zero() {
        let cfg = FrameConfig::new(64, 64, 15e3, 0.075, 4).unwrap();
        let w = SceneWindow::new(&cfg, 0.0, 10e3, 0.0, 500.0).unwrap();
        let bd = decompose_bins(0.0, 0.0, &cfg, &w).unwrap();
        assert_eq!(bd.k_int, 0);
        assert_eq!(bd.k_fra, 0.0);
        assert!(bd.l_int.iter().all(|&l| l == 0));
        assert!(bd.l_fra.iter().all(|&f| f == 0.0));
    }

    #[test]
    fn out_of_window_is_rejected() {
        let cfg = FrameConfig::new(64, 64, 15e3, 0.075, 4).unwrap();
        let w = SceneWindow::new(&cfg, 0.0, 10e3, 0.0, 500.0).unwrap();
        assert!(decompose_bins(-1.0, 0.0, &cfg, &w).is_err());
        assert!(decompose_bins(0.0, 501.0, &cfg, &w).is_err());
    }
}
