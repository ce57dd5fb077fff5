use serde::{Deserialize, Serialize};

use crate::{Error, Result, SPEED_OF_LIGHT};

/// OTFS numerology: an `N x M` frame of `N` symbols on `M` subcarriers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameConfig {
    pub m_subcarriers: usize,
    pub n_symbols: usize,
    pub subcarrier_spacing_hz: f64,
    pub wavelength_m: f64,
    /// Number of blocks over which the range is held constant (stop-and-go order).
    pub stop_and_go_order: usize,
}

impl FrameConfig {
    pub fn new(
        m_subcarriers: usize,
        n_symbols: usize,
        subcarrier_spacing_hz: f64,
        wavelength_m: f64,
        stop_and_go_order: usize,
    ) -> Result<Self> {
        if m_subcarriers == 0 || n_symbols == 0 {
            return Err(Error::Config("M and N must be positive".into()));
        }
        if !(subcarrier_spacing_hz > 0.0 && subcarrier_spacing_hz.is_finite()) {
            return Err(Error::Config(format!(
                "subcarrier spacing must be positive, got {subcarrier_spacing_hz}"
            )));
        }
        if !(wavelength_m > 0.0 && wavelength_m.is_finite()) {
            return Err(Error::Config(format!("wavelength must be positive, got {wavelength_m}")));
        }
        if stop_and_go_order == 0 || n_symbols % stop_and_go_order != 0 {
            return Err(Error::Config(format!(
                "stop-and-go order B = {stop_and_go_order} must divide N = {n_symbols}"
            )));
        }
        Ok(Self { m_subcarriers, n_symbols, subcarrier_spacing_hz, wavelength_m, stop_and_go_order })
    }

    /// 4 GHz carrier, 15 kHz spacing, 512 x 128 frame.
    pub fn reference(stop_and_go_order: usize) -> Result<Self> {
        Self::new(512, 128, 15e3, SPEED_OF_LIGHT / 4e9, stop_and_go_order)
    }

    /// Same numerology with a different stop-and-go order.
    pub fn with_order(&self, stop_and_go_order: usize) -> Result<Self> {
        Self::new(
            self.m_subcarriers,
            self.n_symbols,
            self.subcarrier_spacing_hz,
            self.wavelength_m,
            stop_and_go_order,
        )
    }

    pub fn m(&self) -> usize {
        self.m_subcarriers
    }

    pub fn n(&self) -> usize {
        self.n_symbols
    }

    pub fn b(&self) -> usize {
        self.stop_and_go_order
    }

    pub fn len(&self) -> usize {
        self.m_subcarriers * self.n_symbols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Symbol interval T = 1/Δ.
    pub fn symbol_interval_s(&self) -> f64 {
        1.0 / self.subcarrier_spacing_hz
    }

    pub fn frame_duration_s(&self) -> f64 {
        self.n_symbols as f64 * self.symbol_interval_s()
    }

    /// Symbols per stop-and-go block, N/B.
    pub fn block_len(&self) -> usize {
        self.n_symbols / self.stop_and_go_order
    }

    /// Block duration T_B = NT/B.
    pub fn block_duration_s(&self) -> f64 {
        self.frame_duration_s() / self.stop_and_go_order as f64
    }

    /// Range spanned by one delay bin, cT/M.
    pub fn delay_bin_m(&self) -> f64 {
        SPEED_OF_LIGHT * self.symbol_interval_s() / self.m_subcarriers as f64
    }

    /// Range-rate spanned by one Doppler bin, λ/(NT).
    pub fn doppler_bin_mps(&self) -> f64 {
        self.wavelength_m / self.frame_duration_s()
    }

    /// Nominal range resolution c/(2MΔ), half the delay bin.
    pub fn range_resolution_m(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.m_subcarriers as f64 * self.subcarrier_spacing_hz)
    }

    /// Nominal range-rate resolution λ/(2NT), half the Doppler bin.
    pub fn range_rate_resolution_mps(&self) -> f64 {
        self.wavelength_m / (2.0 * self.frame_duration_s())
    }

    pub(crate) fn check_dims(&self, rows: usize, cols: usize) -> Result<()> {
        if rows != self.n_symbols || cols != self.m_subcarriers {
            return Err(Error::Config(format!(
                "frame is {rows}x{cols}, configuration expects {}x{}",
                self.n_symbols, self.m_subcarriers
            )));
        }
        Ok(())
    }
}

/// Inspected range and range-rate intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SceneWindow {
    pub r_bar_min_m: f64,
    pub r_bar_max_m: f64,
    pub v_bar_min_mps: f64,
    pub v_bar_max_mps: f64,
}

impl SceneWindow {
    /// Checks the window against the frame: the excess delay must stay below T and the
    /// excess Doppler below Δ, otherwise range or range-rate become ambiguous.
    pub fn new(
        cfg: &FrameConfig,
        r_bar_min_m: f64,
        r_bar_max_m: f64,
        v_bar_min_mps: f64,
        v_bar_max_mps: f64,
    ) -> Result<Self> {
        let w = Self { r_bar_min_m, r_bar_max_m, v_bar_min_mps, v_bar_max_mps };
        if ![r_bar_min_m, r_bar_max_m, v_bar_min_mps, v_bar_max_mps].iter().all(|x| x.is_finite()) {
            return Err(Error::Config("window bounds must be finite".into()));
        }
        if w.r_max() < 0.0 || w.v_max() < 0.0 {
            return Err(Error::Config("window upper bounds must not be below lower bounds".into()));
        }
        if w.tau_max_s() >= cfg.symbol_interval_s() {
            return Err(Error::Ambiguity(format!(
                "tau_max = {:.4e} s is not below T = {:.4e} s",
                w.tau_max_s(),
                cfg.symbol_interval_s()
            )));
        }
        if w.nu_max_hz(cfg) >= cfg.subcarrier_spacing_hz {
            return Err(Error::Ambiguity(format!(
                "nu_max = {:.4e} Hz is not below Delta = {:.4e} Hz",
                w.nu_max_hz(cfg),
                cfg.subcarrier_spacing_hz
            )));
        }
        Ok(w)
    }

    /// Ranges 20-39 km and bulk range-rates 15-16 km/s.
    pub fn reference(cfg: &FrameConfig) -> Result<Self> {
        Self::new(cfg, 20e3, 39e3, 15e3, 16e3)
    }

    pub fn r_max(&self) -> f64 {
        self.r_bar_max_m - self.r_bar_min_m
    }

    pub fn v_max(&self) -> f64 {
        self.v_bar_max_mps - self.v_bar_min_mps
    }

    pub fn tau_max_s(&self) -> f64 {
        self.r_max() / SPEED_OF_LIGHT
    }

    pub fn nu_max_hz(&self, cfg: &FrameConfig) -> f64 {
        self.v_max() / cfg.wavelength_m
    }

    pub fn contains(&self, d: f64, v: f64) -> bool {
        (0.0..=self.r_max()).contains(&d) && (0.0..=self.v_max()).contains(&v)
    }

    pub fn check(&self, d: f64, v: f64) -> Result<()> {
        if self.contains(d, v) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "(d, v) = ({d}, {v}) outside [0, {}] x [0, {}]",
                self.r_max(),
                self.v_max()
            )))
        }
    }

    /// Echo geometry of a target at excess coordinates (d, v). The range migrates with
    /// the full range-rate v_bar_min + v while the Doppler shift only sees v, because the
    /// baseband reference frequency already absorbs v_bar_min.
    pub fn geometry(&self, d: f64, v: f64) -> EchoGeometry {
        EchoGeometry { range_m: d, range_rate_mps: v, migration_rate_mps: self.v_bar_min_mps + v }
    }
}

/// Excess range trajectory and Doppler of one point target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EchoGeometry {
    /// Excess initial range d.
    pub range_m: f64,
    /// Excess range-rate v, which sets the Doppler shift v/λ.
    pub range_rate_mps: f64,
    /// Rate at which the excess range shrinks, r(t) = d - rate * t.
    pub migration_rate_mps: f64,
}

impl EchoGeometry {
    /// A target whose range does not move during the frame.
    pub fn static_range(range_m: f64, range_rate_mps: f64) -> Self {
        Self { range_m, range_rate_mps, migration_rate_mps: 0.0 }
    }

    pub fn range_at(&self, t: f64) -> f64 {
        self.range_m - self.migration_rate_mps * t
    }

    /// r(b T_B) for every block.
    pub fn block_ranges(&self, cfg: &FrameConfig) -> Vec<f64> {
        let tb = cfg.block_duration_s();
        (0..cfg.b()).map(|b| self.range_at(b as f64 * tb)).collect()
    }

    /// r(nT) for every symbol.
    pub fn symbol_ranges(&self, cfg: &FrameConfig) -> Vec<f64> {
        let t = cfg.symbol_interval_s();
        (0..cfg.n()).map(|n| self.range_at(n as f64 * t)).collect()
    }

    /// Doppler in cycles per symbol, vT/λ.
    pub fn doppler_per_symbol(&self, cfg: &FrameConfig) -> f64 {
        self.range_rate_mps * cfg.symbol_interval_s() / cfg.wavelength_m
    }
}
