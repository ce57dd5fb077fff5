use std::f64::consts::PI;

use num_complex::Complex64;

use super::dirichlet::dirichlet;
use crate::frame::{DDFrame, EchoGeometry, FrameConfig};
use crate::SPEED_OF_LIGHT;

/// Per-block quantities shared by the ideal and rectangular responses.
#[derive(Debug, Clone)]
pub(crate) struct BlockTerms {
    /// Doppler in cycles per symbol, vT/λ.
    pub theta: f64,
    /// r(b T_B) Δ / c, the block delay in units of the symbol interval.
    pub rho: Vec<f64>,
    /// First delay index of the ISI zone, ⌈M - r(b T_B) M/(cT)⌉ clamped to [0, M].
    pub zone: Vec<usize>,
    /// e^{i2π v r(b T_B)/(λc)}.
    pub phase: Vec<Complex64>,
}

impl BlockTerms {
    pub fn new(geo: &EchoGeometry, cfg: &FrameConfig) -> Self {
        let m = cfg.m() as f64;
        let ranges = geo.block_ranges(cfg);
        let rho: Vec<f64> = ranges.iter().map(|r| r * cfg.subcarrier_spacing_hz / SPEED_OF_LIGHT).collect();
        let zone = rho
            .iter()
            .map(|&p| {
                let x = m - p * m;
                let c = if (x - x.round()).abs() < 1e-9 { x.round() } else { x.ceil() };
                c.clamp(0.0, m) as usize
            })
            .collect();
        let phase = ranges
            .iter()
            .map(|r| Complex64::from_polar(1.0, 2.0 * PI * geo.range_rate_mps * r / (cfg.wavelength_m * SPEED_OF_LIGHT)))
            .collect();
        Self { theta: geo.doppler_per_symbol(cfg), rho, zone, phase }
    }

    /// Doppler factor e^{-i2πκ bN/B} D_{N/B}(κ) with κ = j/N - vT/λ.
    pub fn doppler(&self, cfg: &FrameConfig, b: usize, j: f64) -> Complex64 {
        let kappa = j / cfg.n() as f64 - self.theta;
        let q = cfg.block_len();
        Complex64::from_polar(1.0, -2.0 * PI * kappa * (b * q) as f64) * dirichlet(q, kappa)
    }

    /// Delay factor D_M(-(i/M - ρ_b)).
    pub fn delay(&self, cfg: &FrameConfig, b: usize, i: f64) -> Complex64 {
        let m = cfg.m() as f64;
        dirichlet(cfg.m(), -(i / m - self.rho[b]))
    }
}

/// Ideal-filter response Φ[k,l] on the full N x M grid.
pub fn phi_ideal(geo: &EchoGeometry, cfg: &FrameConfig) -> DDFrame {
    let terms = BlockTerms::new(geo, cfg);
    let (n, m, nb) = (cfg.n(), cfg.m(), cfg.b());
    let mut out = DDFrame::zeros(n, m);
    let w = 1.0 / nb as f64;
    for b in 0..nb {
        let a: Vec<Complex64> = (0..n).map(|k| terms.doppler(cfg, b, k as f64) * w).collect();
        let c: Vec<Complex64> = (0..m).map(|l| terms.delay(cfg, b, l as f64)).collect();
        for k in 0..n {
            for l in 0..m {
                out[(k, l)] += a[k] * c[l];
            }
        }
    }
    out
}

/// Φ at an arbitrary (possibly out-of-range) integer pair, evaluated term by term.
pub fn phi_at(geo: &EchoGeometry, cfg: &FrameConfig, k: i64, l: i64) -> Complex64 {
    let terms = BlockTerms::new(geo, cfg);
    (0..cfg.b())
        .map(|b| terms.doppler(cfg, b, k as f64) * terms.delay(cfg, b, l as f64))
        .sum::<Complex64>()
        / cfg.b() as f64
}
