use std::f64::consts::PI;

use num_complex::Complex64;

use crate::frame::{fft_cols, fft_rows, DDFrame, FrameConfig, SceneWindow};
use crate::Result;

/// The symbol matrix acting on a vectorized response φ, either the plain circulant
/// arrangement X (ideal filters) or the modified matrix Ξ = X ⊙ Θ ⊙ Λ (rectangular).
///
/// Nothing NM x NM is ever stored: products go through an N x 2M DFT where the wrapped
/// part of the delay convolution picks up the e^{-i2πk/N} twist of Θ.
#[derive(Debug, Clone)]
pub struct SymbolOperator {
    cfg: FrameConfig,
    x: DDFrame,
    modified: bool,
    ramp_rate_mps: f64,
    lambda: Vec<Complex64>,
    spectrum: Vec<Complex64>,
}

pub type ModifiedSymbolMatrix = SymbolOperator;

impl SymbolOperator {
    pub fn ideal(x: &DDFrame, cfg: &FrameConfig) -> Result<Self> {
        Self::build(x, cfg, false, 0.0)
    }

    /// Ξ with the delay-axis ramp Λ evaluated at range-rate `ramp_rate_mps`.
    pub fn modified(x: &DDFrame, cfg: &FrameConfig, ramp_rate_mps: f64) -> Result<Self> {
        Self::build(x, cfg, true, ramp_rate_mps)
    }

    fn build(x: &DDFrame, cfg: &FrameConfig, modified: bool, ramp_rate_mps: f64) -> Result<Self> {
        cfg.check_dims(x.rows(), x.cols())?;
        let (n, m) = (cfg.n(), cfg.m());
        let m2 = 2 * m;
        let rate = ramp_rate_mps * cfg.symbol_interval_s() / (cfg.wavelength_m * m as f64);
        let lambda = (0..m).map(|l| Complex64::from_polar(1.0, 2.0 * PI * rate * l as f64)).collect();

        let zero = Complex64::new(0.0, 0.0);
        let mut plain = vec![zero; n * m2];
        let mut twisted = vec![zero; n * m2];
        for k in 0..n {
            let tw = if modified { Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64) } else { Complex64::new(1.0, 0.0) };
            for l in 0..m {
                plain[k * m2 + l] = x[(k, l)];
                twisted[k * m2 + l] = x[(k, l)] * tw;
            }
        }
        fft2(&mut plain, n, m2, true);
        fft2(&mut twisted, n, m2, true);
        // Shifting the wrapped half by M columns is a sign flip on odd delay frequencies.
        let spectrum = plain
            .iter()
            .zip(&twisted)
            .enumerate()
            .map(|(i, (a, b))| if (i % m2) % 2 == 0 { a + b } else { a - b })
            .collect();
        Ok(Self { cfg: *cfg, x: x.clone(), modified, ramp_rate_mps, lambda, spectrum })
    }

    pub fn for_window(x: &DDFrame, cfg: &FrameConfig, window: &SceneWindow, modified: bool) -> Result<Self> {
        if modified {
            build_modified_symbols(x, cfg, window)
        } else {
            Self::ideal(x, cfg)
        }
    }

    pub fn cfg(&self) -> &FrameConfig {
        &self.cfg
    }

    pub fn symbols(&self) -> &DDFrame {
        &self.x
    }

    pub fn is_modified(&self) -> bool {
        self.modified
    }

    pub fn ramp_rate_mps(&self) -> f64 {
        self.ramp_rate_mps
    }

    /// Λ[l].
    pub fn lambda(&self, l: usize) -> Complex64 {
        self.lambda[l]
    }

    /// Θ_{k',l'}[k,l].
    pub fn theta(&self, k: usize, l: usize, k_in: usize, l_in: usize) -> Complex64 {
        let n = self.cfg.n();
        if !self.modified || l >= l_in {
            Complex64::new(1.0, 0.0)
        } else {
            let j = (k + n - k_in) % n;
            Complex64::from_polar(1.0, -2.0 * PI * j as f64 / n as f64)
        }
    }

    /// Matrix entry at row (k, l) and column (k', l').
    pub fn entry(&self, k: usize, l: usize, k_in: usize, l_in: usize) -> Complex64 {
        let (n, m) = (self.cfg.n(), self.cfg.m());
        let xv = self.x[((k + n - k_in) % n, (l + m - l_in) % m)];
        if self.modified {
            xv * self.theta(k, l, k_in, l_in) * self.lambda[l]
        } else {
            xv
        }
    }

    /// Column (k', l') restricted to the listed delay bins; entry `i*N + k` belongs to
    /// delay bin `rows[i]`.
    pub fn column(&self, k_in: usize, l_in: usize, rows: &[usize]) -> Vec<Complex64> {
        let n = self.cfg.n();
        let mut out = Vec::with_capacity(rows.len() * n);
        for &l in rows {
            for k in 0..n {
                out.push(self.entry(k, l, k_in, l_in));
            }
        }
        out
    }

    /// Echo for response φ: the ideal branch is X ⊛ φ, the modified branch Ξφ.
    pub fn apply(&self, phi: &DDFrame) -> DDFrame {
        let (n, m) = (self.cfg.n(), self.cfg.m());
        let m2 = 2 * m;
        let mut buf = pad(phi, m2);
        fft2(&mut buf, n, m2, true);
        buf.iter_mut().zip(&self.spectrum).for_each(|(a, s)| *a *= s);
        fft2(&mut buf, n, m2, false);
        let s = 1.0 / (n * m2) as f64;
        DDFrame::from_fn(n, m, |k, l| buf[k * m2 + l] * s * self.lambda[l])
    }

    /// Adjoint product, the correlation of u against every column.
    pub fn adjoint(&self, u: &DDFrame) -> DDFrame {
        let (n, m) = (self.cfg.n(), self.cfg.m());
        let m2 = 2 * m;
        let mut buf = vec![Complex64::new(0.0, 0.0); n * m2];
        for k in 0..n {
            for l in 0..m {
                buf[k * m2 + l] = u[(k, l)] * self.lambda[l].conj();
            }
        }
        fft2(&mut buf, n, m2, true);
        buf.iter_mut().zip(&self.spectrum).for_each(|(a, s)| *a *= s.conj());
        fft2(&mut buf, n, m2, false);
        let s = 1.0 / (n * m2) as f64;
        DDFrame::from_fn(n, m, |k, l| buf[k * m2 + l] * s)
    }
}

/// Ξ = X ⊙ Θ ⊙ Λ(v_max/2).
pub fn build_modified_symbols(x: &DDFrame, cfg: &FrameConfig, window: &SceneWindow) -> Result<ModifiedSymbolMatrix> {
    SymbolOperator::modified(x, cfg, window.v_max() / 2.0)
}

fn pad(f: &DDFrame, cols: usize) -> Vec<Complex64> {
    let (n, m) = f.shape();
    let mut out = vec![Complex64::new(0.0, 0.0); n * cols];
    for k in 0..n {
        out[k * cols..k * cols + m].copy_from_slice(f.row(k));
    }
    out
}

fn fft2(buf: &mut [Complex64], rows: usize, cols: usize, forward: bool) {
    fft_cols(buf, rows, cols, forward);
    fft_rows(buf, cols, forward);
}
