use std::f64::consts::PI;

use num_complex::Complex64;

use super::config::RampMode;
use crate::ddmodel::dirichlet;
use crate::frame::{fft, fft_cols, DDFrame, FrameConfig, SceneWindow};
use crate::{Error, Result, SPEED_OF_LIGHT};

/// Inner product and energy of one candidate echo: e^H z and ||e||².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Match {
    pub num: Complex64,
    pub den: f64,
}

impl Match {
    pub fn objective(&self) -> f64 {
        if self.den > 0.0 {
            self.num.norm_sqr() / self.den
        } else {
            0.0
        }
    }

    pub fn amplitude(&self) -> Complex64 {
        if self.den > 0.0 {
            self.num / self.den
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

/// Measurement after the inverse DFT along Doppler, one delay row per symbol.
#[derive(Debug, Clone)]
pub struct Prepared {
    rows: Vec<Complex64>,
}

/// Matched-filter bank for the ideal and approximated rectangular echo models.
///
/// Along Doppler, both models are per-symbol products: after an inverse DFT over k,
/// symbol p of the echo is e^{i2πθp} times the delay-axis circular convolution of the
/// symbol's time samples with D_M(ρ_b - l/M), ρ_b being the block delay in symbol
/// units. So e^H z for every delay on one range-rate row costs one correlation per
/// symbol plus B·M work per candidate.
#[derive(Debug, Clone)]
pub struct MatchedFilterBank {
    cfg: FrameConfig,
    window: SceneWindow,
    modified: bool,
    ramp: RampMode,
    /// Per symbol p, DFT of length 2M of [s_{p-1}, s_p] (modified) or [s_p, s_p].
    seg: Vec<Vec<Complex64>>,
    energy: f64,
}

impl MatchedFilterBank {
    pub fn new(x: &DDFrame, cfg: &FrameConfig, window: &SceneWindow, modified: bool, ramp: RampMode) -> Result<Self> {
        cfg.check_dims(x.rows(), x.cols())?;
        let energy = x.norm_sqr();
        if energy == 0.0 {
            return Err(Error::DegenerateDictionary("all-zero symbol frame".into()));
        }
        let (n, m) = (cfg.n(), cfg.m());
        let mut s = x.as_slice().to_vec();
        fft_cols(&mut s, n, m, false);
        let seg = (0..n)
            .map(|p| {
                let prev = if modified { (p + n - 1) % n } else { p };
                let mut buf = Vec::with_capacity(2 * m);
                buf.extend_from_slice(&s[prev * m..prev * m + m]);
                buf.extend_from_slice(&s[p * m..p * m + m]);
                fft(&mut buf, true);
                buf
            })
            .collect();
        Ok(Self { cfg: *cfg, window: *window, modified, ramp, seg, energy })
    }

    pub fn cfg(&self) -> &FrameConfig {
        &self.cfg
    }

    pub fn window(&self) -> &SceneWindow {
        &self.window
    }

    pub fn is_modified(&self) -> bool {
        self.modified
    }

    /// Range-rate at which Λ is evaluated for candidate range-rate `v`.
    pub fn ramp_rate(&self, v: f64) -> f64 {
        match self.ramp {
            RampMode::Midpoint => self.window.v_max() / 2.0,
            RampMode::Candidate => v,
        }
    }

    pub fn prepare(&self, z: &DDFrame) -> Result<Prepared> {
        self.cfg.check_dims(z.rows(), z.cols())?;
        let mut rows = z.as_slice().to_vec();
        fft_cols(&mut rows, self.cfg.n(), self.cfg.m(), false);
        Ok(Prepared { rows })
    }

    /// Block delays ρ_b = (d - v̄ b T_B) Δ / c.
    fn rho(&self, d: f64, v: f64) -> Vec<f64> {
        let geo = self.window.geometry(d, v);
        geo.block_ranges(&self.cfg).iter().map(|r| r * self.cfg.subcarrier_spacing_hz / SPEED_OF_LIGHT).collect()
    }

    /// e^H z and ||e||² for every delay in `ds` at range-rate `v`.
    pub fn row(&self, z: &Prepared, v: f64, ds: &[f64]) -> Vec<Match> {
        let cfg = &self.cfg;
        let (n, m, nb) = (cfg.n(), cfg.m(), cfg.b());
        let m2 = 2 * m;
        let q = cfg.block_len();
        let theta = v * cfg.symbol_interval_s() / cfg.wavelength_m;
        let lambda_conj: Vec<Complex64> = if self.modified {
            let rate = self.ramp_rate(v) * cfg.symbol_interval_s() / (cfg.wavelength_m * m as f64);
            (0..m).map(|l| Complex64::from_polar(1.0, -2.0 * PI * rate * l as f64)).collect()
        } else {
            vec![Complex64::new(1.0, 0.0); m]
        };

        let zero = Complex64::new(0.0, 0.0);
        let mut acc = vec![zero; nb * m];
        let mut buf = vec![zero; m2];
        let mut r = vec![zero; m];
        let inv2m = 1.0 / m2 as f64;
        for p in 0..n {
            let zp = &z.rows[p * m..p * m + m];
            buf[..m].iter_mut().zip(zp).zip(&lambda_conj).for_each(|((b, z), l)| *b = z * l);
            buf[m..].iter_mut().for_each(|b| *b = zero);
            fft(&mut buf, true);
            buf.iter_mut().zip(&self.seg[p]).for_each(|(b, s)| *b = s * b.conj());
            fft(&mut buf, false);
            // R_p[l'] = Σ_l conj(seg[l - l' + M]) ζ[l]
            for (lp, rr) in r.iter_mut().enumerate() {
                *rr = (buf[m - lp] * inv2m).conj();
            }
            fft(&mut r, true);
            let w = Complex64::from_polar(1.0, -2.0 * PI * theta * p as f64);
            let a = &mut acc[(p / q) * m..(p / q) * m + m];
            a.iter_mut().zip(&r).for_each(|(a, r)| *a += w * r);
        }

        let scale = 1.0 / (n * m) as f64;
        ds.iter()
            .map(|&d| {
                let rho = self.rho(d, v);
                let mut num = zero;
                for (b, &rb) in rho.iter().enumerate() {
                    let step = Complex64::from_polar(1.0, 2.0 * PI * rb);
                    let mut ph = Complex64::new(1.0, 0.0);
                    let mut s = zero;
                    for a in &acc[b * m..b * m + m] {
                        s += ph * a;
                        ph *= step;
                    }
                    num += s;
                }
                let den = if self.modified { self.modified_energy(&rho) } else { self.energy };
                Match { num: num * scale, den }
            })
            .collect()
    }

    /// ||e||² for the modified model; the Doppler and Λ factors have unit modulus, so
    /// only the block delays matter.
    fn modified_energy(&self, rho: &[f64]) -> f64 {
        let (n, m) = (self.cfg.n(), self.cfg.m());
        let m2 = 2 * m;
        let q = self.cfg.block_len();
        let zero = Complex64::new(0.0, 0.0);
        let mut total = 0.0;
        let mut buf = vec![zero; m2];
        for (b, &rb) in rho.iter().enumerate() {
            let mut h: Vec<Complex64> =
                (0..m2).map(|i| if i < m { dirichlet(m, rb - i as f64 / m as f64) } else { zero }).collect();
            fft(&mut h, true);
            for p in b * q..(b + 1) * q {
                buf.iter_mut().zip(&h).zip(&self.seg[p]).for_each(|((o, h), s)| *o = h * s);
                fft(&mut buf, false);
                total += buf[m..].iter().map(|z| z.norm_sqr()).sum::<f64>();
            }
        }
        total / (m2 * m2 * n) as f64
    }

    pub fn eval(&self, z: &Prepared, d: f64, v: f64) -> Match {
        self.row(z, v, &[d])[0]
    }
}
