//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use otfs_sense::frame::{DDFrame, EchoGeometry, FrameConfig};
use otfs_sense::{Complex64, SPEED_OF_LIGHT};

pub const CARRIER_HZ: f64 = 4e9;
pub const SPACING_HZ: f64 = 15e3;

pub fn cfg(m: usize, n: usize, b: usize) -> FrameConfig {
    FrameConfig::new(m, n, SPACING_HZ, SPEED_OF_LIGHT / CARRIER_HZ, b).unwrap()
}

pub fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// (1/Q) Σ e^{-i2πνq}, summed term by term.
pub fn dirichlet_sum(q: usize, nu: f64) -> Complex64 {
    (0..q).map(|i| cis(-2.0 * PI * nu * i as f64)).sum::<Complex64>() / q as f64
}

pub fn max_abs_diff(a: &DDFrame, b: &DDFrame) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// X_TF[n,m] = (1/√NM) Σ X[k,l] e^{i2π(nk/N - ml/M)} by direct summation.
pub fn isfft_direct(x: &DDFrame) -> Vec<Vec<Complex64>> {
    let (n, m) = x.shape();
    let s = 1.0 / ((n * m) as f64).sqrt();
    (0..n)
        .map(|nn| {
            (0..m)
                .map(|mm| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        for l in 0..m {
                            let ph = (nn * k) as f64 / n as f64 - (mm * l) as f64 / m as f64;
                            acc += x[(k, l)] * cis(2.0 * PI * ph);
                        }
                    }
                    acc * s
                })
                .collect()
        })
        .collect()
}

/// Y_DD[k,l] = (1/√NM) Σ Y_TF[n,m] e^{-i2π(nk/N - ml/M)} by direct summation.
pub fn sfft_direct(y: &[Vec<Complex64>]) -> DDFrame {
    let (n, m) = (y.len(), y[0].len());
    let s = 1.0 / ((n * m) as f64).sqrt();
    DDFrame::from_fn(n, m, |k, l| {
        let mut acc = Complex64::new(0.0, 0.0);
        for nn in 0..n {
            for mm in 0..m {
                let ph = (nn * k) as f64 / n as f64 - (mm * l) as f64 / m as f64;
                acc += y[nn][mm] * cis(-2.0 * PI * ph);
            }
        }
        acc * s
    })
}

/// Rectangular-filter echo built the long way: time-frequency channel taps H_{n,m}[n,m']
/// and H_{n,m}[n-1,m'] written as explicit sums over the M fast-time samples p, applied to
/// the transmitted TF grid and brought back to delay-Doppler. Every symbol of block b sees
/// the block range r(b T_B), including on the ISI side.
pub fn ici_isi_echo(geo: &EchoGeometry, x: &DDFrame, cfg: &FrameConfig) -> DDFrame {
    let (n, m) = (cfg.n(), cfg.m());
    let mf = m as f64;
    let t = cfg.symbol_interval_s();
    let delta = cfg.subcarrier_spacing_hz;
    let nu = geo.range_rate_mps / cfg.wavelength_m;
    let q = cfg.block_len();
    let ranges = geo.block_ranges(cfg);
    let xtf = isfft_direct(x);

    let mut ytf = vec![vec![Complex64::new(0.0, 0.0); m]; n];
    for nn in 0..n {
        let r = ranges[nn / q];
        let tau = r / SPEED_OF_LIGHT;
        let zone = (mf - tau * mf / t).ceil().clamp(0.0, mf) as usize;
        let lead = cis(2.0 * PI * nu * nn as f64 * t);
        for mm in 0..m {
            for mp in 0..m {
                let tilt = cis(-2.0 * PI * mp as f64 * delta * tau);
                let f = (mm as f64 - mp as f64) * delta - nu;
                let ici: Complex64 =
                    (0..zone).map(|p| cis(-2.0 * PI * f * (p as f64 * t / mf + tau))).sum();
                ytf[nn][mm] += lead * tilt * ici / mf * xtf[nn][mp];
                if nn >= 1 {
                    let isi: Complex64 =
                        (zone..m).map(|p| cis(-2.0 * PI * f * (p as f64 * t / mf - t + tau))).sum();
                    ytf[nn][mm] += lead * tilt * isi / mf * xtf[nn - 1][mp];
                }
            }
        }
    }
    sfft_direct(&ytf)
}

/// Single-block rectangular-filter echo for an integer delay l_int and Doppler
/// k_int + k_fra, written as the finite Doppler-bin sum of the classical OTFS
/// input-output relation.
pub fn integer_delay_echo(x: &DDFrame, l_int: usize, k_int: usize, k_fra: f64) -> DDFrame {
    let (n, m) = x.shape();
    let (ni, mi) = (n as i64, m as i64);
    let kappa = (k_int as f64 + k_fra) / n as f64;
    DDFrame::from_fn(n, m, |k, l| {
        let mut acc = Complex64::new(0.0, 0.0);
        let dl = l as i64 - l_int as i64;
        let lsrc = dl.rem_euclid(mi) as usize;
        let lead = cis(2.0 * PI * kappa * l_int as f64 / m as f64) * cis(2.0 * PI * kappa * dl as f64 / m as f64);
        for kb in -(ni / 2)..(ni - ni / 2) {
            let ksrc = (k as i64 - k_int as i64 + kb).rem_euclid(ni) as usize;
            let dn = dirichlet_sum(n, -(kb as f64 + k_fra) / n as f64);
            let a = if l >= l_int { dn } else { (dn - 1.0 / n as f64) * cis(-2.0 * PI * ksrc as f64 / n as f64) };
            acc += lead * a * x[(ksrc, lsrc)];
        }
        acc
    })
}

/// Φ[k,l] summed term by term over blocks, with both Dirichlet factors expanded.
pub fn phi_direct(geo: &EchoGeometry, cfg: &FrameConfig, k: i64, l: i64) -> Complex64 {
    let (n, m, nb) = (cfg.n(), cfg.m(), cfg.b());
    let q = cfg.block_len();
    let theta = geo.range_rate_mps * cfg.symbol_interval_s() / cfg.wavelength_m;
    let kappa = k as f64 / n as f64 - theta;
    let mut acc = Complex64::new(0.0, 0.0);
    for b in 0..nb {
        let rho = geo.range_at((b * q) as f64 * cfg.symbol_interval_s()) * cfg.subcarrier_spacing_hz / SPEED_OF_LIGHT;
        acc += cis(-2.0 * PI * kappa * (b * q) as f64)
            * dirichlet_sum(q, kappa)
            * dirichlet_sum(m, -(l as f64 / m as f64 - rho));
    }
    acc / nb as f64
}

/// Σ_{k',l'} X[k',l'] F[k-k', l-l'] over the full grid.
pub fn circular_conv_direct(x: &DDFrame, f: &DDFrame) -> DDFrame {
    let (n, m) = x.shape();
    DDFrame::from_fn(n, m, |k, l| {
        let mut acc = Complex64::new(0.0, 0.0);
        for kp in 0..n {
            for lp in 0..m {
                acc += x[(kp, lp)] * f[((k + n - kp) % n, (l + m - lp) % m)];
            }
        }
        acc
    })
}
