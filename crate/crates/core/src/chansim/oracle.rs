use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Granularity, RangeTrajectory, Scenario};
use crate::frame::{fft, isfft, sfft, DDFrame, EchoGeometry, FrameConfig, TFFrame};
use crate::{Result, SPEED_OF_LIGHT};

/// Noiseless received frame for every target of the scenario, with rectangular shaping
/// filters, computed from the time-domain waveform.
///
/// Each transmitted symbol is synthesized in closed form at the exact delayed instants,
/// the receive integral over every symbol window uses `oversample * M` midpoint nodes,
/// and the echo of the previous symbol spilling into the window is kept.
pub fn oracle_echo_dd(scenario: &Scenario, x_dd: &DDFrame, granularity: Granularity) -> Result<DDFrame> {
    scenario.validate()?;
    let targets: Vec<(EchoGeometry, Complex64)> =
        scenario.targets.iter().map(|t| (t.geometry(&scenario.window), t.amplitude)).collect();
    oracle_echo_geometries(&targets, x_dd, &scenario.cfg, scenario.oversample, granularity)
}

/// Same as [`oracle_echo_dd`] for explicit geometries, without window checks.
pub fn oracle_echo_geometries(
    targets: &[(EchoGeometry, Complex64)],
    x_dd: &DDFrame,
    cfg: &FrameConfig,
    oversample: usize,
    granularity: Granularity,
) -> Result<DDFrame> {
    if oversample < super::MIN_OVERSAMPLE {
        return Err(crate::Error::Config(format!(
            "oversample = {oversample} is below the minimum of {}",
            super::MIN_OVERSAMPLE
        )));
    }
    let x_tf = isfft(x_dd, cfg)?;
    let mut y_tf = TFFrame::zeros(cfg.n(), cfg.m());
    for (geo, alpha) in targets {
        if *alpha == Complex64::new(0.0, 0.0) {
            continue;
        }
        let traj = RangeTrajectory::new(geo, cfg, granularity)?;
        let y = oracle_tf(geo, &traj, &x_tf, cfg, oversample);
        y_tf.add_scaled(&y, *alpha);
    }
    sfft(&y_tf, cfg)
}

fn oracle_tf(geo: &EchoGeometry, traj: &RangeTrajectory, x_tf: &TFFrame, cfg: &FrameConfig, q: usize) -> TFFrame {
    let (n, m) = (cfg.n(), cfg.m());
    let len = q * m;
    let t = cfg.symbol_interval_s();
    let h = t / len as f64;
    let nu = geo.range_rate_mps / cfg.wavelength_m;
    let half = PI / len as f64;

    // Samples of each delayed symbol waveform at the receive nodes of its own window;
    // the nodes of the following window sit exactly one T later, which leaves the
    // subcarrier phases unchanged.
    let waves: Vec<Vec<Complex64>> = (0..n)
        .map(|np| {
            let tau = traj.ranges_m[np] / SPEED_OF_LIGHT;
            let mut buf = vec![Complex64::new(0.0, 0.0); len];
            for (mp, b) in buf.iter_mut().take(m).enumerate() {
                let ph = -2.0 * PI * mp as f64 * cfg.subcarrier_spacing_hz * tau + half * mp as f64;
                *b = x_tf[(np, mp)] * Complex64::from_polar(1.0, ph);
            }
            fft(&mut buf, false);
            buf
        })
        .collect();

    let mut out = TFFrame::zeros(n, m);
    let mut acc = vec![Complex64::new(0.0, 0.0); len];
    for nn in 0..n {
        acc.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for np in nn.saturating_sub(1)..(nn + 2).min(n) {
            let tau = traj.ranges_m[np] / SPEED_OF_LIGHT;
            let offset = (nn as f64 - np as f64) * t - tau;
            for (j, a) in acc.iter_mut().enumerate() {
                let u = (j as f64 + 0.5) * h + offset;
                if (0.0..t).contains(&u) {
                    *a += waves[np][j];
                }
            }
        }
        for (j, a) in acc.iter_mut().enumerate() {
            let tj = nn as f64 * t + (j as f64 + 0.5) * h;
            *a *= Complex64::from_polar(1.0, 2.0 * PI * nu * tj);
        }
        fft(&mut acc, true);
        for mm in 0..m {
            out[(nn, mm)] = acc[mm] * Complex64::from_polar(1.0 / len as f64, -half * mm as f64);
        }
    }
    out
}

/// Ideal-filter echo built in the time-frequency domain, where every symbol only
/// picks up the Doppler phase of its interval and the delay phase of its range.
pub fn ideal_echo_dd(geo: &EchoGeometry, x_dd: &DDFrame, cfg: &FrameConfig, granularity: Granularity) -> Result<DDFrame> {
    let traj = RangeTrajectory::new(geo, cfg, granularity)?;
    let x_tf = isfft(x_dd, cfg)?;
    let theta = geo.doppler_per_symbol(cfg);
    let y_tf = TFFrame::from_fn(cfg.n(), cfg.m(), |n, m| {
        let ph = 2.0 * PI * theta * n as f64
            - 2.0 * PI * traj.ranges_m[n] * m as f64 * cfg.subcarrier_spacing_hz / SPEED_OF_LIGHT;
        x_tf[(n, m)] * Complex64::from_polar(1.0, ph)
    });
    sfft(&y_tf, cfg)
}
