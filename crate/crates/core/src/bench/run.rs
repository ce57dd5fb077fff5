use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::metrics::{compute_metrics, Accumulator, MetricRow, PairErrors};
use super::spec::{AmplitudeModel, EstimatorKind, ExperimentSpec, FilterKind};
use crate::chansim::{add_noise, ideal_echo_dd, oracle_echo_dd, snr_to_noise_var, swerling1, Granularity, Scenario, Target};
use crate::estimator::{Estimator, TargetEstimate};
use crate::frame::{random_qam_frame, DDFrame, FrameConfig, SceneWindow};
use crate::{Error, Result};

/// Everything one Monte Carlo draw produces before estimation.
#[derive(Debug, Clone)]
pub struct Trial {
    pub cfg: FrameConfig,
    pub window: SceneWindow,
    pub x: DDFrame,
    pub z: DDFrame,
    pub truth: Vec<Target>,
    pub noise_var: f64,
}

/// Independent stream for (seed, sweep index, trial index).
pub fn trial_rng(seed: u64, sweep_index: usize, trial_index: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(sweep_index as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(trial_index as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Draws targets, symbols and noise for one trial of `spec`, which must already be set to
/// the sweep value.
pub fn draw_trial(spec: &ExperimentSpec, sweep_index: usize, trial_index: usize) -> Result<Trial> {
    let cfg = spec.frame()?;
    let window = spec.window(&cfg)?;
    let mut rng = trial_rng(spec.seed, sweep_index, trial_index);

    let (br, brr) = (cfg.delay_bin_m(), cfg.doppler_bin_mps());
    let sep2 = spec.min_separation_bins.powi(2);
    let mut truth: Vec<Target> = Vec::with_capacity(spec.targets());
    for &pdb in &spec.target_power_db {
        let mut tries = 0;
        let (d, v) = loop {
            let d = rng.random::<f64>() * window.r_max();
            let v = rng.random::<f64>() * window.v_max();
            let clear = truth.iter().all(|t| {
                ((t.excess_range_m - d) / br).powi(2) + ((t.excess_range_rate_mps - v) / brr).powi(2) >= sep2
            });
            if clear {
                break (d, v);
            }
            tries += 1;
            if tries > 10_000 {
                return Err(Error::Config("cannot place targets with the requested separation".into()));
            }
        };
        let power = 10f64.powf(pdb / 10.0);
        let alpha = match spec.amplitude {
            AmplitudeModel::Swerling1 => swerling1(power, &mut rng),
            AmplitudeModel::FixedMagnitude => Complex64::from_polar(power.sqrt(), 2.0 * PI * rng.random::<f64>()),
        };
        truth.push(Target::new(d, v, alpha));
    }
    let x = random_qam_frame(&cfg, rng.random());
    let noise_seed: u64 = rng.random();

    let noise_var = if spec.snr_db.is_infinite() && spec.snr_db > 0.0 {
        0.0
    } else {
        let ref_power = 10f64.powf(spec.target_power_db[0] / 10.0);
        snr_to_noise_var(10f64.powf(spec.snr_db / 10.0), ref_power, &cfg)?
    };
    let y = match spec.filter {
        FilterKind::Ideal => {
            let mut y = DDFrame::zeros(cfg.n(), cfg.m());
            for t in &truth {
                y.add_scaled(&ideal_echo_dd(&t.geometry(&window), &x, &cfg, Granularity::PerSymbol)?, t.amplitude);
            }
            y
        }
        FilterKind::Rect => {
            let sc = Scenario::new(cfg, window, truth.clone(), noise_var, spec.oversample)?;
            oracle_echo_dd(&sc, &x, Granularity::PerSymbol)?
        }
    };
    let z = add_noise(&y, noise_var, noise_seed);
    Ok(Trial { cfg, window, x, z, truth, noise_var })
}

/// Runs the configured estimator on a drawn trial.
pub fn estimate_trial(spec: &ExperimentSpec, trial: &Trial) -> Result<Vec<TargetEstimate>> {
    let est_cfg = spec.estimator_config(&trial.cfg);
    let est = Estimator::new(&trial.x, &trial.cfg, &trial.window, &est_cfg)?;
    match spec.estimator {
        EstimatorKind::ExhaustiveMl => Ok(vec![est.exhaustive(&trial.z, trial.noise_var)?]),
        EstimatorKind::TwoStep if spec.targets() == 1 => Ok(vec![est.estimate_single(&trial.z, trial.noise_var)?]),
        EstimatorKind::TwoStep => Ok(est.clean(&trial.z, spec.targets(), trial.noise_var)?.estimates),
    }
}

fn run_trial(spec: &ExperimentSpec, sweep_index: usize, trial_index: usize) -> Result<Vec<Option<PairErrors>>> {
    let trial = draw_trial(spec, sweep_index, trial_index)?;
    let est = estimate_trial(spec, &trial)?;
    Ok(compute_metrics(&trial.truth, &est, &trial.cfg))
}

/// One row per target and sweep value. Trials run in parallel; sums are formed in trial
/// order, so the result does not depend on scheduling. `wall_s` is filled only when
/// `timing` is set, which keeps the rows reproducible byte for byte otherwise.
pub fn run_experiment(spec: &ExperimentSpec, timing: bool) -> Result<Vec<MetricRow>> {
    spec.validate()?;
    let mut rows = Vec::new();
    for (si, &value) in spec.sweep_values.iter().enumerate() {
        let s = spec.at(value)?;
        let start = Instant::now();
        let outcomes: Vec<Result<Vec<Option<PairErrors>>>> =
            (0..s.trials).into_par_iter().map(|t| run_trial(&s, si, t)).collect();
        let wall = timing.then(|| start.elapsed().as_secs_f64());

        if let Some((t, Err(e))) = outcomes.iter().enumerate().find(|(_, o)| o.is_err()) {
            for target_id in 1..=s.targets() {
                rows.push(MetricRow {
                    sweep: value,
                    target_id,
                    rmse_r_m: None,
                    rmse_rr_mps: None,
                    nrmse_alpha: None,
                    trials: t,
                    wall_s: wall,
                    misses: 0,
                    miss_penalty: 0.0,
                    status: format!("error in trial {t}: {e}"),
                });
            }
            continue;
        }
        let mut acc = vec![Accumulator::default(); s.targets()];
        for o in outcomes.into_iter().flatten() {
            for (a, e) in acc.iter_mut().zip(o) {
                a.push(e);
            }
        }
        for (i, a) in acc.iter().enumerate() {
            rows.push(MetricRow {
                sweep: value,
                target_id: i + 1,
                rmse_r_m: a.rmse_r(),
                rmse_rr_mps: a.rmse_rr(),
                nrmse_alpha: a.nrmse_alpha(),
                trials: s.trials,
                wall_s: wall,
                misses: a.misses,
                miss_penalty: a.misses as f64 * s.miss_penalty,
                status: "ok".into(),
            });
        }
    }
    Ok(rows)
}
