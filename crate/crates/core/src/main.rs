use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rand::Rng;

use otfs_sense::bench::{draw_trial, emit, run_experiment, trial_rng, ExperimentSpec, OutputFormat};
use otfs_sense::chansim::{oracle_echo_geometries, Granularity};
use otfs_sense::ddmodel::{model_echo, ModelKind};
use otfs_sense::estimator::{Estimator, TargetEstimate};
use otfs_sense::frame::io::{load_frame, save_frame};
use otfs_sense::frame::{random_qam_frame, DDFrame};
use otfs_sense::Complex64;

/// Largest frame `bench` runs without `--full`.
const DESK_CELLS: usize = 256 * 64;

#[derive(Parser)]
#[command(name = "otfs-sense", version, about = "OTFS radar sensing of range-migrating targets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw one trial of an experiment and write its symbol and received frames.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Index into sweep_values.
        #[arg(long, default_value_t = 0)]
        sweep_index: usize,
        #[arg(long, default_value_t = 0)]
        trial: usize,
    },
    /// Estimate targets in a received frame; prints JSON, or a table with --table.
    Estimate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        symbols: PathBuf,
        #[arg(long)]
        received: PathBuf,
        #[arg(long, default_value_t = 0)]
        sweep_index: usize,
        /// Noise variance per entry; 0 when absent.
        #[arg(long, default_value_t = 0.0)]
        noise_var: f64,
        /// Number of targets for CLEAN; the spec's target count when absent.
        #[arg(long)]
        targets: Option<usize>,
        #[arg(long)]
        table: bool,
    },
    /// Run a Monte Carlo experiment; writes CSV, or JSON for a .json output path.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Record per-sweep wall time (makes the output run-dependent).
        #[arg(long)]
        timing: bool,
        /// Allow frames larger than the desk-scale 256 x 64.
        #[arg(long)]
        full: bool,
    },
    /// NRMSE of the closed-form echo models against the rectangular-filter time-domain
    /// oracle, per sweep value.
    ValidateModel {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 10)]
        draws: usize,
        #[arg(long, default_value_t = 8)]
        oversample: usize,
    },
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Simulate { spec, out_dir, sweep_index, trial } => simulate(&spec, &out_dir, sweep_index, trial),
        Cmd::Estimate { spec, symbols, received, sweep_index, noise_var, targets, table } => {
            estimate(&spec, &symbols, &received, sweep_index, noise_var, targets, table)
        }
        Cmd::Bench { spec, out, timing, full } => bench(&spec, &out, timing, full),
        Cmd::ValidateModel { spec, draws, oversample } => validate(&spec, draws, oversample),
    }
}

fn load_at(path: &PathBuf, sweep_index: usize) -> Result<ExperimentSpec> {
    let spec = ExperimentSpec::load(path).with_context(|| format!("reading {}", path.display()))?;
    let Some(&v) = spec.sweep_values.get(sweep_index) else {
        bail!("sweep index {sweep_index} out of range ({} values)", spec.sweep_values.len());
    };
    Ok(spec.at(v)?)
}

fn simulate(spec: &PathBuf, out_dir: &PathBuf, sweep_index: usize, trial: usize) -> Result<()> {
    let s = load_at(spec, sweep_index)?;
    let t = draw_trial(&s, sweep_index, trial)?;
    std::fs::create_dir_all(out_dir)?;
    save_frame(&t.x, out_dir.join("symbols.otfs"))?;
    save_frame(&t.z, out_dir.join("received.otfs"))?;
    let truth = serde_json::json!({ "noise_var": t.noise_var, "targets": t.truth });
    std::fs::write(out_dir.join("truth.json"), serde_json::to_string_pretty(&truth)? + "\n")?;
    println!("wrote {}", out_dir.display());
    Ok(())
}

fn estimate(
    spec: &PathBuf,
    symbols: &PathBuf,
    received: &PathBuf,
    sweep_index: usize,
    noise_var: f64,
    targets: Option<usize>,
    table: bool,
) -> Result<()> {
    let s = load_at(spec, sweep_index)?;
    let cfg = s.frame()?;
    let window = s.window(&cfg)?;
    let x: DDFrame = load_frame(symbols)?;
    let z: DDFrame = load_frame(received)?;
    let est = Estimator::new(&x, &cfg, &window, &s.estimator_config(&cfg))?;
    let p = targets.unwrap_or(s.targets());
    let found: Vec<TargetEstimate> = if p == 1 {
        vec![est.estimate_single(&z, noise_var)?]
    } else {
        est.clean(&z, p, noise_var)?.estimates
    };
    if table {
        println!("{:>3} {:>12} {:>12} {:>11} {:>11} {:>12} {:>5} {:>5} {:>4}", "#", "d_hat_m", "v_hat_mps", "alpha_re", "alpha_im", "objective", "k", "l", "it");
        for (i, e) in found.iter().enumerate() {
            println!(
                "{:>3} {:>12.3} {:>12.4} {:>11.4e} {:>11.4e} {:>12.4e} {:>5} {:>5} {:>4}",
                i + 1,
                e.d_hat,
                e.v_hat,
                e.alpha_hat.re,
                e.alpha_hat.im,
                e.objective,
                e.coarse_bins.0,
                e.coarse_bins.1,
                e.iterations_used
            );
        }
    } else {
        println!("{}", serde_json::to_string_pretty(&found)?);
    }
    Ok(())
}

fn bench(spec: &PathBuf, out: &PathBuf, timing: bool, full: bool) -> Result<()> {
    let s = ExperimentSpec::load(spec).with_context(|| format!("reading {}", spec.display()))?;
    if !full && s.m_subcarriers * s.n_symbols > DESK_CELLS {
        bail!("{} x {} frames need --full", s.m_subcarriers, s.n_symbols);
    }
    let rows = run_experiment(&s, timing)?;
    emit(&rows, OutputFormat::from_path(out), out)?;
    Ok(())
}

fn validate(spec: &PathBuf, draws: usize, oversample: usize) -> Result<()> {
    let s = ExperimentSpec::load(spec)?;
    println!("{:>10} {:>12} {:>12} {:>12}", s.sweep.to_string(), "ideal_phi", "rect_psi", "rect_approx");
    for (si, &v) in s.sweep_values.iter().enumerate() {
        let s = s.at(v)?;
        let cfg = s.frame()?;
        let window = s.window(&cfg)?;
        let mut sums = [0.0f64; 3];
        let mut refs = 0.0;
        for d in 0..draws {
            let mut rng = trial_rng(s.seed, si, d);
            let geo = window.geometry(rng.random::<f64>() * window.r_max(), rng.random::<f64>() * window.v_max());
            let x = random_qam_frame(&cfg, rng.random());
            let oracle = oracle_echo_geometries(&[(geo, Complex64::new(1.0, 0.0))], &x, &cfg, oversample, Granularity::PerSymbol)?;
            refs += oracle.norm_sqr();
            for (i, kind) in [ModelKind::IdealPhi, ModelKind::RectPsi, ModelKind::RectApprox].into_iter().enumerate() {
                sums[i] += model_echo(&geo, &x, &cfg, &window, kind)?.sub(&oracle).norm_sqr();
            }
        }
        let r: Vec<f64> = sums.iter().map(|e| (e / refs).sqrt()).collect();
        println!("{:>10} {:>12.4} {:>12.4} {:>12.4}", v, r[0], r[1], r[2]);
    }
    Ok(())
}
