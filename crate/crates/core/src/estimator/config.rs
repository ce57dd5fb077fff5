use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ddmodel::ModelKind;
use crate::frame::FrameConfig;
use crate::{Error, Result};

/// Range-rate at which the delay-axis ramp Λ of the approximated model is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RampMode {
    /// Λ(v_max/2) everywhere, as needed for a linear dictionary.
    Midpoint,
    /// Λ(v) at each candidate range-rate of the matched filter bank; the coarse stage
    /// still uses Λ(v_max/2).
    Candidate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    /// Σ_r, metres.
    pub fine_step_r: f64,
    /// Σ_rr, m/s.
    pub fine_step_rr: f64,
    /// G̃_r.
    pub fine_pts_r: usize,
    /// G̃_rr.
    pub fine_pts_rr: usize,
    /// K, number of delay bins kept by the selection and maximum BOMP iterations.
    pub bomp_blocks: usize,
    /// ε in the BOMP stopping rule.
    pub bomp_threshold: f64,
    /// D: Doppler bins scanned on either side of the coarse peak when resolving which
    /// block the peak belongs to.
    pub sidelobe_order: usize,
    /// Echo model of the estimator, `IdealPhi` or `RectApprox`.
    pub model_kind: ModelKind,
    /// Stop-and-go order assumed by the receiver.
    pub b_order: usize,
    pub ramp: RampMode,
    /// Fine-stage model override; `Some(RectPsi)` refines with the exact rectangular
    /// response. Slow, meant for ablations.
    pub refine_model: Option<ModelKind>,
    pub selection_seed: u64,
    /// Estimates whose objective is below `report_floor * noise_var` are flagged.
    pub report_floor: f64,
}

impl EstimatorConfig {
    /// Settings used for the published results: Σ = R/100, 401 x 401 fine points,
    /// K = 4P, ε = 1, with R the nominal resolutions c/(2MΔ) and λ/(2NT).
    pub fn paper(cfg: &FrameConfig, targets: usize, model_kind: ModelKind) -> Self {
        Self {
            fine_step_r: cfg.range_resolution_m() / 100.0,
            fine_step_rr: cfg.range_rate_resolution_mps() / 100.0,
            fine_pts_r: 401,
            fine_pts_rr: 401,
            bomp_blocks: 4 * targets.max(1),
            bomp_threshold: 1.0,
            sidelobe_order: 1,
            model_kind,
            b_order: cfg.b(),
            ramp: RampMode::Candidate,
            refine_model: None,
            selection_seed: 0x5eed,
            report_floor: 2.0 * (cfg.len() as f64).ln(),
        }
    }

    /// Coarser fine grid for desk-scale runs: `steps_per_bin` points per delay and
    /// Doppler bin, spanning one bin either side of the centre.
    pub fn desk(cfg: &FrameConfig, targets: usize, model_kind: ModelKind, steps_per_bin: usize) -> Self {
        let s = steps_per_bin.max(1);
        Self {
            fine_step_r: cfg.delay_bin_m() / s as f64,
            fine_step_rr: cfg.doppler_bin_mps() / s as f64,
            fine_pts_r: 2 * s + 1,
            fine_pts_rr: 2 * s + 1,
            ..Self::paper(cfg, targets, model_kind)
        }
    }

    pub fn validate(&self, cfg: &FrameConfig) -> Result<()> {
        let tol = 1.0 + 1e-12;
        if !(self.fine_step_r > 0.0 && self.fine_step_r <= cfg.delay_bin_m() * tol) {
            return Err(Error::Config(format!(
                "fine range step {} must be in (0, {}]",
                self.fine_step_r,
                cfg.delay_bin_m()
            )));
        }
        if !(self.fine_step_rr > 0.0 && self.fine_step_rr <= cfg.doppler_bin_mps() * tol) {
            return Err(Error::Config(format!(
                "fine range-rate step {} must be in (0, {}]",
                self.fine_step_rr,
                cfg.doppler_bin_mps()
            )));
        }
        if self.fine_pts_r == 0 || self.fine_pts_rr == 0 {
            return Err(Error::Config("fine grid needs at least one point per axis".into()));
        }
        if self.bomp_blocks == 0 || self.bomp_blocks > cfg.m() {
            return Err(Error::Domain(format!("K = {} must be in 1..={}", self.bomp_blocks, cfg.m())));
        }
        if !(self.bomp_threshold > 0.0) {
            return Err(Error::Config("BOMP threshold must be positive".into()));
        }
        if self.model_kind == ModelKind::RectPsi {
            return Err(Error::Config("the estimator model must be ideal_phi or rect_approx".into()));
        }
        if self.b_order == 0 || cfg.n() % self.b_order != 0 {
            return Err(Error::Config(format!("estimator B = {} must divide N = {}", self.b_order, cfg.n())));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetEstimate {
    pub d_hat: f64,
    pub v_hat: f64,
    pub alpha_hat: Complex64,
    /// (k̃, l̃) of the coarse peak.
    pub coarse_bins: (usize, usize),
    /// |e^H z|² / ||e||² at the estimate.
    pub objective: f64,
    /// BOMP iterations.
    pub iterations_used: usize,
    /// BOMP stopped before selecting any block.
    pub empty_support: bool,
    /// Objective below the reporting floor.
    pub below_floor: bool,
}
