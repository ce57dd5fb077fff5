use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ddmodel::ModelKind;
use crate::estimator::{EstimatorConfig, RampMode};
use crate::frame::{FrameConfig, SceneWindow};
use crate::{Error, Result, SPEED_OF_LIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    /// Stop-and-go order of the receiver.
    B,
    /// SNR of target 1, dB.
    SnrDb,
    /// Lower edge of the range-rate window; the window width is kept.
    VBarMinMps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    Ideal,
    Rect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    TwoStep,
    ExhaustiveMl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeModel {
    /// Circular Gaussian α with the target's mean power.
    Swerling1,
    /// |α|² equal to the mean power, uniform phase.
    FixedMagnitude,
}

macro_rules! keyword_enum {
    ($t:ty, $($s:literal => $v:expr),+) => {
        impl FromStr for $t {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($s => Ok($v),)+
                    other => Err(Error::Usage(format!("unknown {} '{other}'", stringify!($t)))),
                }
            }
        }
    };
}

keyword_enum!(SweepVar, "b" => SweepVar::B, "snr_db" => SweepVar::SnrDb, "v_bar_min_mps" => SweepVar::VBarMinMps);
keyword_enum!(FilterKind, "ideal" => FilterKind::Ideal, "rect" => FilterKind::Rect);
keyword_enum!(EstimatorKind, "two_step" => EstimatorKind::TwoStep, "exhaustive_ml" => EstimatorKind::ExhaustiveMl);
keyword_enum!(AmplitudeModel, "swerling1" => AmplitudeModel::Swerling1, "fixed_magnitude" => AmplitudeModel::FixedMagnitude);
keyword_enum!(RampMode, "midpoint" => RampMode::Midpoint, "candidate" => RampMode::Candidate);

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVar::B => "b",
            SweepVar::SnrDb => "snr_db",
            SweepVar::VBarMinMps => "v_bar_min_mps",
        })
    }
}

/// One Monte Carlo experiment, read from `key = value` text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub m_subcarriers: usize,
    pub n_symbols: usize,
    pub subcarrier_spacing_hz: f64,
    pub carrier_hz: f64,
    pub b_order: usize,
    pub r_bar_min_m: f64,
    pub r_bar_max_m: f64,
    pub v_bar_min_mps: f64,
    pub v_bar_max_mps: f64,
    pub sweep: SweepVar,
    pub sweep_values: Vec<f64>,
    pub trials: usize,
    pub filter: FilterKind,
    pub estimator: EstimatorKind,
    /// SNR of target 1, dB; `inf` for noiseless.
    pub snr_db: f64,
    /// Mean power of each target relative to target 1, dB. Its length is P.
    pub target_power_db: Vec<f64>,
    pub amplitude: AmplitudeModel,
    /// Targets closer than this normalized distance (bins) are redrawn.
    pub min_separation_bins: f64,
    pub seed: u64,
    /// Fine-grid points per delay and Doppler bin; the grid spans one bin either side.
    pub fine_steps_per_bin: usize,
    pub fine_step_r_m: Option<f64>,
    pub fine_step_rr_mps: Option<f64>,
    pub fine_pts_r: Option<usize>,
    pub fine_pts_rr: Option<usize>,
    /// K; 4P when absent.
    pub bomp_blocks: Option<usize>,
    pub bomp_threshold: f64,
    pub sidelobe_order: usize,
    pub ramp: RampMode,
    pub refine_rect_psi: bool,
    pub selection_seed: u64,
    pub oversample: usize,
    /// Cost recorded per unmatched truth target.
    pub miss_penalty: f64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            m_subcarriers: 256,
            n_symbols: 64,
            subcarrier_spacing_hz: 15e3,
            carrier_hz: 4e9,
            b_order: 16,
            r_bar_min_m: 20e3,
            r_bar_max_m: 39e3,
            v_bar_min_mps: 15e3,
            v_bar_max_mps: 16e3,
            sweep: SweepVar::B,
            sweep_values: vec![1.0, 2.0, 4.0, 8.0, 16.0],
            trials: 100,
            filter: FilterKind::Ideal,
            estimator: EstimatorKind::TwoStep,
            snr_db: 20.0,
            target_power_db: vec![0.0],
            amplitude: AmplitudeModel::Swerling1,
            min_separation_bins: 0.0,
            seed: 1,
            fine_steps_per_bin: 20,
            fine_step_r_m: None,
            fine_step_rr_mps: None,
            fine_pts_r: None,
            fine_pts_rr: None,
            bomp_blocks: None,
            bomp_threshold: 1.0,
            sidelobe_order: 1,
            ramp: RampMode::Candidate,
            refine_rect_psi: false,
            selection_seed: 0x5eed,
            oversample: crate::chansim::DEFAULT_OVERSAMPLE,
            miss_penalty: 1.0,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e: T::Err| Error::Parse { line, msg: format!("{key}: {e}") })
}

fn parse_list(key: &str, value: &str, line: usize) -> Result<Vec<f64>> {
    value.split(',').map(|s| parse_value(key, s.trim(), line)).collect()
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Self::default();
        let mut seen = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| Error::Parse { line, msg: format!("expected key = value, got '{body}'") })?;
            let (k, v) = (k.trim(), v.trim());
            if seen.insert(k.to_string(), line).is_some() {
                return Err(Error::Parse { line, msg: format!("duplicate key '{k}'") });
            }
            match k {
                "m_subcarriers" => s.m_subcarriers = parse_value(k, v, line)?,
                "n_symbols" => s.n_symbols = parse_value(k, v, line)?,
                "subcarrier_spacing_hz" => s.subcarrier_spacing_hz = parse_value(k, v, line)?,
                "carrier_hz" => s.carrier_hz = parse_value(k, v, line)?,
                "b_order" => s.b_order = parse_value(k, v, line)?,
                "r_bar_min_m" => s.r_bar_min_m = parse_value(k, v, line)?,
                "r_bar_max_m" => s.r_bar_max_m = parse_value(k, v, line)?,
                "v_bar_min_mps" => s.v_bar_min_mps = parse_value(k, v, line)?,
                "v_bar_max_mps" => s.v_bar_max_mps = parse_value(k, v, line)?,
                "sweep" => s.sweep = parse_value(k, v, line)?,
                "sweep_values" => s.sweep_values = parse_list(k, v, line)?,
                "trials" => s.trials = parse_value(k, v, line)?,
                "filter" => s.filter = parse_value(k, v, line)?,
                "estimator" => s.estimator = parse_value(k, v, line)?,
                "snr_db" => s.snr_db = parse_value(k, v, line)?,
                "target_power_db" => s.target_power_db = parse_list(k, v, line)?,
                "amplitude" => s.amplitude = parse_value(k, v, line)?,
                "min_separation_bins" => s.min_separation_bins = parse_value(k, v, line)?,
                "seed" => s.seed = parse_value(k, v, line)?,
                "fine_steps_per_bin" => s.fine_steps_per_bin = parse_value(k, v, line)?,
                "fine_step_r_m" => s.fine_step_r_m = Some(parse_value(k, v, line)?),
                "fine_step_rr_mps" => s.fine_step_rr_mps = Some(parse_value(k, v, line)?),
                "fine_pts_r" => s.fine_pts_r = Some(parse_value(k, v, line)?),
                "fine_pts_rr" => s.fine_pts_rr = Some(parse_value(k, v, line)?),
                "bomp_blocks" => s.bomp_blocks = Some(parse_value(k, v, line)?),
                "bomp_threshold" => s.bomp_threshold = parse_value(k, v, line)?,
                "sidelobe_order" => s.sidelobe_order = parse_value(k, v, line)?,
                "ramp" => s.ramp = parse_value(k, v, line)?,
                "refine_rect_psi" => s.refine_rect_psi = parse_value(k, v, line)?,
                "selection_seed" => s.selection_seed = parse_value(k, v, line)?,
                "oversample" => s.oversample = parse_value(k, v, line)?,
                "miss_penalty" => s.miss_penalty = parse_value(k, v, line)?,
                other => return Err(Error::Parse { line, msg: format!("unknown key '{other}'") }),
            }
        }
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn targets(&self) -> usize {
        self.target_power_db.len()
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// Spec with the sweep variable set to `value`.
    pub fn at(&self, value: f64) -> Result<Self> {
        let mut s = self.clone();
        match self.sweep {
            SweepVar::B => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::Config(format!("B = {value} is not a positive integer")));
                }
                s.b_order = value as usize;
            }
            SweepVar::SnrDb => s.snr_db = value,
            SweepVar::VBarMinMps => {
                let width = self.v_bar_max_mps - self.v_bar_min_mps;
                s.v_bar_min_mps = value;
                s.v_bar_max_mps = value + width;
            }
        }
        Ok(s)
    }

    pub fn frame(&self) -> Result<FrameConfig> {
        FrameConfig::new(self.m_subcarriers, self.n_symbols, self.subcarrier_spacing_hz, self.wavelength_m(), self.b_order)
    }

    pub fn window(&self, cfg: &FrameConfig) -> Result<SceneWindow> {
        SceneWindow::new(cfg, self.r_bar_min_m, self.r_bar_max_m, self.v_bar_min_mps, self.v_bar_max_mps)
    }

    pub fn model_kind(&self) -> ModelKind {
        match self.filter {
            FilterKind::Ideal => ModelKind::IdealPhi,
            FilterKind::Rect => ModelKind::RectApprox,
        }
    }

    pub fn estimator_config(&self, cfg: &FrameConfig) -> EstimatorConfig {
        let mut e = EstimatorConfig::desk(cfg, self.targets(), self.model_kind(), self.fine_steps_per_bin);
        if let Some(x) = self.fine_step_r_m {
            e.fine_step_r = x;
        }
        if let Some(x) = self.fine_step_rr_mps {
            e.fine_step_rr = x;
        }
        if let Some(x) = self.fine_pts_r {
            e.fine_pts_r = x;
        }
        if let Some(x) = self.fine_pts_rr {
            e.fine_pts_rr = x;
        }
        if let Some(k) = self.bomp_blocks {
            e.bomp_blocks = k;
        }
        e.bomp_threshold = self.bomp_threshold;
        e.sidelobe_order = self.sidelobe_order;
        e.ramp = self.ramp;
        e.refine_model = self.refine_rect_psi.then_some(ModelKind::RectPsi);
        e.selection_seed = self.selection_seed;
        e
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.target_power_db.is_empty() {
            return Err(Error::Config("at least one target is needed".into()));
        }
        if self.estimator == EstimatorKind::ExhaustiveMl && self.targets() > 1 {
            return Err(Error::Config("exhaustive ML handles a single target".into()));
        }
        if !(self.carrier_hz > 0.0) {
            return Err(Error::Config("carrier must be positive".into()));
        }
        if self.fine_steps_per_bin == 0 {
            return Err(Error::Config("fine_steps_per_bin must be at least 1".into()));
        }
        if self.sweep_values.is_empty() {
            return Err(Error::Config("sweep_values is empty".into()));
        }
        for &v in &self.sweep_values {
            let s = self.at(v)?;
            let cfg = s.frame()?;
            s.window(&cfg)?;
            s.estimator_config(&cfg).validate(&cfg)?;
        }
        Ok(())
    }

    /// Canonical `key = value` text; parsing it gives back the same spec.
    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        let mut put = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        put("m_subcarriers", self.m_subcarriers.to_string());
        put("n_symbols", self.n_symbols.to_string());
        put("subcarrier_spacing_hz", self.subcarrier_spacing_hz.to_string());
        put("carrier_hz", self.carrier_hz.to_string());
        put("b_order", self.b_order.to_string());
        put("r_bar_min_m", self.r_bar_min_m.to_string());
        put("r_bar_max_m", self.r_bar_max_m.to_string());
        put("v_bar_min_mps", self.v_bar_min_mps.to_string());
        put("v_bar_max_mps", self.v_bar_max_mps.to_string());
        put("sweep", self.sweep.to_string());
        put("sweep_values", list(&self.sweep_values));
        put("trials", self.trials.to_string());
        put("filter", keyword(&self.filter));
        put("estimator", keyword(&self.estimator));
        put("snr_db", self.snr_db.to_string());
        put("target_power_db", list(&self.target_power_db));
        put("amplitude", keyword(&self.amplitude));
        put("min_separation_bins", self.min_separation_bins.to_string());
        put("seed", self.seed.to_string());
        put("fine_steps_per_bin", self.fine_steps_per_bin.to_string());
        if let Some(x) = self.fine_step_r_m {
            put("fine_step_r_m", x.to_string());
        }
        if let Some(x) = self.fine_step_rr_mps {
            put("fine_step_rr_mps", x.to_string());
        }
        if let Some(x) = self.fine_pts_r {
            put("fine_pts_r", x.to_string());
        }
        if let Some(x) = self.fine_pts_rr {
            put("fine_pts_rr", x.to_string());
        }
        if let Some(x) = self.bomp_blocks {
            put("bomp_blocks", x.to_string());
        }
        put("bomp_threshold", self.bomp_threshold.to_string());
        put("sidelobe_order", self.sidelobe_order.to_string());
        put("ramp", keyword(&self.ramp));
        put("refine_rect_psi", self.refine_rect_psi.to_string());
        put("selection_seed", self.selection_seed.to_string());
        put("oversample", self.oversample.to_string());
        put("miss_penalty", self.miss_penalty.to_string());
        out
    }
}

/// snake_case name of a keyword enum, as serde spells it.
fn keyword<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}
