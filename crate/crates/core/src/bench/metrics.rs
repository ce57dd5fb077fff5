use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chansim::Target;
use crate::estimator::{associate, TargetEstimate};
use crate::frame::FrameConfig;
use crate::{Error, Result};

/// Squared errors of one matched (truth, estimate) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairErrors {
    pub err_r_sq: f64,
    pub err_rr_sq: f64,
    pub err_alpha_sq: f64,
    pub alpha_sq: f64,
}

/// Per truth target, the errors of its associated estimate or `None` for a miss.
pub fn compute_metrics(
    truth: &[Target],
    estimates: &[TargetEstimate],
    cfg: &FrameConfig,
) -> Vec<Option<PairErrors>> {
    let t: Vec<(f64, f64)> = truth.iter().map(|t| (t.excess_range_m, t.excess_range_rate_mps)).collect();
    let e: Vec<(f64, f64)> = estimates.iter().map(|e| (e.d_hat, e.v_hat)).collect();
    associate(&t, &e, cfg)
        .into_iter()
        .zip(truth)
        .map(|(j, t)| {
            j.map(|j| {
                let e = &estimates[j];
                PairErrors {
                    err_r_sq: (t.excess_range_m - e.d_hat).powi(2),
                    err_rr_sq: (t.excess_range_rate_mps - e.v_hat).powi(2),
                    err_alpha_sq: (t.amplitude - e.alpha_hat).norm_sqr(),
                    alpha_sq: t.amplitude.norm_sqr(),
                }
            })
        })
        .collect()
}

/// Running sums for one target over the trials of a sweep point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Accumulator {
    pub matched: usize,
    pub misses: usize,
    pub sum_r: f64,
    pub sum_rr: f64,
    pub sum_alpha: f64,
    pub sum_alpha_ref: f64,
}

impl Accumulator {
    pub fn push(&mut self, e: Option<PairErrors>) {
        match e {
            Some(e) => {
                self.matched += 1;
                self.sum_r += e.err_r_sq;
                self.sum_rr += e.err_rr_sq;
                self.sum_alpha += e.err_alpha_sq;
                self.sum_alpha_ref += e.alpha_sq;
            }
            None => self.misses += 1,
        }
    }

    pub fn rmse_r(&self) -> Option<f64> {
        (self.matched > 0).then(|| (self.sum_r / self.matched as f64).sqrt())
    }

    pub fn rmse_rr(&self) -> Option<f64> {
        (self.matched > 0).then(|| (self.sum_rr / self.matched as f64).sqrt())
    }

    pub fn nrmse_alpha(&self) -> Option<f64> {
        (self.sum_alpha_ref > 0.0).then(|| (self.sum_alpha / self.sum_alpha_ref).sqrt())
    }
}

/// One CSV line: metrics of one target at one sweep value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub sweep: f64,
    pub target_id: usize,
    pub rmse_r_m: Option<f64>,
    pub rmse_rr_mps: Option<f64>,
    pub nrmse_alpha: Option<f64>,
    pub trials: usize,
    pub wall_s: Option<f64>,
    pub misses: usize,
    pub miss_penalty: f64,
    pub status: String,
}

pub const CSV_HEADER: &str = "sweep,target_id,rmse_r_m,rmse_rr_mps,nrmse_alpha,trials,wall_s,misses,miss_penalty,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    /// From a file extension, CSV unless it is `.json`.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Csv,
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn to_csv(rows: &[MetricRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let status: String = r.status.chars().map(|c| if c == ',' || c == '\n' || c == '\r' { ';' } else { c }).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.sweep,
            r.target_id,
            opt(r.rmse_r_m),
            opt(r.rmse_rr_mps),
            opt(r.nrmse_alpha),
            r.trials,
            opt(r.wall_s),
            r.misses,
            r.miss_penalty,
            status
        ));
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<MetricRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => return Err(Error::Parse { line: 1, msg: "missing or unexpected CSV header".into() }),
    }
    let mut rows = Vec::new();
    for (i, l) in lines {
        let line = i + 1;
        if l.is_empty() {
            continue;
        }
        let f: Vec<&str> = l.splitn(10, ',').collect();
        if f.len() != 10 {
            return Err(Error::Parse { line, msg: format!("expected 10 fields, got {}", f.len()) });
        }
        let num = |s: &str| -> Result<f64> { s.parse().map_err(|e| Error::Parse { line, msg: format!("{s}: {e}") }) };
        let int = |s: &str| -> Result<usize> { s.parse().map_err(|e| Error::Parse { line, msg: format!("{s}: {e}") }) };
        let optn = |s: &str| -> Result<Option<f64>> { if s.is_empty() { Ok(None) } else { num(s).map(Some) } };
        rows.push(MetricRow {
            sweep: num(f[0])?,
            target_id: int(f[1])?,
            rmse_r_m: optn(f[2])?,
            rmse_rr_mps: optn(f[3])?,
            nrmse_alpha: optn(f[4])?,
            trials: int(f[5])?,
            wall_s: optn(f[6])?,
            misses: int(f[7])?,
            miss_penalty: num(f[8])?,
            status: f[9].to_string(),
        });
    }
    Ok(rows)
}

pub fn to_json(rows: &[MetricRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)? + "\n")
}

pub fn emit(rows: &[MetricRow], format: OutputFormat, path: &Path) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => to_csv(rows),
        OutputFormat::Json => to_json(rows)?,
    };
    std::fs::write(path, text)?;
    Ok(())
}
