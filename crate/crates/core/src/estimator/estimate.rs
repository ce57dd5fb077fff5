use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bank::{Match, MatchedFilterBank, Prepared};
use super::bomp::{bomp_coarse, build_compressed, CoarseResult};
use super::config::{EstimatorConfig, TargetEstimate};
use crate::ddmodel::{build_modified_symbols, phi_ideal, psi_echo, ModelKind, SymbolOperator};
use crate::frame::{DDFrame, FrameConfig, SceneWindow};
use crate::{Error, Result};

/// Two-step estimator bound to one transmitted frame.
#[derive(Debug, Clone)]
pub struct Estimator {
    cfg: FrameConfig,
    window: SceneWindow,
    est: EstimatorConfig,
    x: DDFrame,
    dictionary: SymbolOperator,
    bank: MatchedFilterBank,
}

impl Estimator {
    /// `cfg` fixes the frame numerology; the stop-and-go order is taken from `est.b_order`.
    pub fn new(x: &DDFrame, cfg: &FrameConfig, window: &SceneWindow, est: &EstimatorConfig) -> Result<Self> {
        est.validate(cfg)?;
        let cfg = cfg.with_order(est.b_order)?;
        let modified = est.model_kind == ModelKind::RectApprox;
        let dictionary = SymbolOperator::for_window(x, &cfg, window, modified)?;
        let bank = MatchedFilterBank::new(x, &cfg, window, modified, est.ramp)?;
        Ok(Self { cfg, window: *window, est: est.clone(), x: x.clone(), dictionary, bank })
    }

    pub fn cfg(&self) -> &FrameConfig {
        &self.cfg
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.est
    }

    pub fn bank(&self) -> &MatchedFilterBank {
        &self.bank
    }

    pub fn dictionary(&self) -> &SymbolOperator {
        &self.dictionary
    }

    /// Echo e(d, v, B) as seen by the fine stage.
    pub fn echo(&self, d: f64, v: f64) -> Result<DDFrame> {
        let geo = self.window.geometry(d, v);
        let phi = phi_ideal(&geo, &self.cfg);
        match (self.est.refine_model, self.est.model_kind) {
            (Some(ModelKind::RectPsi), _) => psi_echo(&geo, &self.x, &self.cfg),
            (_, ModelKind::IdealPhi) => Ok(self.dictionary.apply(&phi)),
            _ => Ok(SymbolOperator::modified(&self.x, &self.cfg, self.bank.ramp_rate(v))?.apply(&phi)),
        }
    }

    fn lattice_max(&self) -> (usize, usize) {
        let i = (self.window.r_max() / self.est.fine_step_r + 1e-9).floor() as usize;
        let j = (self.window.v_max() / self.est.fine_step_rr + 1e-9).floor() as usize;
        (i, j)
    }

    /// Objective terms on a set of grid rows; `rows[j]` holds the delays at range-rate `vs[j]`.
    fn evaluate(&self, z: &DDFrame, zp: &Prepared, vs: &[f64], ds: &[f64]) -> Result<Vec<Vec<Match>>> {
        if self.est.refine_model == Some(ModelKind::RectPsi) {
            return vs
                .iter()
                .map(|&v| {
                    ds.iter()
                        .map(|&d| {
                            let e = psi_echo(&self.window.geometry(d, v), &self.x, &self.cfg)?;
                            Ok(Match { num: e.inner(z), den: e.norm_sqr() })
                        })
                        .collect()
                })
                .collect();
        }
        Ok(vs.iter().map(|&v| self.bank.row(zp, v, ds)).collect())
    }

    /// Best grid point, ties toward smaller d then smaller v.
    fn search(&self, z: &DDFrame, zp: &Prepared, is: &[usize], js: &[usize]) -> Result<(f64, f64, Match)> {
        let ds: Vec<f64> = is.iter().map(|&i| i as f64 * self.est.fine_step_r).collect();
        let vs: Vec<f64> = js.iter().map(|&j| j as f64 * self.est.fine_step_rr).collect();
        let grid = self.evaluate(z, zp, &vs, &ds)?;
        let mut best: Option<(f64, f64, Match)> = None;
        for (a, &d) in ds.iter().enumerate() {
            for (b, &v) in vs.iter().enumerate() {
                let mt = grid[b][a];
                if best.as_ref().is_none_or(|(_, _, m)| mt.objective() > m.objective()) {
                    best = Some((d, v, mt));
                }
            }
        }
        best.ok_or_else(|| Error::Domain("empty search grid".into()))
    }

    pub fn coarse(&self, z: &DDFrame, noise_var: f64) -> Result<CoarseResult> {
        let zc = build_compressed(z, self.est.bomp_blocks, self.est.selection_seed)?;
        bomp_coarse(&zc, &self.dictionary, self.est.bomp_blocks, self.est.bomp_threshold, noise_var)
    }

    /// Physical centre for the fine grid from the coarse peak (k̃, l̃).
    ///
    /// Under migration the peak can sit on the delay bin of any block, so d spans
    /// l̃·bin + v̄ b T_B over the blocks, widened by D bins. Along Doppler |Φ| is bounded
    /// by the D_{N/B} envelope, so v spans k̃ ± DB bins. That region is scanned with the
    /// matched filter on a lattice of a third of a bin and the best point is kept.
    pub fn coarse_centre(&self, zp: &Prepared, peak: (usize, usize)) -> (f64, f64) {
        const STEPS_PER_BIN: f64 = 3.0;
        let (k, l) = peak;
        let cfg = &self.cfg;
        let w = &self.window;
        let (n, m) = (cfg.n() as f64, cfg.m() as f64);
        let (bin_r, bin_rr) = (cfg.delay_bin_m(), cfg.doppler_bin_mps());
        let margin = self.est.sidelobe_order as f64 + 0.5;
        let (imax, jmax) = self.lattice_max();

        let db = (self.est.sidelobe_order * cfg.b()) as f64 + 0.5;
        let k_lo = k as f64 - db;
        let k_hi = k as f64 + db;
        let walk = (cfg.b() - 1) as f64 * cfg.block_duration_s();
        let (w_lo, w_hi) = ((w.v_bar_min_mps * walk).min(0.0), (w.v_bar_max_mps * walk).max(0.0));
        let d_lo = l as f64 * bin_r + w_lo - margin * bin_r;
        let d_hi = l as f64 * bin_r + w_hi + margin * bin_r;

        let lattice = |lo: f64, hi: f64, period: f64, step: f64, max: usize, stride: usize| {
            let mut out = Vec::new();
            for wrap in [-1.0, 0.0, 1.0] {
                let a = ((lo + wrap * period) / step).ceil().max(0.0) as i64;
                let b = ((hi + wrap * period) / step).floor().min(max as f64) as i64;
                out.extend((a..=b).step_by(stride).map(|i| i as usize));
            }
            out.sort_unstable();
            out.dedup();
            out
        };
        let stride_r = ((bin_r / STEPS_PER_BIN / self.est.fine_step_r).floor() as usize).max(1);
        let stride_rr = ((bin_rr / STEPS_PER_BIN / self.est.fine_step_rr).floor() as usize).max(1);
        let is = lattice(d_lo, d_hi, m * bin_r, self.est.fine_step_r, imax, stride_r);
        let js = lattice(k_lo * bin_rr, k_hi * bin_rr, n * bin_rr, self.est.fine_step_rr, jmax, stride_rr);
        let ds: Vec<f64> = is.iter().map(|&i| i as f64 * self.est.fine_step_r).collect();

        let mut best: Option<(f64, f64, f64)> = None;
        for &j in &js {
            let v = j as f64 * self.est.fine_step_rr;
            for (d, mt) in ds.iter().zip(self.bank.row(zp, v, &ds)) {
                let obj = mt.objective();
                if best.is_none_or(|(_, _, o)| obj > o) {
                    best = Some((*d, v, obj));
                }
            }
        }
        match best {
            Some((d, v, _)) => (d, v),
            None => ((l as f64 * bin_r).min(w.r_max()), (k as f64 * bin_rr).clamp(0.0, w.v_max())),
        }
    }

    /// ML search over the fine grid centred at the lattice point nearest (d_c, v_c),
    /// clipped to the window.
    pub fn refine(&self, z: &DDFrame, d_c: f64, v_c: f64) -> Result<(f64, f64, Match)> {
        let zp = self.bank.prepare(z)?;
        self.refine_prepared(z, &zp, d_c, v_c)
    }

    fn refine_prepared(&self, z: &DDFrame, zp: &Prepared, d_c: f64, v_c: f64) -> Result<(f64, f64, Match)> {
        let (imax, jmax) = self.lattice_max();
        let is = axis(d_c / self.est.fine_step_r, self.est.fine_pts_r, imax);
        let js = axis(v_c / self.est.fine_step_rr, self.est.fine_pts_rr, jmax);
        if is.is_empty() || js.is_empty() {
            return Err(Error::Domain(format!("fine grid around ({d_c}, {v_c}) lies outside the window")));
        }
        self.search(z, zp, &is, &js)
    }

    pub fn estimate_single(&self, z: &DDFrame, noise_var: f64) -> Result<TargetEstimate> {
        self.cfg.check_dims(z.rows(), z.cols())?;
        let coarse = self.coarse(z, noise_var)?;
        let zp = self.bank.prepare(z)?;
        let (d_c, v_c) = self.coarse_centre(&zp, coarse.peak);
        let (d, v, mt) = self.refine_prepared(z, &zp, d_c, v_c)?;
        Ok(self.finish(d, v, mt, coarse.peak, coarse.iterations(), coarse.support.is_empty(), noise_var))
    }

    /// ML over the whole lattice [0, r_max] x [0, v_max].
    pub fn exhaustive(&self, z: &DDFrame, noise_var: f64) -> Result<TargetEstimate> {
        self.cfg.check_dims(z.rows(), z.cols())?;
        let zp = self.bank.prepare(z)?;
        let (imax, jmax) = self.lattice_max();
        let is: Vec<usize> = (0..=imax).collect();
        let js: Vec<usize> = (0..=jmax).collect();
        let (d, v, mt) = self.search(z, &zp, &is, &js)?;
        let bins = (
            (v / self.cfg.doppler_bin_mps()).round() as usize % self.cfg.n(),
            (d / self.cfg.delay_bin_m()).round() as usize % self.cfg.m(),
        );
        Ok(self.finish(d, v, mt, bins, 0, false, noise_var))
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(&self, d: f64, v: f64, mt: Match, bins: (usize, usize), iters: usize, empty: bool, noise_var: f64) -> TargetEstimate {
        let objective = mt.objective();
        TargetEstimate {
            d_hat: d,
            v_hat: v,
            alpha_hat: mt.amplitude(),
            coarse_bins: bins,
            objective,
            iterations_used: iters,
            empty_support: empty,
            below_floor: empty || objective < self.est.report_floor * noise_var,
        }
    }

    /// CLEAN: estimate, subtract α̂·e(d̂, v̂), repeat up to `targets` times.
    pub fn clean(&self, z: &DDFrame, targets: usize, noise_var: f64) -> Result<CleanResult> {
        if targets == 0 {
            return Err(Error::Domain("CLEAN needs at least one target".into()));
        }
        let mut residual = z.clone();
        let mut estimates = Vec::with_capacity(targets);
        let mut residual_energy = vec![residual.norm_sqr()];
        let mut shortfall = false;
        for _ in 0..targets {
            let e = self.estimate_single(&residual, noise_var)?;
            if e.empty_support {
                shortfall = true;
                break;
            }
            let echo = self.echo(e.d_hat, e.v_hat)?;
            residual.add_scaled(&echo, -e.alpha_hat);
            residual_energy.push(residual.norm_sqr());
            estimates.push(e);
        }
        Ok(CleanResult { estimates, shortfall, residual_energy })
    }
}

/// Lattice indices of a `pts`-point axis centred on the point nearest `centre`, clipped
/// to 0..=max.
fn axis(centre: f64, pts: usize, max: usize) -> Vec<usize> {
    let c = centre.round() as i64;
    let lo = c - (pts as i64 - 1) / 2;
    (lo..lo + pts as i64).filter(|&i| i >= 0 && i <= max as i64).map(|i| i as usize).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleanResult {
    /// In recovery order.
    pub estimates: Vec<TargetEstimate>,
    /// The coarse stage found nothing before all targets were recovered.
    pub shortfall: bool,
    /// ||residual||² before the first and after every subtraction.
    pub residual_energy: Vec<f64>,
}

pub fn estimate_single(
    z: &DDFrame,
    x: &DDFrame,
    cfg: &FrameConfig,
    window: &SceneWindow,
    est: &EstimatorConfig,
    noise_var: f64,
) -> Result<TargetEstimate> {
    Estimator::new(x, cfg, window, est)?.estimate_single(z, noise_var)
}

/// Fine-grid search around (d̃, ṽ) and its LS amplitude.
pub fn refine_ml(
    z: &DDFrame,
    d_tilde: f64,
    v_tilde: f64,
    x: &DDFrame,
    cfg: &FrameConfig,
    window: &SceneWindow,
    est: &EstimatorConfig,
) -> Result<TargetEstimate> {
    let e = Estimator::new(x, cfg, window, est)?;
    let (d, v, mt) = e.refine(z, d_tilde, v_tilde)?;
    let bins = (
        (v_tilde / e.cfg.doppler_bin_mps()).round() as usize % e.cfg.n(),
        (d_tilde / e.cfg.delay_bin_m()).round() as usize % e.cfg.m(),
    );
    Ok(e.finish(d, v, mt, bins, 0, false, 0.0))
}

pub fn exhaustive_ml(
    z: &DDFrame,
    x: &DDFrame,
    cfg: &FrameConfig,
    window: &SceneWindow,
    est: &EstimatorConfig,
    noise_var: f64,
) -> Result<TargetEstimate> {
    Estimator::new(x, cfg, window, est)?.exhaustive(z, noise_var)
}

pub fn clean_multi(
    z: &DDFrame,
    targets: usize,
    x: &DDFrame,
    cfg: &FrameConfig,
    window: &SceneWindow,
    est: &EstimatorConfig,
    noise_var: f64,
) -> Result<CleanResult> {
    Estimator::new(x, cfg, window, est)?.clean(z, targets, noise_var)
}

/// Greedy association by normalized distance (Δd/bin)² + (Δv/bin)²: the closest
/// (truth, estimate) pair is matched first. Returns, per truth, the estimate index.
pub fn associate(truth: &[(f64, f64)], estimates: &[(f64, f64)], cfg: &FrameConfig) -> Vec<Option<usize>> {
    let (br, brr) = (cfg.delay_bin_m(), cfg.doppler_bin_mps());
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, t) in truth.iter().enumerate() {
        for (j, e) in estimates.iter().enumerate() {
            let dist = ((t.0 - e.0) / br).powi(2) + ((t.1 - e.1) / brr).powi(2);
            pairs.push((dist, i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut out = vec![None; truth.len()];
    let mut used = vec![false; estimates.len()];
    for (_, i, j) in pairs {
        if out[i].is_none() && !used[j] {
            out[i] = Some(j);
            used[j] = true;
        }
    }
    out
}

/// Amplitude-matched echo used by the CLEAN loop, exposed for callers building their
/// own cancellation.
pub fn amplitude_echo(est: &Estimator, d: f64, v: f64, alpha: Complex64) -> Result<DDFrame> {
    Ok(est.echo(d, v)?.scale(alpha))
}

/// Dictionary for the coarse stage: X, or Ξ with Λ(v_max/2).
pub fn coarse_dictionary(x: &DDFrame, cfg: &FrameConfig, window: &SceneWindow, kind: ModelKind) -> Result<SymbolOperator> {
    match kind {
        ModelKind::IdealPhi => SymbolOperator::ideal(x, cfg),
        _ => build_modified_symbols(x, cfg, window),
    }
}
