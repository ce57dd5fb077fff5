//! Python bindings. Frames cross the boundary as N x M nested lists of complex numbers,
//! row k holding Doppler bin k.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use otfs_sense::bench::{run_experiment, to_csv, ExperimentSpec};
use otfs_sense::chansim::{self, Granularity, Scenario, Target};
use otfs_sense::ddmodel::{self, ModelKind};
use otfs_sense::estimator::{self, EstimatorConfig};
use otfs_sense::frame::{self, DDFrame};
use otfs_sense::SPEED_OF_LIGHT;

fn err(e: otfs_sense::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_frame(rows: Vec<Vec<Complex64>>) -> PyResult<DDFrame> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("ragged frame"));
    }
    DDFrame::from_vec(n, m, rows.into_iter().flatten().collect()).map_err(err)
}

fn from_frame(f: &DDFrame) -> Vec<Vec<Complex64>> {
    (0..f.rows()).map(|k| f.row(k).to_vec()).collect()
}

fn model_kind(s: &str) -> PyResult<ModelKind> {
    s.parse().map_err(err)
}

#[pyclass(frozen, from_py_object)]
#[derive(Clone, Copy)]
struct FrameConfig(frame::FrameConfig);

#[pymethods]
impl FrameConfig {
    #[new]
    #[pyo3(signature = (m, n, b=1, subcarrier_spacing_hz=15e3, carrier_hz=4e9))]
    fn new(m: usize, n: usize, b: usize, subcarrier_spacing_hz: f64, carrier_hz: f64) -> PyResult<Self> {
        frame::FrameConfig::new(m, n, subcarrier_spacing_hz, SPEED_OF_LIGHT / carrier_hz, b).map(Self).map_err(err)
    }

    #[staticmethod]
    fn reference(b: usize) -> PyResult<Self> {
        frame::FrameConfig::reference(b).map(Self).map_err(err)
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn b(&self) -> usize {
        self.0.b()
    }

    #[getter]
    fn delay_bin_m(&self) -> f64 {
        self.0.delay_bin_m()
    }

    #[getter]
    fn doppler_bin_mps(&self) -> f64 {
        self.0.doppler_bin_mps()
    }

    #[getter]
    fn frame_duration_s(&self) -> f64 {
        self.0.frame_duration_s()
    }

    fn __repr__(&self) -> String {
        format!("FrameConfig(m={}, n={}, b={})", self.0.m(), self.0.n(), self.0.b())
    }
}

#[pyclass(frozen, from_py_object)]
#[derive(Clone, Copy)]
struct SceneWindow(frame::SceneWindow);

#[pymethods]
impl SceneWindow {
    #[new]
    fn new(cfg: &FrameConfig, r_bar_min_m: f64, r_bar_max_m: f64, v_bar_min_mps: f64, v_bar_max_mps: f64) -> PyResult<Self> {
        frame::SceneWindow::new(&cfg.0, r_bar_min_m, r_bar_max_m, v_bar_min_mps, v_bar_max_mps).map(Self).map_err(err)
    }

    #[staticmethod]
    fn reference(cfg: &FrameConfig) -> PyResult<Self> {
        frame::SceneWindow::reference(&cfg.0).map(Self).map_err(err)
    }

    #[getter]
    fn r_max(&self) -> f64 {
        self.0.r_max()
    }

    #[getter]
    fn v_max(&self) -> f64 {
        self.0.v_max()
    }
}

#[pyfunction]
fn random_qam_frame(cfg: &FrameConfig, seed: u64) -> Vec<Vec<Complex64>> {
    from_frame(&frame::random_qam_frame(&cfg.0, seed))
}

/// Delay-Doppler to time-frequency; the result is indexed [symbol][subcarrier].
#[pyfunction]
fn isfft(x: Vec<Vec<Complex64>>, cfg: &FrameConfig) -> PyResult<Vec<Vec<Complex64>>> {
    let tf = frame::isfft(&to_frame(x)?, &cfg.0).map_err(err)?;
    Ok((0..tf.rows()).map(|n| tf.row(n).to_vec()).collect())
}

#[pyfunction]
fn sfft(y: Vec<Vec<Complex64>>, cfg: &FrameConfig) -> PyResult<Vec<Vec<Complex64>>> {
    let n = y.len();
    let m = y.first().map_or(0, |r| r.len());
    let tf = frame::TFFrame::from_vec(n, m, y.into_iter().flatten().collect()).map_err(err)?;
    Ok(from_frame(&frame::sfft(&tf, &cfg.0).map_err(err)?))
}

/// Echo of a unit-amplitude target at excess range `d` and range-rate `v`;
/// `kind` is "ideal_phi", "rect_psi" or "rect_approx".
#[pyfunction]
#[pyo3(signature = (x, cfg, window, d, v, kind="ideal_phi"))]
fn model_echo(x: Vec<Vec<Complex64>>, cfg: &FrameConfig, window: &SceneWindow, d: f64, v: f64, kind: &str) -> PyResult<Vec<Vec<Complex64>>> {
    let geo = window.0.geometry(d, v);
    let y = ddmodel::model_echo(&geo, &to_frame(x)?, &cfg.0, &window.0, model_kind(kind)?).map_err(err)?;
    Ok(from_frame(&y))
}

/// Time-domain rectangular-filter echo of `targets`, a list of (d, v, amplitude).
#[pyfunction]
#[pyo3(signature = (x, cfg, window, targets, oversample=8))]
fn oracle_echo(
    x: Vec<Vec<Complex64>>,
    cfg: &FrameConfig,
    window: &SceneWindow,
    targets: Vec<(f64, f64, Complex64)>,
    oversample: usize,
) -> PyResult<Vec<Vec<Complex64>>> {
    let ts = targets.into_iter().map(|(d, v, a)| Target::new(d, v, a)).collect();
    let sc = Scenario::new(cfg.0, window.0, ts, 0.0, oversample).map_err(err)?;
    Ok(from_frame(&chansim::oracle_echo_dd(&sc, &to_frame(x)?, Granularity::PerSymbol).map_err(err)?))
}

#[pyfunction]
fn add_noise(y: Vec<Vec<Complex64>>, noise_var: f64, seed: u64) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(from_frame(&chansim::add_noise(&to_frame(y)?, noise_var, seed)))
}

#[pyfunction]
#[pyo3(signature = (snr_db, cfg, mean_amp_sq=1.0))]
fn snr_to_noise_var(snr_db: f64, cfg: &FrameConfig, mean_amp_sq: f64) -> PyResult<f64> {
    chansim::snr_to_noise_var(10f64.powf(snr_db / 10.0), mean_amp_sq, &cfg.0).map_err(err)
}

#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct TargetEstimate {
    d_hat: f64,
    v_hat: f64,
    alpha_hat: Complex64,
    coarse_bins: (usize, usize),
    objective: f64,
    below_floor: bool,
}

impl From<&estimator::TargetEstimate> for TargetEstimate {
    fn from(e: &estimator::TargetEstimate) -> Self {
        Self {
            d_hat: e.d_hat,
            v_hat: e.v_hat,
            alpha_hat: e.alpha_hat,
            coarse_bins: e.coarse_bins,
            objective: e.objective,
            below_floor: e.below_floor,
        }
    }
}

#[pymethods]
impl TargetEstimate {
    fn __repr__(&self) -> String {
        format!("TargetEstimate(d_hat={:.3}, v_hat={:.4}, alpha_hat={})", self.d_hat, self.v_hat, self.alpha_hat)
    }
}

/// Two-step estimator bound to one transmitted frame.
#[pyclass(skip_from_py_object)]
struct Estimator(estimator::Estimator);

#[pymethods]
impl Estimator {
    /// `steps_per_bin` sets the fine grid to that many points per bin, one bin either side.
    #[new]
    #[pyo3(signature = (x, cfg, window, targets=1, kind="ideal_phi", steps_per_bin=10))]
    fn new(x: Vec<Vec<Complex64>>, cfg: &FrameConfig, window: &SceneWindow, targets: usize, kind: &str, steps_per_bin: usize) -> PyResult<Self> {
        let est = EstimatorConfig::desk(&cfg.0, targets, model_kind(kind)?, steps_per_bin);
        estimator::Estimator::new(&to_frame(x)?, &cfg.0, &window.0, &est).map(Self).map_err(err)
    }

    fn estimate(&self, z: Vec<Vec<Complex64>>, noise_var: f64) -> PyResult<TargetEstimate> {
        Ok((&self.0.estimate_single(&to_frame(z)?, noise_var).map_err(err)?).into())
    }

    fn exhaustive(&self, z: Vec<Vec<Complex64>>, noise_var: f64) -> PyResult<TargetEstimate> {
        Ok((&self.0.exhaustive(&to_frame(z)?, noise_var).map_err(err)?).into())
    }

    /// CLEAN loop; estimates come back in recovery order.
    fn clean(&self, z: Vec<Vec<Complex64>>, targets: usize, noise_var: f64) -> PyResult<Vec<TargetEstimate>> {
        let r = self.0.clean(&to_frame(z)?, targets, noise_var).map_err(err)?;
        Ok(r.estimates.iter().map(Into::into).collect())
    }
}

/// Runs a Monte Carlo experiment given as `key = value` text and returns the CSV.
#[pyfunction]
fn run_bench(spec_text: &str) -> PyResult<String> {
    let spec = ExperimentSpec::parse(spec_text).map_err(err)?;
    Ok(to_csv(&run_experiment(&spec, false).map_err(err)?))
}

#[pymodule(name = "otfs_sense")]
fn otfs_sense_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<FrameConfig>()?;
    m.add_class::<SceneWindow>()?;
    m.add_class::<TargetEstimate>()?;
    m.add_class::<Estimator>()?;
    m.add_function(wrap_pyfunction!(random_qam_frame, m)?)?;
    m.add_function(wrap_pyfunction!(isfft, m)?)?;
    m.add_function(wrap_pyfunction!(sfft, m)?)?;
    m.add_function(wrap_pyfunction!(model_echo, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_echo, m)?)?;
    m.add_function(wrap_pyfunction!(add_noise, m)?)?;
    m.add_function(wrap_pyfunction!(snr_to_noise_var, m)?)?;
    m.add_function(wrap_pyfunction!(run_bench, m)?)?;
    Ok(())
}
