use num_complex::Complex64;

use crate::ddmodel::{model_echo, ModelKind};
use crate::frame::{DDFrame, FrameConfig, SceneWindow};
use crate::{Error, Result};

/// |e^H z|² / ||e||² with e = e(d, v, B) from the chosen model.
pub fn ml_objective(
    z: &DDFrame,
    d: f64,
    v: f64,
    cfg: &FrameConfig,
    window: &SceneWindow,
    kind: ModelKind,
    x: &DDFrame,
) -> Result<f64> {
    let (num, den) = project(z, d, v, cfg, window, kind, x)?;
    Ok(num.norm_sqr() / den)
}

/// Least-squares amplitude e^H z / ||e||².
pub fn estimate_amplitude(
    z: &DDFrame,
    d: f64,
    v: f64,
    cfg: &FrameConfig,
    window: &SceneWindow,
    kind: ModelKind,
    x: &DDFrame,
) -> Result<Complex64> {
    let (num, den) = project(z, d, v, cfg, window, kind, x)?;
    Ok(num / den)
}

fn project(
    z: &DDFrame,
    d: f64,
    v: f64,
    cfg: &FrameConfig,
    window: &SceneWindow,
    kind: ModelKind,
    x: &DDFrame,
) -> Result<(Complex64, f64)> {
    cfg.check_dims(z.rows(), z.cols())?;
    let e = model_echo(&window.geometry(d, v), x, cfg, window, kind)?;
    let den = e.norm_sqr();
    if den == 0.0 {
        return Err(Error::DegenerateDictionary(format!("zero-energy echo at d = {d}, v = {v}")));
    }
    Ok((e.inner(z), den))
}
