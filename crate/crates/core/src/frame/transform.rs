use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::config::FrameConfig;
use super::grid::{DDFrame, TFFrame};
use crate::Result;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Cached plan for an unnormalized DFT. `forward` uses the e^{-i2πkn/L} kernel.
pub(crate) fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(len)
        } else {
            p.plan_fft_inverse(len)
        }
    })
}

pub(crate) fn fft(buf: &mut [Complex64], forward: bool) {
    if buf.len() > 1 {
        plan(buf.len(), forward).process(buf);
    }
}

/// DFT of every row of a row-major `rows x cols` buffer.
pub(crate) fn fft_rows(data: &mut [Complex64], cols: usize, forward: bool) {
    if cols > 1 {
        plan(cols, forward).process(data);
    }
}

/// DFT of every column of a row-major `rows x cols` buffer.
pub(crate) fn fft_cols(data: &mut [Complex64], rows: usize, cols: usize, forward: bool) {
    if rows <= 1 {
        return;
    }
    let mut t = transpose(data, rows, cols);
    plan(rows, forward).process(&mut t);
    let back = transpose(&t, cols, rows);
    data.copy_from_slice(&back);
}

pub(crate) fn transpose(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = data[r * cols + c];
        }
    }
    out
}

/// Delay-Doppler to time-frequency:
/// X_TF[n,m] = (NM)^{-1/2} Σ_{k,l} X_DD[k,l] e^{i2π(nk/N - ml/M)}.
pub fn isfft(x_dd: &DDFrame, cfg: &FrameConfig) -> Result<TFFrame> {
    cfg.check_dims(x_dd.rows(), x_dd.cols())?;
    let (n, m) = x_dd.shape();
    let mut data = x_dd.as_slice().to_vec();
    fft_cols(&mut data, n, m, false);
    fft_rows(&mut data, m, true);
    let s = 1.0 / ((n * m) as f64).sqrt();
    data.iter_mut().for_each(|z| *z *= s);
    TFFrame::from_vec(n, m, data)
}

/// Time-frequency to delay-Doppler, the exact inverse of [`isfft`].
pub fn sfft(y_tf: &TFFrame, cfg: &FrameConfig) -> Result<DDFrame> {
    cfg.check_dims(y_tf.rows(), y_tf.cols())?;
    let (n, m) = y_tf.shape();
    let mut data = y_tf.as_slice().to_vec();
    fft_cols(&mut data, n, m, true);
    fft_rows(&mut data, m, false);
    let s = 1.0 / ((n * m) as f64).sqrt();
    data.iter_mut().for_each(|z| *z *= s);
    DDFrame::from_vec(n, m, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::random_qam_frame;
    use std::f64::consts::PI;

    fn cfg(n: usize, m: usize) -> FrameConfig {
        FrameConfig::new(m, n, 15e3, 0.075, 1).unwrap()
    }

    #[test]
    fn dc_entry_maps_to_flat_tf_grid() {
        let c = cfg(4, 8);
        let mut x = DDFrame::zeros(4, 8);
        x[(0, 0)] = Complex64::new((32f64).sqrt(), 0.0);
        let tf = isfft(&x, &c).unwrap();
        for z in tf.as_slice() {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let back = sfft(&tf, &c).unwrap();
        assert!(back.max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn two_by_two_scaling() {
        let c = cfg(2, 2);
        let mut x = DDFrame::zeros(2, 2);
        x[(0, 0)] = Complex64::new(1.0, 0.0);
        let tf = isfft(&x, &c).unwrap();
        for z in tf.as_slice() {
            assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn modulated_tf_grid_peaks_at_shift() {
        let (n, m) = (8, 16);
        let c = cfg(n, m);
        let (k0, l0) = (3, 11);
        let tf = TFFrame::from_fn(n, m, |nn, mm| {
            Complex64::from_polar(1.0, 2.0 * PI * (nn * k0) as f64 / n as f64 - 2.0 * PI * (mm * l0) as f64 / m as f64)
        });
        let dd = sfft(&tf, &c).unwrap();
        assert_eq!(dd.argmax_abs(), (k0, l0));
        assert!((dd[(k0, l0)].norm() - ((n * m) as f64).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn matches_direct_double_sum() {
        let (n, m) = (4, 6);
        let c = cfg(n, m);
        let x = random_qam_frame(&c, 3);
        let tf = isfft(&x, &c).unwrap();
        let s = 1.0 / ((n * m) as f64).sqrt();
        for nn in 0..n {
            for mm in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    for l in 0..m {
                        let ph = 2.0 * PI * ((nn * k) as f64 / n as f64 - (mm * l) as f64 / m as f64);
                        acc += x[(k, l)] * Complex64::from_polar(1.0, ph);
                    }
                }
                assert!((acc * s - tf[(nn, mm)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_mismatched_dimensions() {
        let c = cfg(4, 8);
        assert!(isfft(&DDFrame::zeros(8, 4), &c).is_err());
        assert!(sfft(&TFFrame::zeros(4, 7), &c).is_err());
    }
}
