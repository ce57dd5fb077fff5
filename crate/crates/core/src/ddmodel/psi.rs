use std::f64::consts::PI;

use num_complex::Complex64;

use super::phi::BlockTerms;
use crate::frame::{fft, fft_cols, fft_rows, DDFrame, EchoGeometry, FrameConfig};
use crate::Result;

/// Rectangular-filter response Ψ_{k',l'}[k,l]. Unlike Φ it depends on the position
/// (k', l') of the input symbol, so it is kept as per-block factors and evaluated on demand.
#[derive(Debug, Clone)]
pub struct PsiKernel {
    cfg: FrameConfig,
    terms: BlockTerms,
}

impl PsiKernel {
    pub fn new(geo: &EchoGeometry, cfg: &FrameConfig) -> Self {
        Self { cfg: *cfg, terms: BlockTerms::new(geo, cfg) }
    }

    /// First ISI-zone delay index of block b.
    pub fn zone_boundary(&self, b: usize) -> usize {
        self.terms.zone[b]
    }

    /// Contribution Ψ_{b,k',l'}[k,l] of a single block.
    pub fn block(&self, b: usize, k_in: usize, l_in: usize, k: i64, l: i64) -> Complex64 {
        let cfg = &self.cfg;
        let t = &self.terms;
        let (n, m) = (cfg.n() as f64, cfg.m() as f64);
        let dop = t.doppler(cfg, b, k as f64);
        if l_in < t.zone[b] {
            let ramp = Complex64::from_polar(1.0, 2.0 * PI * t.theta * l_in as f64 / m);
            t.phase[b] * ramp * dop * t.delay(cfg, b, l as f64)
        } else {
            let twist = Complex64::from_polar(1.0, -2.0 * PI * k_in as f64 / n);
            let ramp = Complex64::from_polar(1.0, 2.0 * PI * t.theta * (l_in as f64 - m) / m);
            let corr = if b == 0 { cfg.b() as f64 / n } else { 0.0 };
            twist * t.phase[b] * ramp * (dop - corr) * t.delay(cfg, b, l as f64 + m)
        }
    }

    /// Ψ_{k',l'}[k,l], the block average.
    pub fn eval(&self, k_in: usize, l_in: usize, k: i64, l: i64) -> Complex64 {
        (0..self.cfg.b()).map(|b| self.block(b, k_in, l_in, k, l)).sum::<Complex64>() / self.cfg.b() as f64
    }
}

pub fn psi_rect(geo: &EchoGeometry, cfg: &FrameConfig) -> PsiKernel {
    PsiKernel::new(geo, cfg)
}

/// Exact rectangular-filter echo Σ_{k',l'} X[k',l'] Ψ_{k',l'}[k-k', l-l'].
///
/// For each block the symbols in each delay zone are multiplied by their (k', l')
/// dependent phases and circularly convolved with an outer-product kernel, so the whole
/// echo is 2B masked convolutions carried out in the 2-D DFT domain.
pub fn psi_echo(geo: &EchoGeometry, x: &DDFrame, cfg: &FrameConfig) -> Result<DDFrame> {
    cfg.check_dims(x.rows(), x.cols())?;
    let (n, m, nb) = (cfg.n(), cfg.m(), cfg.b());
    let t = BlockTerms::new(geo, cfg);
    let (nf, mf) = (n as f64, m as f64);

    let mut u1 = x.as_slice().to_vec();
    let mut u2 = x.as_slice().to_vec();
    for k in 0..n {
        let twist = Complex64::from_polar(1.0, -2.0 * PI * k as f64 / nf);
        for l in 0..m {
            let r1 = Complex64::from_polar(1.0, 2.0 * PI * t.theta * l as f64 / mf);
            let r2 = Complex64::from_polar(1.0, 2.0 * PI * t.theta * (l as f64 - mf) / mf);
            u1[k * m + l] *= r1;
            u2[k * m + l] *= twist * r2;
        }
    }
    fft_cols(&mut u1, n, m, true);
    fft_cols(&mut u2, n, m, true);

    let zero = Complex64::new(0.0, 0.0);
    let mut acc = vec![zero; n * m];
    let mut g1 = vec![zero; n * m];
    let mut g2 = vec![zero; n * m];
    for b in 0..nb {
        let zb = t.zone[b];
        for k in 0..n {
            let row = k * m;
            for l in 0..m {
                let (a, c) = if l < zb { (u1[row + l], zero) } else { (zero, u2[row + l]) };
                g1[row + l] = a;
                g2[row + l] = c;
            }
        }
        fft_rows(&mut g1, m, true);
        fft_rows(&mut g2, m, true);

        let mut da: Vec<Complex64> = (0..n).map(|j| t.doppler(cfg, b, j as f64)).collect();
        let corr = if b == 0 { nb as f64 / nf } else { 0.0 };
        let mut db: Vec<Complex64> = da.iter().map(|z| z - corr).collect();
        let mut dc: Vec<Complex64> = (0..m).map(|i| t.delay(cfg, b, i as f64)).collect();
        fft(&mut da, true);
        fft(&mut db, true);
        fft(&mut dc, true);

        let w = t.phase[b] / nb as f64;
        for p in 0..n {
            let row = p * m;
            for q in 0..m {
                acc[row + q] += w * dc[q] * (g1[row + q] * da[p] + g2[row + q] * db[p]);
            }
        }
    }
    fft_cols(&mut acc, n, m, false);
    fft_rows(&mut acc, m, false);
    let s = 1.0 / (n * m) as f64;
    acc.iter_mut().for_each(|z| *z *= s);
    DDFrame::from_vec(n, m, acc)
}

/// Direct O((NM)^2) evaluation of the same sum, used as a reference.
pub fn psi_echo_direct(geo: &EchoGeometry, x: &DDFrame, cfg: &FrameConfig) -> DDFrame {
    let kern = PsiKernel::new(geo, cfg);
    let (n, m) = (cfg.n(), cfg.m());
    DDFrame::from_fn(n, m, |k, l| {
        let mut acc = Complex64::new(0.0, 0.0);
        for kp in 0..n {
            for lp in 0..m {
                acc += x[(kp, lp)] * kern.eval(kp, lp, k as i64 - kp as i64, l as i64 - lp as i64);
            }
        }
        acc
    })
}
