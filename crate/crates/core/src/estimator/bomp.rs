use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ddmodel::SymbolOperator;
use crate::frame::DDFrame;
use crate::{Error, Result};

/// Measurement restricted to K delay bins, all N Doppler rows of each.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedMeasurement {
    /// Selected delay bins, ascending.
    pub selected: Vec<usize>,
    /// Entry `i*N + k` is z[k, selected[i]].
    pub z_s: Vec<Complex64>,
}

impl CompressedMeasurement {
    /// Dictionary block m, NK x N, as N columns.
    pub fn block(&self, op: &SymbolOperator, m: usize) -> Vec<Vec<Complex64>> {
        (0..op.cfg().n()).map(|k| op.column(k, m, &self.selected)).collect()
    }
}

pub fn select_bins(m: usize, k: usize, seed: u64) -> Result<Vec<usize>> {
    if k == 0 || k > m {
        return Err(Error::Domain(format!("K = {k} must be in 1..={m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = rand::seq::index::sample(&mut rng, m, k).into_vec();
    s.sort_unstable();
    Ok(s)
}

pub fn build_compressed(z: &DDFrame, k: usize, selection_seed: u64) -> Result<CompressedMeasurement> {
    let (n, m) = z.shape();
    let selected = select_bins(m, k, selection_seed)?;
    let z_s = selected.iter().flat_map(|&l| (0..n).map(move |kk| z[(kk, l)])).collect();
    Ok(CompressedMeasurement { selected, z_s })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoarseResult {
    /// F̃, zero outside the selected blocks.
    pub response: DDFrame,
    /// Selected delay blocks in selection order.
    pub support: Vec<usize>,
    /// (k̃, l̃): l̃ is the first selected block and k̃ the largest entry of its own fit.
    pub peak: (usize, usize),
    /// ||z_s^(ℓ)||² before each iteration and after the last one.
    pub residual_norms: Vec<f64>,
}

impl CoarseResult {
    pub fn iterations(&self) -> usize {
        self.support.len()
    }
}

/// Block OMP over the dictionary blocks of `op`, stopping after `max_blocks` blocks or
/// once the residual after an update satisfies ||z_s||² < eps·N·K·σ².
pub fn bomp_coarse(
    zc: &CompressedMeasurement,
    op: &SymbolOperator,
    max_blocks: usize,
    eps: f64,
    noise_var: f64,
) -> Result<CoarseResult> {
    if !(eps > 0.0) {
        return Err(Error::Config(format!("eps must be positive, got {eps}")));
    }
    let cfg = op.cfg();
    let (n, m) = (cfg.n(), cfg.m());
    let kk = zc.selected.len();
    let rows = n * kk;
    if zc.z_s.len() != rows {
        return Err(Error::Config(format!("z_s has {} entries, expected {rows}", zc.z_s.len())));
    }
    let limit = max_blocks.min(kk).min(m);
    let thresh = eps * rows as f64 * noise_var;
    let z_energy: f64 = zc.z_s.iter().map(|z| z.norm_sqr()).sum();
    let floor = z_energy * 1e-24;

    let mut q: Vec<Vec<Complex64>> = Vec::new();
    let mut r_mat: Vec<Vec<Complex64>> = Vec::new();
    let mut coef: Vec<Complex64> = Vec::new();
    let mut support: Vec<usize> = Vec::new();
    // Blocks whose columns are dependent on the basis so far, e.g. a circulant of symbols
    // whose DFT has a zero; they are skipped and the next best block is tried.
    let mut rejected: Vec<usize> = Vec::new();
    let mut resid = zc.z_s.clone();
    let mut norms = vec![z_energy];

    // The threshold applies to the residual after an update, so at least one block is
    // always fitted unless z_s vanishes.
    while support.len() < limit {
        let rn = *norms.last().unwrap();
        if rn <= floor || (!support.is_empty() && rn < thresh) {
            break;
        }
        let mut u = DDFrame::zeros(n, m);
        for (i, &l) in zc.selected.iter().enumerate() {
            for k in 0..n {
                u[(k, l)] = resid[i * n + k];
            }
        }
        let corr = op.adjoint(&u);
        let mut best = None;
        for l in (0..m).filter(|l| !support.contains(l) && !rejected.contains(l)) {
            let e: f64 = (0..n).map(|k| corr[(k, l)].norm_sqr()).sum();
            if best.is_none_or(|(_, b)| e > b) {
                best = Some((l, e));
            }
        }
        let Some((blk, _)) = best else {
            if support.is_empty() {
                return Err(Error::DegenerateDictionary(format!("every block is rank-deficient: {rejected:?}")));
            }
            break;
        };

        let basis = q.len();
        let mut degenerate = false;
        for k in 0..n {
            let col = op.column(k, blk, &zc.selected);
            let cn = col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let mut v = col;
            let mut rcol = vec![Complex64::new(0.0, 0.0); q.len() + 1];
            for _ in 0..2 {
                for (j, qj) in q.iter().enumerate() {
                    let h: Complex64 = qj.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    v.iter_mut().zip(qj).for_each(|(x, y)| *x -= h * y);
                    rcol[j] += h;
                }
            }
            let vn = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if !(vn > 1e-10 * cn) {
                degenerate = true;
                break;
            }
            v.iter_mut().for_each(|x| *x /= vn);
            rcol[q.len()] = Complex64::new(vn, 0.0);
            let c: Complex64 = v.iter().zip(&zc.z_s).map(|(a, b)| a.conj() * b).sum();
            coef.push(c);
            q.push(v);
            r_mat.push(rcol);
        }
        if degenerate {
            q.truncate(basis);
            coef.truncate(basis);
            r_mat.truncate(basis);
            rejected.push(blk);
            continue;
        }
        support.push(blk);

        resid = zc.z_s.clone();
        for (qj, c) in q.iter().zip(&coef) {
            resid.iter_mut().zip(qj).for_each(|(x, y)| *x -= c * y);
        }
        norms.push(resid.iter().map(|z| z.norm_sqr()).sum());
    }

    // Back substitution R f = Q^H z_s.
    let cols = q.len();
    let f = back_substitute(&r_mat, &coef, cols);
    // With l = K blocks the fit is square (NK rows, NK unknowns) and reproduces noise and
    // the other delay blocks of a migrating echo, so the peak is read from the fit of the
    // first selected block alone, which is overdetermined K times.
    let first = back_substitute(&r_mat, &coef, n.min(cols));
    let mut response = DDFrame::zeros(n, m);
    for (bi, &blk) in support.iter().enumerate() {
        for k in 0..n {
            response[(k, blk)] = f[bi * n + k];
        }
    }
    let peak = match support.first() {
        Some(&blk) => {
            let k = (0..n).fold(0, |b, k| if first[k].norm_sqr() > first[b].norm_sqr() { k } else { b });
            (k, blk)
        }
        None => (0, 0),
    };
    Ok(CoarseResult { response, support, peak, residual_norms: norms })
}

fn back_substitute(r_mat: &[Vec<Complex64>], coef: &[Complex64], cols: usize) -> Vec<Complex64> {
    let mut f = vec![Complex64::new(0.0, 0.0); cols];
    for i in (0..cols).rev() {
        let mut s = coef[i];
        for (j, fj) in f.iter().enumerate().skip(i + 1) {
            s -= r_mat[j][i] * fj;
        }
        f[i] = s / r_mat[i][i];
    }
    f
}
