use std::marker::PhantomData;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::{Error, Result};

pub trait Domain: Copy + Clone + std::fmt::Debug + Default + Send + Sync + 'static {
    const TAG: u8;
    const NAME: &'static str;
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DelayDoppler;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TimeFrequency;

impl Domain for DelayDoppler {
    const TAG: u8 = 0;
    const NAME: &'static str = "delay-doppler";
}

impl Domain for TimeFrequency {
    const TAG: u8 = 1;
    const NAME: &'static str = "time-frequency";
}

/// Row-major complex grid. Rows are Doppler bins (or symbol intervals), columns are delay
/// bins (or subcarriers).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<D: Domain> {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
    _domain: PhantomData<D>,
}

pub type DDFrame = Grid<DelayDoppler>;
pub type TFFrame = Grid<TimeFrequency>;

impl<D: Domain> Grid<D> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_vec(rows, cols, vec![Complex64::new(0.0, 0.0); rows * cols])
            .expect("length matches by construction")
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Config(format!(
                "{} values cannot fill a {rows}x{cols} grid",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data, _domain: PhantomData })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data, _domain: PhantomData }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Frobenius inner product sum conj(self) * other.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let data = self.data.iter().map(|z| z * c).collect();
        Self { rows: self.rows, cols: self.cols, data, _domain: PhantomData }
    }

    pub fn add_scaled(&mut self, other: &Self, c: Complex64) {
        assert_eq!(self.shape(), other.shape());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * c;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, Complex64::new(-1.0, 0.0));
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// (row, col) of the entry with the largest magnitude; first one wins on ties.
    pub fn argmax_abs(&self) -> (usize, usize) {
        let mut best = 0;
        let mut best_val = -1.0;
        for (i, z) in self.data.iter().enumerate() {
            let m = z.norm_sqr();
            if m > best_val {
                best_val = m;
                best = i;
            }
        }
        (best / self.cols, best % self.cols)
    }
}

impl<D: Domain> Index<(usize, usize)> for Grid<D> {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl<D: Domain> IndexMut<(usize, usize)> for Grid<D> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Stacks a delay-Doppler frame column by column: element `l*N + k` is `frame[k, l]`.
pub fn vectorize(frame: &DDFrame) -> Vec<Complex64> {
    let (n, m) = frame.shape();
    let mut out = Vec::with_capacity(n * m);
    for l in 0..m {
        for k in 0..n {
            out.push(frame[(k, l)]);
        }
    }
    out
}

pub fn devectorize(v: &[Complex64], n: usize, m: usize) -> Result<DDFrame> {
    if v.len() != n * m {
        return Err(Error::Config(format!("vector of length {} is not {n}x{m}", v.len())));
    }
    Ok(DDFrame::from_fn(n, m, |k, l| v[l * n + k]))
}

/// Relative error ||a - b|| / ||b||.
pub fn nrmse<D: Domain>(a: &Grid<D>, reference: &Grid<D>) -> f64 {
    (a.sub(reference).norm_sqr() / reference.norm_sqr()).sqrt()
}
