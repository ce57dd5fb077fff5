//! Numerology, grids, symbol sources and the symplectic Fourier transforms.

mod config;
mod grid;
pub mod io;
mod symbols;
mod transform;

pub use config::{EchoGeometry, FrameConfig, SceneWindow};
pub use grid::{devectorize, nrmse, vectorize, DDFrame, DelayDoppler, Domain, Grid, TFFrame, TimeFrequency};
pub use symbols::{random_qam_frame, FixedSymbols, Qam4, SymbolSource};
pub use transform::{isfft, sfft};

pub(crate) use transform::{fft, fft_cols, fft_rows};
