//! Closed-form delay-Doppler responses of a point target.

mod bins;
mod dirichlet;
mod operator;
mod phi;
mod psi;
mod support;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use bins::{decompose_bins, split_bin, BinDecomposition};
pub use dirichlet::dirichlet;
pub use operator::{build_modified_symbols, ModifiedSymbolMatrix, SymbolOperator};
pub use phi::{phi_at, phi_ideal};
pub use psi::{psi_echo, psi_echo_direct, psi_rect, PsiKernel};
pub use support::response_support;

use crate::frame::{DDFrame, EchoGeometry, FrameConfig, SceneWindow};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Ideal shaping filters: X ⊛ Φ.
    IdealPhi,
    /// Rectangular filters, exact Ψ.
    RectPsi,
    /// Rectangular filters, Ξφ.
    RectApprox,
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ideal" | "ideal_phi" | "phi" => Ok(Self::IdealPhi),
            "rect" | "rect_psi" | "psi" => Ok(Self::RectPsi),
            "rect_approx" | "approx" | "xi" => Ok(Self::RectApprox),
            other => Err(Error::Usage(format!("unknown model kind '{other}'"))),
        }
    }
}

/// Dense response kernel for the models whose response does not depend on the input
/// symbol position.
#[derive(Debug, Clone)]
pub struct ResponseKernel {
    pub kind: ModelKind,
    pub geometry: EchoGeometry,
    pub cfg: FrameConfig,
    pub values: DDFrame,
}

impl ResponseKernel {
    pub fn ideal(geo: &EchoGeometry, cfg: &FrameConfig) -> Self {
        Self { kind: ModelKind::IdealPhi, geometry: *geo, cfg: *cfg, values: phi_ideal(geo, cfg) }
    }
}

/// Normalized echo e(d, v, B) of symbols `x` under the chosen model.
pub fn model_echo(
    geo: &EchoGeometry,
    x: &DDFrame,
    cfg: &FrameConfig,
    window: &SceneWindow,
    kind: ModelKind,
) -> Result<DDFrame> {
    match kind {
        ModelKind::IdealPhi => Ok(SymbolOperator::ideal(x, cfg)?.apply(&phi_ideal(geo, cfg))),
        ModelKind::RectPsi => psi_echo(geo, x, cfg),
        ModelKind::RectApprox => Ok(build_modified_symbols(x, cfg, window)?.apply(&phi_ideal(geo, cfg))),
    }
}
