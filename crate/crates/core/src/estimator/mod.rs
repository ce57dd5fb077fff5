//! Two-step target estimation: BOMP on a compressed measurement for integer bins, then a
//! matched-filter ML search on a fine grid, and CLEAN for several targets.

mod bank;
mod bomp;
mod config;
mod estimate;
mod objective;

pub use bank::{Match, MatchedFilterBank, Prepared};
pub use bomp::{bomp_coarse, build_compressed, select_bins, CoarseResult, CompressedMeasurement};
pub use config::{EstimatorConfig, RampMode, TargetEstimate};
pub use estimate::{
    amplitude_echo, associate, clean_multi, coarse_dictionary, estimate_single, exhaustive_ml, refine_ml, CleanResult,
    Estimator,
};
pub use objective::{estimate_amplitude, ml_objective};
