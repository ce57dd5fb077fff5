//! Monte Carlo experiments: spec files, trial generation, metrics and CSV/JSON output.

mod metrics;
mod run;
mod spec;

pub use metrics::{
    compute_metrics, emit, parse_csv, to_csv, to_json, Accumulator, MetricRow, OutputFormat, PairErrors, CSV_HEADER,
};
pub use run::{draw_trial, estimate_trial, run_experiment, trial_rng, Trial};
pub use spec::{AmplitudeModel, EstimatorKind, ExperimentSpec, FilterKind, SweepVar};
