//! Trials, experiment grids, metrics, export and plotting.

mod experiments;
mod export;
mod metrics;
mod plot;
mod trial;

pub use experiments::{
    irregular_shapes, orientation_draw, prism_shapes, run_experiment_1, run_experiment_2, run_experiment_3,
    run_repeated, run_robustness, splitmix64, trial_seed, ExperimentConfig, ExperimentResult, EXP1_ANGLES_DEG,
    EXP1_OFFSETS_MM, START_POSES, TARGET,
};
pub use export::{
    export, read_records, read_taps_csv, tap_rows, write_plot, write_taps_csv, Exported, MetricsFile, TapRow,
    CSV_SCHEMA,
};
pub use metrics::{Metrics, TapStats};
pub use plot::{plot_records, DEFAULT_EVERY};
pub use trial::{compute_y_targ, run_trial, Outcome, TapLog, TrialRecord};
