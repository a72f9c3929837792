//! Experiment driver: configuration, replication, slope fits, diagnostics
//! and reporting.

pub mod config;
pub mod experiment;
pub mod family;
pub mod report;
pub mod seeds;
pub mod slope;

pub use config::{ExperimentConfig, FamilyConfig, NRule};
pub use experiment::{
    family_from_config, fit_plugin, gram_diagnostic, gram_report, member_model,
    run_adversarial_experiment, run_estimation_experiment, run_rate_experiment, simulate_dataset,
    AdversarialReport, EstimationReport, GramDiagnostic, GramReport, RateReport,
};
pub use family::{build_hypothesis_family, hamming, kernel_sq_norm, HypothesisFamily};
pub use report::Table;
pub use slope::{fit_loglog_slope, RateFit, RatePoint};
