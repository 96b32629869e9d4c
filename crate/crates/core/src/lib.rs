//! Replication consistency checks for correlation effect sizes.
//!
//! An original study reports a correlation `r_orig` from `n_orig` subjects and a
//! replication reports `r_rep` from `n_rep`. On the Fisher z scale both
//! estimates are approximately normal with variance `1/(n - 3)`, so the
//! replication estimate has a closed-form prediction interval centred on the
//! original one. This crate computes those intervals, classifies replications
//! as below, inside or above them, and runs the "perfect replication" Monte
//! Carlo that shows how much a P-value based definition of replication varies
//! by chance alone.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel drivers
//! and the command line live in the `repcheck` crate.
//!
//! ```
//! use repcheck_core::{prediction_interval, classify, Classification, Correlation, Probability};
//!
//! let r_orig = Correlation::new(0.3).unwrap();
//! let alpha = Probability::new(0.05).unwrap();
//! let pi = prediction_interval(r_orig, 50, 50, alpha).unwrap();
//! assert!((pi.lower_r.get() + 0.094507).abs() < 1e-6);
//! assert!((pi.upper_r.get() - 0.613072).abs() < 1e-6);
//!
//! let r_rep = Correlation::new(0.7).unwrap();
//! assert_eq!(classify(r_rep, &pi), Classification::Above);
//! ```
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod effect;
mod error;
pub mod interval;
pub mod report;
pub mod simulation;
pub mod special;
pub mod stats;

pub use effect::{
    correlation_to_f, f_to_correlation, fisher_z, inverse_fisher_z, Correlation, FStatistic,
    FisherZ, MAX_ABS_CORRELATION,
};
pub use error::Error;
pub use interval::{
    classify, classify_portfolio, classify_study, prediction_interval, se_total, Classification,
    ClassifiedStudy, PredictionInterval, Sign, StudyRecord,
};
pub use report::{
    build_report, figure1_rows, figure_s1_histogram, figure_s2_rows, AnalysisReport, Counts,
    Figure1Row, FigureS2Row, HistogramBin, Ratio, SubsetFilter, SubsetReport,
};
pub use simulation::{
    coverage_experiment, impute, simulate_perfect_replications, simulate_study, ImputationEntry,
    ImputationSource, ImputedField, SimulationConfig, SimulationResult, StudyCount, DEFAULT_SEED,
};
pub use special::{
    f_tail_probability, normal_cdf, normal_quantile, regularized_incomplete_beta, Probability,
};

pub type Result<T, E = Error> = core::result::Result<T, E>;
