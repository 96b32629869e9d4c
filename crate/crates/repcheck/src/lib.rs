//! File formats, parallel simulation and the `repcheck` command line on top
//! of [`repcheck_core`].

pub mod cli;
pub mod dataset;
pub mod output;
pub mod parallel;

pub use repcheck_core as core;
