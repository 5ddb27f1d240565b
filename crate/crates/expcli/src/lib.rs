//! Experiment runner for the Cayley-graph Ramsey and few-color spanning tree library.
//!
//! Every experiment reads an [`config::ExperimentConfig`], fans its trials out over
//! a worker pool and returns a [`report::Report`] whose rows are sorted by trial.
//! The [`suite`] module runs the acceptance criteria on top of the same verbs.

pub mod config;
pub mod experiments;
pub mod report;
pub mod suite;
pub mod util;

pub use config::ExperimentConfig;
pub use experiments::run;
pub use report::{BoundCheck, Report, ReportRow};
