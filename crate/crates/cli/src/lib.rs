//! Experiments, figure data and convention resolution on top of
//! `wigner_weyl`, shared by the `wwsum` binary and the acceptance suite.

pub mod checks;
pub mod conventions;
pub mod experiments;
pub mod report;
pub mod spec;

pub use experiments::run;
pub use report::{Check, RunReport, Table, Tolerance};
pub use spec::{ExperimentKind, ExperimentSpec, Settings, SpecError};
