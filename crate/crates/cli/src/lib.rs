//! Configuration, orchestration and reporting for the `tau2lab` verification runner.

pub mod config;
pub mod report;
pub mod suite;

pub use config::{parse_config, ConfigError, Mode, RunConfig};
pub use report::{CheckRecord, Status, VerificationReport};
pub use suite::{run_suite, CheckId};
