//! # qbound-cli
//!
//! Scenario registry, verification campaigns and reports on top of
//! `qbound-core`. The `qbound` binary is a thin wrapper over [`run_scenario`]
//! and [`emit_report`].

pub mod config;
mod error;
pub mod report;
pub mod scenarios;

pub use config::{ScenarioConfig, Units};
pub use error::{CliError, Result};
pub use report::{emit_report, read_report, render, Format, Record, Report};
pub use scenarios::{run_scenario, SCENARIOS};

/// Caps the global worker pool at `QBOUND_THREADS` when it is set to a
/// positive integer. Results do not depend on the worker count.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("QBOUND_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::InvalidConfig(format!("QBOUND_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::InvalidConfig(format!("cannot size worker pool: {e}")))
}
