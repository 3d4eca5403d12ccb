//! Command-line front end for the `levy-pide` pricing engine: configuration
//! files, concurrent pricing jobs and CSV output.

pub mod check;
pub mod config;
pub mod error;
pub mod preset;
pub mod run;

pub use config::{Overrides, RunConfig};
pub use error::CliError;

/// Runs a configuration end to end: validate, price, write files, and return
/// the summary table together with solver warnings.
pub fn price(cfg: &RunConfig) -> Result<(String, Vec<String>), CliError> {
    cfg.validate()?;
    let results = run::execute(cfg)?;
    run::write_outputs(cfg, &results)?;
    let warnings = results.iter().flat_map(|r| r.warnings.iter().cloned()).collect();
    Ok((run::summary(&results), warnings))
}
