//! Configuration files, snapshot formats and the run driver for the
//! `swft` command-line tool.

pub mod config;
pub mod error;
pub mod meshio;
pub mod output;
pub mod report;

use std::path::PathBuf;

use swft_core::scenarios::Setup;
use swft_core::simulation::RunOutput;

pub use config::RunConfig;
pub use error::Error;
pub use report::SteadyErrors;

/// Result of [`execute`].
pub struct Completed {
    pub setup: Setup,
    pub output: RunOutput,
    pub dir: PathBuf,
    pub snapshots: usize,
    /// Errors against the steady profile, for sloped scenarios.
    pub steady: Option<SteadyErrors>,
}

/// Runs a configuration, writing snapshots into its output directory.
pub fn execute(cfg: &RunConfig) -> Result<Completed, Error> {
    let scenario = cfg.scenario()?;
    let setup = scenario.instantiate()?;
    let dir = cfg.output_dir();
    let mut writer = output::SnapshotWriter::new(&dir, &setup.mesh, &setup.bathy, setup.params, cfg.output.clone())?;
    let out = setup.run(&scenario.controls, |s| writer.record(s))?;
    let snapshots = writer.finish(&out.history)?;
    let steady = match &scenario.steady {
        Some(profile) => {
            Some(report::steady_errors(&setup.mesh, &setup.bathy, &setup.params, &out.final_state.field, profile)?)
        }
        None => None,
    };
    Ok(Completed { setup, output: out, dir, snapshots, steady })
}
