//! Configuration, experiment orchestration and CSV output behind the CLI.

mod commands;
mod config;
mod run;
mod selftest;

pub use commands::{
    cmd_orbit, cmd_simulate, cmd_sweep, cmd_verify_geometry, detail_csv, diagnostics_csv, run_sweep, steps_csv,
    summary_csv, summary_row, SUMMARY_HEADER,
};
pub use config::{load_config, parse_config, ConfigError, InterfaceShape, RunConfig, ScenarioChoice};
pub use run::{run_experiment, Experiment, RunError, RunOutcome};
pub use selftest::{csv as selftest_csv, run_selftest, Check};

/// Caps the rayon pool at `MVAC_THREADS` when that variable is set.
pub fn init_thread_pool() -> Result<(), String> {
    let Ok(v) = std::env::var("MVAC_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("MVAC_THREADS=`{v}` is not a thread count"))?;
    if n == 0 {
        return Err("MVAC_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}
