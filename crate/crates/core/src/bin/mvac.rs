use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mvac::harness::{
    cmd_orbit, cmd_simulate, cmd_sweep, cmd_verify_geometry, init_thread_pool, load_config, run_selftest, selftest_csv,
    summary_csv, RunConfig, RunError,
};

#[derive(Parser)]
#[command(name = "mvac", version, about = "Matrix-valued Allen-Cahn lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One run: diagnostics CSV, step log and field dumps.
    Simulate {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Repeat a run over several eps values.
    Sweep {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.08,0.04,0.02")]
        eps: Vec<f64>,
    },
    /// One-dimensional orbit quantities as CSV on stdout.
    Orbit {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Transport residuals of the reference interface as CSV on stdout.
    VerifyGeometry {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Invariant suite; exit code 3 on any failure.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn config(path: &Path) -> Result<RunConfig, ExitCode> {
    load_config(path).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(1)
    })
}

fn report(r: Result<(), RunError>) -> ExitCode {
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    if let Err(e) = init_thread_pool() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Simulate { config: path } => match config(&path) {
            Ok(cfg) => report(cmd_simulate(&cfg).map(|o| {
                let last = o.final_report();
                println!("sup E/eps = {:.6e}, final hausdorff = {:?}", o.sup_e_over_eps(), last.hausdorff);
            })),
            Err(code) => code,
        },
        Command::Sweep { config: path, eps } => match config(&path) {
            Ok(cfg) => report(cmd_sweep(&cfg, &eps).map(|o| print!("{}", summary_csv(&o)))),
            Err(code) => code,
        },
        Command::Orbit { config: path } => match config(&path) {
            Ok(cfg) => report(cmd_orbit(&cfg, &mut stdout)),
            Err(code) => code,
        },
        Command::VerifyGeometry { config: path } => match config(&path) {
            Ok(cfg) => report(cmd_verify_geometry(&cfg, &mut stdout)),
            Err(code) => code,
        },
        Command::Selftest { seed } => {
            let checks = run_selftest(seed);
            print!("{}", selftest_csv(&checks));
            if checks.iter().all(|c| c.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
    }
}
