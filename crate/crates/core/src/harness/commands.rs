use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use super::config::RunConfig;
use super::run::{io_err, run_experiment, Experiment, RunError, RunOutcome};
use crate::diagnostics::EnergyReport;
use crate::interface::geometric_residuals;
use crate::matgeo::surface_tension_closed_form;
use crate::profile1d::{
    equipartition_deviation, minimal_orbit, ode_residual, orbit_energy, uniform_grid, Curve1D, OrbitSpec,
    ORBIT_HALF_WIDTH,
};
use crate::solver::StepRecord;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn diagnostics_csv(outcome: &RunOutcome) -> String {
    let k = outcome.reports.first().map_or(0, |r| r.weak_residuals.len());
    let mut s = EnergyReport::csv_header(k);
    s.push('\n');
    for r in &outcome.reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

pub fn steps_csv(outcome: &RunOutcome) -> String {
    let mut s = format!("{}\n", StepRecord::CSV_HEADER);
    for r in &outcome.log {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

pub const SUMMARY_HEADER: &str = "eps,sup_E_over_eps,final_hausdorff,final_minpair_defect,weak_res_max";

pub fn summary_row(o: &RunOutcome) -> String {
    let last = o.final_report();
    let weak = last.weak_residuals.iter().copied().fold(0.0, f64::max);
    let hd = last.hausdorff.map_or_else(|| "nan".to_string(), num);
    format!("{},{},{},{},{}", num(o.eps), num(o.sup_e_over_eps()), hd, num(last.minimal_pair.defect), num(weak))
}

pub fn summary_csv(outcomes: &[RunOutcome]) -> String {
    let mut s = format!("{SUMMARY_HEADER}\n");
    for o in outcomes {
        s.push_str(&summary_row(o));
        s.push('\n');
    }
    s
}

/// All snapshot rows of all runs, prefixed with `eps`.
pub fn detail_csv(outcomes: &[RunOutcome]) -> String {
    let k = outcomes.first().and_then(|o| o.reports.first()).map_or(0, |r| r.weak_residuals.len());
    let mut s = format!("eps,{}\n", EnergyReport::csv_header(k));
    for o in outcomes {
        for r in &o.reports {
            let _ = writeln!(s, "{},{}", num(o.eps), r.csv_row());
        }
    }
    s
}

const PLOT_SCRIPT: &str = r#"# Plots the sweep written next to this script. Requires pandas and matplotlib.
import sys
import pandas as pd
import matplotlib.pyplot as plt

here = sys.argv[1] if len(sys.argv) > 1 else "."
detail = pd.read_csv(f"{here}/sweep_detail.csv")
fig, axes = plt.subplots(1, 3, figsize=(14, 4))
for eps, run in detail.groupby("eps"):
    axes[0].plot(run["t"], run["E_mod"] / eps, label=f"eps={eps:g}")
    axes[1].plot(run["t"], run["hausdorff"], label=f"eps={eps:g}")
    axes[2].plot(run["t"], run["minpair_defect"], label=f"eps={eps:g}")
axes[0].set_ylabel("E / eps")
axes[1].set_ylabel("Hausdorff distance")
axes[2].set_ylabel("minimal-pair defect")
for ax in axes:
    ax.set_xlabel("t")
    ax.legend()
fig.tight_layout()
fig.savefig(f"{here}/sweep.png", dpi=150)
"#;

fn write_file(path: &Path, contents: &str) -> Result<(), RunError> {
    std::fs::write(path, contents).map_err(io_err(format!("write {}", path.display())))
}

fn create_dir(path: &Path) -> Result<(), RunError> {
    std::fs::create_dir_all(path).map_err(io_err(format!("create {}", path.display())))
}

/// One run: `diagnostics.csv`, `steps.csv` and, if enabled, `fields/field_NNNN.bin`.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    let exp = Experiment::new(cfg)?;
    create_dir(&cfg.out_dir)?;
    let dumps = cfg.out_dir.join("fields");
    if cfg.dumps {
        create_dir(&dumps)?;
    }
    let outcome = run_experiment(&exp, cfg.dumps.then_some(dumps.as_path()))?;
    write_file(&cfg.out_dir.join("diagnostics.csv"), &diagnostics_csv(&outcome))?;
    write_file(&cfg.out_dir.join("steps.csv"), &steps_csv(&outcome))?;
    Ok(outcome)
}

/// Runs every `eps` in turn with the rest of the config unchanged.
pub fn run_sweep(cfg: &RunConfig, eps_list: &[f64]) -> Result<Vec<RunOutcome>, RunError> {
    eps_list
        .iter()
        .map(|&eps| {
            log::info!("sweep: eps = {eps}");
            run_experiment(&Experiment::new(&cfg.with_eps(eps))?, None)
        })
        .collect()
}

/// Writes `sweep_summary.csv`, `sweep_detail.csv`, per-run step logs and a plot script.
pub fn cmd_sweep(cfg: &RunConfig, eps_list: &[f64]) -> Result<Vec<RunOutcome>, RunError> {
    if eps_list.is_empty() {
        return Err(super::config::ConfigError::Invalid { field: "eps".into(), msg: "empty sweep list".into() }.into());
    }
    for &eps in eps_list {
        cfg.with_eps(eps).validate()?;
    }
    create_dir(&cfg.out_dir)?;
    let outcomes = run_sweep(cfg, eps_list)?;
    for o in &outcomes {
        write_file(&cfg.out_dir.join(format!("steps_eps_{}.csv", o.eps)), &steps_csv(o))?;
    }
    write_file(&cfg.out_dir.join("sweep_summary.csv"), &summary_csv(&outcomes))?;
    write_file(&cfg.out_dir.join("sweep_detail.csv"), &detail_csv(&outcomes))?;
    write_file(&cfg.out_dir.join("plot_sweep.py"), PLOT_SCRIPT)?;
    Ok(outcomes)
}

/// Orbit energy, surface tension, ODE residual and equipartition deviation
/// of the standard minimal orbit in `n x n` matrices, for spacings `1e-2` down to `5e-4`.
pub fn cmd_orbit(cfg: &RunConfig, out: &mut impl Write) -> Result<(), RunError> {
    let spec = OrbitSpec::standard(cfg.n);
    let z = ORBIT_HALF_WIDTH;
    let mut s = String::from("h,orbit_energy,surface_tension,ode_residual,equipartition_max_dev\n");
    for m in [4_001usize, 8_001, 40_001, 80_001] {
        let grid = uniform_grid(-z, z, m);
        let h = grid[1] - grid[0];
        let curve = Curve1D::sample(|x| minimal_orbit(&spec, x), -z, z, m).expect("uniform grid");
        let res = ode_residual(&spec, &grid).expect("uniform grid");
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            num(h),
            num(orbit_energy(&curve)),
            num(surface_tension_closed_form()),
            num(res),
            num(equipartition_deviation(&spec, &grid))
        );
    }
    out.write_all(s.as_bytes()).map_err(io_err("write orbit table"))
}

/// Transport residuals of the reference fields at `t = 0` and each snapshot time.
pub fn cmd_verify_geometry(cfg: &RunConfig, out: &mut impl Write) -> Result<(), RunError> {
    let exp = Experiment::new(cfg)?;
    let mut s = String::from("t,divergence,transport,length_transport,bound\n");
    let mut times = vec![0.0];
    times.extend(cfg.snapshot_times());
    for t in times {
        let r = geometric_residuals(&exp.interface, t, &exp.grid)?;
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            num(t),
            num(r.divergence),
            num(r.transport),
            num(r.length_transport),
            num(r.bound)
        );
    }
    out.write_all(s.as_bytes()).map_err(io_err("write geometry table"))
}
