use std::path::Path;

use thiserror::Error;

use super::config::{ConfigError, InterfaceShape, RunConfig, ScenarioChoice};
use crate::diagnostics::{
    report_snapshot, DiagnosticsConfig, DiagnosticsError, EnergyReport, TestFunction, WeakResidualAccumulator,
};
use crate::initdata::{build_well_prepared, InitError, ScenarioKind, ScenarioSpec};
use crate::interface::{InterfaceError, SphereInterface};
use crate::matgeo::{MatError, QuasiDistParams};
use crate::solver::{run_simulation_with, write_field, Field, GridSpec, RunPlan, SolverError, StepRecord, TimeStepper};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("reference interface: {0}")]
    Interface(#[from] InterfaceError),
    #[error("initial data: {0}")]
    Init(#[from] InitError),
    #[error("parameters: {0}")]
    Params(#[from] MatError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("diagnostics at t = {t}: {source}")]
    Diagnostics { t: f64, source: DiagnosticsError },
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
}

impl RunError {
    /// 1 for configuration and I/O problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Solver(_) | RunError::Diagnostics { .. } => 2,
            _ => 1,
        }
    }
}

pub(crate) fn io_err(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> RunError {
    let context = context.into();
    move |source| RunError::Io { context, source }
}

/// Everything derived from a config before time stepping starts.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub cfg: RunConfig,
    pub grid: GridSpec,
    pub interface: SphereInterface,
    pub scenario: ScenarioSpec,
    pub params: QuasiDistParams,
    pub plan: RunPlan,
    pub diagnostics: DiagnosticsConfig,
}

impl Experiment {
    pub fn new(cfg: &RunConfig) -> Result<Self, RunError> {
        cfg.validate()?;
        let grid = GridSpec::new(cfg.dim, cfg.resolved_cells(), cfg.side, cfg.boundary);
        let interface = match cfg.shape {
            InterfaceShape::Sphere { center, r0 } => SphereInterface::sphere(cfg.dim, center, r0, cfg.delta_gamma)?,
            InterfaceShape::Flat => SphereInterface::flat(cfg.dim, cfg.delta_gamma)?,
        };
        interface.check_domain(grid.half_side(), cfg.t_final)?;
        let kind = match cfg.scenario {
            ScenarioChoice::Constant => ScenarioKind::Constant,
            ScenarioChoice::Rotating { winding } => ScenarioKind::RotatingAxis { winding },
        };
        let scenario = ScenarioSpec::with_angle(kind, cfg.n, cfg.angle, cfg.delta);
        scenario.validate(&interface)?;
        let params = QuasiDistParams::new(cfg.eps, cfg.k)?;
        let plan = RunPlan {
            eps: cfg.eps,
            stepper: TimeStepper { dt_safety: cfg.dt_safety, scheme: cfg.scheme },
            t_final: cfg.t_final,
            snapshot_times: cfg.snapshot_times(),
            log_every: 0,
            with_lead: true,
        };
        let mut diagnostics = DiagnosticsConfig::new(params, cfg.resolved_probe_delta());
        diagnostics.probe_samples = cfg.probe_samples;
        diagnostics.hausdorff_samples = cfg.hausdorff_samples;
        Ok(Experiment { cfg: cfg.clone(), grid, interface, scenario, params, plan, diagnostics })
    }

    pub fn initial_field(&self) -> Result<Field, RunError> {
        Ok(build_well_prepared(self.grid, self.cfg.eps, &self.interface, &self.scenario)?)
    }

    pub fn test_functions(&self) -> Vec<TestFunction> {
        TestFunction::library(&self.interface, self.cfg.n, self.cfg.t_final)
    }
}

/// Diagnostics and step log of one run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub eps: f64,
    pub h: f64,
    pub reports: Vec<EnergyReport>,
    pub log: Vec<StepRecord>,
}

impl RunOutcome {
    pub fn sup_e_over_eps(&self) -> f64 {
        self.reports.iter().map(|r| r.modulated_energy / self.eps).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn final_report(&self) -> &EnergyReport {
        self.reports.last().expect("a run always reports t = 0")
    }
}

/// Runs the experiment, evaluating diagnostics at each snapshot. Field dumps
/// go to `dump_dir` when given.
pub fn run_experiment(exp: &Experiment, dump_dir: Option<&Path>) -> Result<RunOutcome, RunError> {
    let initial = exp.initial_field()?;
    let mut weak = WeakResidualAccumulator::new(exp.test_functions());
    let mut reports = Vec::new();
    let mut log = Vec::new();
    run_simulation_with::<RunError>(
        &exp.plan,
        initial,
        |snap| {
            let t = snap.field.t;
            let r = report_snapshot(&snap, &exp.interface, &exp.diagnostics, &mut weak)
                .map_err(|source| RunError::Diagnostics { t, source })?;
            log::info!("t = {t:.5}: E/eps = {:.4e}, hausdorff = {:?}", r.modulated_energy / exp.cfg.eps, r.hausdorff);
            if let Some(dir) = dump_dir {
                let path = dir.join(format!("field_{:04}.bin", reports.len()));
                let file = std::fs::File::create(&path).map_err(io_err(format!("create {}", path.display())))?;
                write_field(std::io::BufWriter::new(file), &snap.field)
                    .map_err(io_err(format!("write {}", path.display())))?;
            }
            reports.push(r);
            Ok(())
        },
        |rec| log.push(*rec),
    )?;
    Ok(RunOutcome { eps: exp.cfg.eps, h: exp.grid.h(), reports, log })
}
