//! Explicit finite-difference integration of
//! `d_t A = Lap A - eps^-2 (A A^T A - A)` on uniform grids.

mod dump;
mod field;
mod grid;
mod step;

pub use dump::{read_field, write_field, FieldDump, MAGIC};
pub use field::Field;
pub use grid::{Boundary, GridSpec};
pub use step::{discrete_laplacian, rhs, Scheme, Stepper, TimeStepper};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("solution blew up at step {step} (t = {t}): max |A| = {max_norm}")]
    BlowUp { step: u64, t: f64, max_norm: f64 },
    #[error("invalid run plan: {0}")]
    InvalidPlan(String),
}

/// Everything the time loop needs besides the initial field.
#[derive(Clone, Debug)]
pub struct RunPlan {
    pub eps: f64,
    pub stepper: TimeStepper,
    pub t_final: f64,
    /// Output times in `(0, t_final]`; `t = 0` is always recorded and
    /// `t_final` is added if missing.
    pub snapshot_times: Vec<f64>,
    /// Step-log cadence; 0 picks roughly 50 records per run.
    pub log_every: u64,
    /// Also store the field one step after each snapshot, for time derivatives.
    pub with_lead: bool,
}

impl RunPlan {
    fn schedule(&self) -> Result<Vec<f64>, SolverError> {
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(SolverError::InvalidPlan(format!("final time {} must be >= 0", self.t_final)));
        }
        if !(self.eps > 0.0) {
            return Err(SolverError::InvalidPlan(format!("eps {} must be positive", self.eps)));
        }
        let mut times: Vec<f64> = Vec::new();
        for &t in &self.snapshot_times {
            if !(t > 0.0 && t <= self.t_final) {
                if t == 0.0 {
                    continue;
                }
                return Err(SolverError::InvalidPlan(format!("snapshot time {t} outside (0, {}]", self.t_final)));
            }
            times.push(t);
        }
        times.sort_by(f64::total_cmp);
        times.dedup();
        if self.t_final > 0.0 && times.last() != Some(&self.t_final) {
            times.push(self.t_final);
        }
        Ok(times)
    }

    /// Number of steps and the step size used to reach each scheduled time.
    pub fn intervals(&self, grid: &GridSpec) -> Result<Vec<(f64, u64, f64)>, SolverError> {
        let dt_max = self.stepper.max_dt(grid, self.eps);
        let mut prev = 0.0;
        let mut out = Vec::new();
        for t in self.schedule()? {
            let span = t - prev;
            let k = ((span / dt_max) * (1.0 - 1e-12)).ceil().max(1.0) as u64;
            out.push((t, k, span / k as f64));
            prev = t;
        }
        Ok(out)
    }
}

/// One stored output time.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub field: Field,
    /// The field one step of size `lead_dt` later.
    pub lead: Option<Field>,
    pub lead_dt: f64,
    pub step: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    pub step: u64,
    pub t: f64,
    pub dt: f64,
    pub max_singular_value: f64,
    pub gl_energy: f64,
}

impl StepRecord {
    pub const CSV_HEADER: &'static str = "step,t,dt,max_singular_value,gl_energy";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.step, self.t, self.dt, self.max_singular_value, self.gl_energy
        )
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    pub log: Vec<StepRecord>,
}

fn record(f: &Field, step: u64, dt: f64, eps: f64) -> StepRecord {
    StepRecord { step, t: f.t, dt, max_singular_value: f.max_singular_value(), gl_energy: f.gl_energy(eps) }
}

/// Integrates from `initial`, handing each snapshot and each step-log record
/// to the callbacks as soon as it is produced.
pub fn run_simulation_with<E: From<SolverError>>(
    plan: &RunPlan,
    initial: Field,
    mut on_snapshot: impl FnMut(Snapshot) -> Result<(), E>,
    mut on_log: impl FnMut(&StepRecord),
) -> Result<(), E> {
    let intervals = plan.intervals(&initial.grid)?;
    let total: u64 = intervals.iter().map(|iv| iv.1).sum();
    let log_every = if plan.log_every == 0 { (total / 50).max(1) } else { plan.log_every };

    let mut field = initial;
    let mut stepper = Stepper::new(plan.stepper.scheme, plan.eps, &field);
    let first_dt = intervals.first().map_or(plan.stepper.max_dt(&field.grid, plan.eps), |iv| iv.2);
    on_log(&record(&field, 0, first_dt, plan.eps));

    let lead_of = |f: &Field, dt: f64| -> Result<Option<Field>, SolverError> {
        if !plan.with_lead {
            return Ok(None);
        }
        let mut copy = f.clone();
        Stepper::new(plan.stepper.scheme, plan.eps, f).step(&mut copy, dt)?;
        Ok(Some(copy))
    };
    let lead = lead_of(&field, first_dt)?;
    on_snapshot(Snapshot { field: field.clone(), lead, lead_dt: first_dt, step: 0 })?;

    let mut step = 0u64;
    for (target, k, dt) in intervals {
        for _ in 0..k {
            stepper.step(&mut field, dt)?;
            step += 1;
            if step.is_multiple_of(log_every) || step == total {
                on_log(&record(&field, step, dt, plan.eps));
            }
        }
        field.t = target;
        let lead = lead_of(&field, dt)?;
        on_snapshot(Snapshot { field: field.clone(), lead, lead_dt: dt, step })?;
    }
    Ok(())
}

/// Collects all snapshots and step-log records in memory.
pub fn run_simulation(plan: &RunPlan, initial: Field) -> Result<Trajectory, SolverError> {
    let mut snapshots = Vec::new();
    let mut log = Vec::new();
    run_simulation_with::<SolverError>(
        plan,
        initial,
        |s| {
            snapshots.push(s);
            Ok(())
        },
        |r| log.push(*r),
    )?;
    Ok(Trajectory { snapshots, log })
}
