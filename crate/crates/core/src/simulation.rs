//! Time loop: steps the solver to `t_end`, records contact diagnostics after
//! every step and keeps level-set snapshots at the configured times.

use thiserror::Error;

use crate::config::SolverConfig;
use crate::diagnostics::{contact_record, find_contact_point, ContactRecord, ContactSelector, DiagnosticsError};
use crate::grid::Vec3;
use crate::solver::{Solver, SolverError, SolverState, StepReport};
use crate::velocity::AnalyticVelocity;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("contact point lost at step {step} (t = {t}): {source}")]
    ContactLost {
        step: usize,
        t: f64,
        source: DiagnosticsError,
    },
}

/// One row of the diagnostics time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeseriesRow {
    pub step: usize,
    /// Size of the step that produced this state (zero for the initial state).
    pub dt: f64,
    pub record: ContactRecord,
}

/// A step whose diagnostics could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactMiss {
    pub step: usize,
    pub t: f64,
    pub reason: DiagnosticsError,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub rows: Vec<TimeseriesRow>,
    pub snapshots: Vec<SolverState>,
    pub misses: Vec<ContactMiss>,
    pub final_state: SolverState,
}

impl RunOutput {
    pub fn records(&self) -> Vec<ContactRecord> {
        self.rows.iter().map(|r| r.record).collect()
    }
}

/// Controls what [`run_with`] keeps.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub keep_snapshots: bool,
    /// Abort when the contact point cannot be found instead of logging a miss.
    pub strict_contact: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            keep_snapshots: true,
            strict_contact: false,
        }
    }
}

/// Heun prediction of where the marked contact point moves during one step.
fn predict(v: &AnalyticVelocity, t: f64, dt: f64, x: &Vec3, wall_y: f64) -> Vec3 {
    let k1 = v.eval(t, x);
    let k2 = v.eval(t + dt, &(x + dt * k1));
    let mut p = x + 0.5 * dt * (k1 + k2);
    p[1] = wall_y;
    p
}

struct Tracker {
    dim: usize,
    wall_y: f64,
    last: Vec3,
}

impl Tracker {
    fn locate(&mut self, state: &SolverState, selector_seed: Option<Vec3>) -> Result<Vec3, DiagnosticsError> {
        let selector = if self.dim == 3 {
            ContactSelector::Tracked {
                seed: selector_seed.unwrap_or(self.last),
            }
        } else {
            ContactSelector::Rightmost
        };
        let x = find_contact_point(&state.phi, selector)?;
        self.last = x;
        Ok(x)
    }
}

/// Runs `config` with default options.
pub fn run(config: &SolverConfig) -> Result<RunOutput, RunError> {
    run_with(config, RunOptions::default(), |_, _, _| {})
}

/// Runs `config`, calling `observe(previous, next, report)` after every step.
pub fn run_with(
    config: &SolverConfig,
    options: RunOptions,
    mut observe: impl FnMut(&SolverState, &SolverState, &StepReport),
) -> Result<RunOutput, RunError> {
    let solver = Solver::new(
        config.grid.clone(),
        config.velocity.clone(),
        config.source,
        config.control,
    )?;
    let eps = config.source.epsilon;
    let mut state = SolverState::initial(config.surface.level_set(&config.grid));
    let mut tracker = Tracker {
        dim: config.dim(),
        wall_y: config.grid.lower(1),
        last: config.initial_contact_point(),
    };

    let mut rows = Vec::new();
    let mut misses = Vec::new();
    let mut snapshots = Vec::new();
    let mut next_snapshot = 0usize;

    let mut record =
        |state: &SolverState, dt: f64, seed: Option<Vec3>, tracker: &mut Tracker| -> Result<(), RunError> {
            let found = tracker
                .locate(state, seed)
                .and_then(|x| contact_record(&state.phi, state.t, x, eps));
            match found {
                Ok(record) => rows.push(TimeseriesRow {
                    step: state.step_index,
                    dt,
                    record,
                }),
                Err(reason) if options.strict_contact => {
                    return Err(RunError::ContactLost {
                        step: state.step_index,
                        t: state.t,
                        source: reason,
                    })
                }
                Err(reason) => misses.push(ContactMiss {
                    step: state.step_index,
                    t: state.t,
                    reason,
                }),
            }
            Ok(())
        };

    record(&state, 0.0, Some(tracker.last), &mut tracker)?;
    while next_snapshot < config.snapshot_times.len() && config.snapshot_times[next_snapshot] <= state.t {
        if options.keep_snapshots {
            snapshots.push(state.clone());
        }
        next_snapshot += 1;
    }

    while state.t < config.t_end {
        let limit = config
            .snapshot_times
            .get(next_snapshot)
            .copied()
            .unwrap_or(config.t_end)
            .min(config.t_end);
        let (next, report) = solver.step_until(&state, limit)?;
        observe(&state, &next, &report);
        let seed =
            (config.dim() == 3).then(|| predict(&config.velocity, state.t, report.dt, &tracker.last, tracker.wall_y));
        state = next;
        record(&state, report.dt, seed, &mut tracker)?;
        while next_snapshot < config.snapshot_times.len() && config.snapshot_times[next_snapshot] <= state.t {
            if options.keep_snapshots {
                snapshots.push(state.clone());
            }
            next_snapshot += 1;
        }
    }

    Ok(RunOutput {
        rows,
        snapshots,
        misses,
        final_state: state,
    })
}
