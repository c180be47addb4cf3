//! Explicit first-order upwind integration of the level-set equation with the
//! signed-distance-preserving source term.
//!
//! Each step freezes the source rate `rⁿ` computed from `φⁿ` and applies
//!
//! ```text
//! φⁿ⁺¹ = φⁿ (1 - rⁿ Δt) + Δt 𝓕ⁿ
//! ```
//!
//! where `𝓕ⁿ` is the donor-cell flux balance per unit volume. The time step
//! obeys both the CFL limit and `|r| Δt ≤ C_r`.

mod source;
mod upwind;

pub use source::{mollifier, normal_strain_rate, source_field, source_rate, SourceParams};
pub use upwind::{fill_inflow_ghosts, upwind_rhs, upwind_rhs_with, BoundaryClosure, BoundaryFace, FaceVelocities};

use rayon::prelude::*;
use thiserror::Error;

use crate::field::ScalarField;
use crate::grid::Grid;
use crate::velocity::AnalyticVelocity;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("velocity field `{field}` is {field_dim}D but the grid is {grid_dim}D")]
    DimensionMismatch {
        field: &'static str,
        field_dim: usize,
        grid_dim: usize,
    },
    #[error("non-finite level set value at cell {cell} after step {step} (t = {t})")]
    NonFinite { step: usize, t: f64, cell: usize },
}

/// Time-step restriction parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Courant number based on the L1 norm of the cell velocity, in `(0, 1]`.
    pub cfl: f64,
    /// Bound on `|r| Δt`, in `(0, 1)`.
    pub c_r: f64,
}

impl StepControl {
    pub fn new(cfl: f64, c_r: f64) -> Result<Self, SolverError> {
        let c = Self { cfl, c_r };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SolverError::InvalidParameter {
                name: "cfl",
                reason: "must lie in (0, 1]",
            });
        }
        if !(self.c_r > 0.0 && self.c_r < 1.0) {
            return Err(SolverError::InvalidParameter {
                name: "c_r",
                reason: "must lie in (0, 1)",
            });
        }
        Ok(())
    }
}

impl Default for StepControl {
    fn default() -> Self {
        Self { cfl: 0.5, c_r: 0.5 }
    }
}

/// Level set at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub phi: ScalarField,
    pub t: f64,
    pub step_index: usize,
}

impl SolverState {
    pub fn initial(phi: ScalarField) -> Self {
        Self {
            phi,
            t: 0.0,
            step_index: 0,
        }
    }
}

/// `min(cfl·h / max Σ|v_a|, c_r / max|r|)`; a bound whose denominator is zero
/// is skipped, so the result is infinite when nothing moves.
pub fn dt_bound(max_speed_sum: f64, h: f64, ctl: &StepControl, max_abs_r: f64) -> f64 {
    let advective = if max_speed_sum > 0.0 {
        ctl.cfl * h / max_speed_sum
    } else {
        f64::INFINITY
    };
    let source = if max_abs_r > 0.0 {
        ctl.c_r / max_abs_r
    } else {
        f64::INFINITY
    };
    advective.min(source)
}

/// Largest `Σ_a |v_a|` over cell centers, using the CFL velocity of `v`
/// (the spatial amplitude for time-periodic fields).
pub fn max_speed_sum(grid: &Grid, t: f64, v: &AnalyticVelocity) -> f64 {
    let dim = grid.dim();
    (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let u = v.cfl_velocity(t, &grid.cell_center(idx));
            (0..dim).map(|a| u[a].abs()).sum::<f64>()
        })
        .reduce(|| 0.0, f64::max)
}

/// Admissible time step for the state at `t` with source rates `r`.
pub fn compute_dt(grid: &Grid, t: f64, v: &AnalyticVelocity, ctl: &StepControl, r: &ScalarField) -> f64 {
    dt_bound(max_speed_sum(grid, t, v), grid.spacing(), ctl, r.max_abs())
}

/// What one step did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    pub max_abs_r: f64,
}

/// Integrator bound to one grid, velocity field and parameter set.
#[derive(Debug, Clone)]
pub struct Solver {
    grid: Grid,
    velocity: AnalyticVelocity,
    source: SourceParams,
    control: StepControl,
    steady_faces: Option<FaceVelocities>,
    steady_speed: Option<f64>,
}

impl Solver {
    pub fn new(
        grid: Grid,
        velocity: AnalyticVelocity,
        source: SourceParams,
        control: StepControl,
    ) -> Result<Self, SolverError> {
        source.validate()?;
        control.validate()?;
        if let Some(d) = velocity.dim() {
            if d != grid.dim() {
                return Err(SolverError::DimensionMismatch {
                    field: velocity.id(),
                    field_dim: d,
                    grid_dim: grid.dim(),
                });
            }
        }
        let (steady_faces, steady_speed) = if velocity.is_steady() {
            (
                Some(FaceVelocities::sample(&grid, 0.0, &velocity)),
                Some(max_speed_sum(&grid, 0.0, &velocity)),
            )
        } else {
            (None, None)
        };
        Ok(Self {
            grid,
            velocity,
            source,
            control,
            steady_faces,
            steady_speed,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn velocity(&self) -> &AnalyticVelocity {
        &self.velocity
    }

    pub fn source(&self) -> &SourceParams {
        &self.source
    }

    pub fn control(&self) -> &StepControl {
        &self.control
    }

    /// One unclipped step.
    pub fn step(&self, state: &SolverState) -> Result<(SolverState, StepReport), SolverError> {
        self.step_until(state, f64::INFINITY)
    }

    /// One step whose size is clipped so that `t` does not pass `t_limit`.
    pub fn step_until(&self, state: &SolverState, t_limit: f64) -> Result<(SolverState, StepReport), SolverError> {
        let phi = &state.phi;
        let t = state.t;
        let v = &self.velocity;
        let p = &self.source;

        let r: Vec<f64> = if p.enabled {
            (0..self.grid.len())
                .into_par_iter()
                .map(|idx| source::source_at(phi, idx, t, v, p))
                .collect()
        } else {
            Vec::new()
        };
        let max_abs_r = r.iter().fold(0.0f64, |m, x| m.max(x.abs()));

        let sampled;
        let faces = match &self.steady_faces {
            Some(f) => f,
            None => {
                sampled = FaceVelocities::sample(&self.grid, t, v);
                &sampled
            }
        };
        let speed = match self.steady_speed {
            Some(s) => s,
            None => max_speed_sum(&self.grid, t, v),
        };

        let mut dt = dt_bound(speed, self.grid.spacing(), &self.control, max_abs_r);
        if t + dt > t_limit {
            dt = t_limit - t;
        }
        if !dt.is_finite() {
            return Err(SolverError::InvalidParameter {
                name: "t_end",
                reason: "unbounded step: nothing moves and no end time",
            });
        }

        let closure = upwind::closure_for(phi, faces);
        let values: Vec<f64> = (0..self.grid.len())
            .into_par_iter()
            .map(|idx| {
                let flux = upwind::rhs_at(phi, faces, &closure, idx);
                let rn = if p.enabled { r[idx] } else { 0.0 };
                phi.get(idx) * (1.0 - rn * dt) + dt * flux
            })
            .collect();
        let next = ScalarField::from_values_unchecked(&self.grid, values);
        let step_index = state.step_index + 1;
        let t_next = if t + dt >= t_limit { t_limit } else { t + dt };
        if let Some(cell) = next.first_non_finite() {
            return Err(SolverError::NonFinite {
                step: step_index,
                t: t_next,
                cell,
            });
        }
        Ok((
            SolverState {
                phi: next,
                t: t_next,
                step_index,
            },
            StepReport { dt, max_abs_r },
        ))
    }
}
