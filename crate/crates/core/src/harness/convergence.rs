use crate::config::SolverConfig;
use crate::diagnostics::ContactRecord;
use crate::oracle::{integrate_reference_at, sphere_seed, OracleError, ReferenceTrajectory};
use crate::simulation::{run_with, RunOptions, TimeseriesRow};

use super::HarnessError;

/// Maximum-in-time errors of one run against the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorSummary {
    /// `max_n |x(t_n) - x_ref(t_n)|` (Euclidean distance on the wall).
    pub max_err_x: f64,
    pub max_err_theta: f64,
    pub max_err_kappa: f64,
    /// `max_n |1 - |∇φ|(t_n)|`.
    pub max_sdf_dev: f64,
    /// `max_n` of the gradient-norm error against its reference: one with the
    /// source on, the characteristic ODE solution with the source off.
    pub max_err_grad_norm: f64,
    /// The same gradient-norm error at the final time only.
    pub final_err_grad_norm: f64,
}

/// Oracle samples at `times` for the contact point of `config`.
pub fn reference_for(config: &SolverConfig, times: &[f64]) -> Result<ReferenceTrajectory, OracleError> {
    let seed = sphere_seed(config.dim(), &config.surface.center, &config.initial_contact_point())?;
    integrate_reference_at(&config.velocity, &seed, times, config.dt_ref)
}

/// Compares records with reference samples taken at the same times.
pub fn compare_with_reference(
    records: &[ContactRecord],
    reference: &ReferenceTrajectory,
    source_enabled: bool,
) -> ErrorSummary {
    assert_eq!(
        records.len(),
        reference.samples.len(),
        "reference must be sampled at the record times"
    );
    let mut e = ErrorSummary::default();
    for (r, s) in records.iter().zip(&reference.samples) {
        debug_assert_eq!(r.t, s.t);
        let target = if source_enabled { 1.0 } else { s.grad_norm_standard };
        let grad_err = (r.grad_norm - target).abs();
        e.max_err_x = e.max_err_x.max((r.x - s.x).norm());
        e.max_err_theta = e.max_err_theta.max((r.theta_deg - s.theta_deg).abs());
        e.max_err_kappa = e.max_err_kappa.max((r.kappa - s.kappa).abs());
        e.max_sdf_dev = e.max_sdf_dev.max((1.0 - r.grad_norm).abs());
        e.max_err_grad_norm = e.max_err_grad_norm.max(grad_err);
        e.final_err_grad_norm = grad_err;
    }
    e
}

/// `ln(e_coarse / e_fine) / ln(h_coarse / h_fine)`; `log2` of the error ratio
/// when the mesh is halved.
pub fn observed_order(e_coarse: f64, e_fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (e_coarse / e_fine).ln() / (h_coarse / h_fine).ln()
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub cells_x: usize,
    pub h: f64,
    pub steps: usize,
    pub errors: ErrorSummary,
    pub timeseries: Vec<TimeseriesRow>,
    pub reference: ReferenceTrajectory,
}

impl ConvergenceRow {
    pub fn records(&self) -> Vec<ContactRecord> {
        self.timeseries.iter().map(|r| r.record).collect()
    }
}

/// Observed orders between two consecutive meshes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceOrders {
    pub x: f64,
    pub theta: f64,
    pub kappa: f64,
    pub sdf_dev: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub source_enabled: bool,
    pub rows: Vec<ConvergenceRow>,
    pub orders: Vec<ConvergenceOrders>,
}

impl ConvergenceReport {
    /// Builds the report; orders are computed from the error columns only.
    pub fn from_rows(source_enabled: bool, rows: Vec<ConvergenceRow>) -> Self {
        let orders = rows
            .windows(2)
            .map(|w| {
                let (c, f) = (&w[0], &w[1]);
                let o = |a: f64, b: f64| observed_order(a, b, c.h, f.h);
                ConvergenceOrders {
                    x: o(c.errors.max_err_x, f.errors.max_err_x),
                    theta: o(c.errors.max_err_theta, f.errors.max_err_theta),
                    kappa: o(c.errors.max_err_kappa, f.errors.max_err_kappa),
                    sdf_dev: o(c.errors.max_sdf_dev, f.errors.max_sdf_dev),
                    grad_norm: o(c.errors.max_err_grad_norm, f.errors.max_err_grad_norm),
                }
            })
            .collect();
        Self {
            source_enabled,
            rows,
            orders,
        }
    }

    /// Human-readable table.
    pub fn table(&self) -> String {
        let mut s = format!(
            "source {}\n{:>6} {:>10} {:>12} {:>12} {:>12} {:>12} {:>12}\n",
            if self.source_enabled { "on" } else { "off" },
            "cells",
            "h",
            "err_x",
            "err_theta",
            "err_kappa",
            "sdf_dev",
            "err_gradn"
        );
        for r in &self.rows {
            let e = &r.errors;
            s += &format!(
                "{:>6} {:>10.3e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}\n",
                r.cells_x, r.h, e.max_err_x, e.max_err_theta, e.max_err_kappa, e.max_sdf_dev, e.max_err_grad_norm
            );
        }
        for (i, o) in self.orders.iter().enumerate() {
            s += &format!(
                "order {}->{}: x {:.3}  theta {:.3}  kappa {:.3}  sdf_dev {:.3}  grad_norm {:.3}\n",
                self.rows[i].cells_x,
                self.rows[i + 1].cells_x,
                o.x,
                o.theta,
                o.kappa,
                o.sdf_dev,
                o.grad_norm
            );
        }
        s
    }
}

/// Runs `config` on every mesh in `meshes` (cells along `x`, strictly
/// increasing) with the source switched as requested, at fixed CFL.
pub fn run_convergence(
    config: &SolverConfig,
    meshes: &[usize],
    source_enabled: bool,
) -> Result<ConvergenceReport, HarnessError> {
    if meshes.len() < 2 || meshes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HarnessError::Meshes(meshes.to_vec()));
    }
    let mut rows = Vec::with_capacity(meshes.len());
    for &cells_x in meshes {
        let mut c = config.with_cells_x(cells_x)?.with_source(source_enabled);
        c.snapshot_times.clear();
        let options = RunOptions {
            keep_snapshots: false,
            strict_contact: true,
        };
        let out = run_with(&c, options, |_, _, _| {})?;
        let records = out.records();
        let times: Vec<f64> = records.iter().map(|r| r.t).collect();
        let reference = reference_for(&c, &times)?;
        let errors = compare_with_reference(&records, &reference, source_enabled);
        rows.push(ConvergenceRow {
            cells_x,
            h: c.grid.spacing(),
            steps: out.final_state.step_index,
            errors,
            timeseries: out.rows,
            reference,
        });
    }
    Ok(ConvergenceReport::from_rows(source_enabled, rows))
}
