//! CSV writers. Floats use 17 significant digits so files round-trip exactly.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::convergence::ConvergenceReport;
use crate::oracle::ReferenceTrajectory;
use crate::simulation::TimeseriesRow;

struct F(f64);

impl std::fmt::Display for F {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.16e}", self.0)
    }
}

/// `step,t,x,[z,]theta_deg,kappa,grad_norm,dt`
pub fn write_timeseries_csv(path: &Path, dim: usize, rows: &[TimeseriesRow]) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    if dim == 3 {
        writeln!(out, "step,t,x,z,theta_deg,kappa,grad_norm,dt")?;
    } else {
        writeln!(out, "step,t,x,theta_deg,kappa,grad_norm,dt")?;
    }
    for row in rows {
        let r = &row.record;
        write!(out, "{},{},{},", row.step, F(r.t), F(r.x[0]))?;
        if dim == 3 {
            write!(out, "{},", F(r.x[2]))?;
        }
        writeln!(
            out,
            "{},{},{},{}",
            F(r.theta_deg),
            F(r.kappa),
            F(r.grad_norm),
            F(row.dt)
        )?;
    }
    out.flush()
}

/// `t,x,y,z,nx,ny,nz,grad_norm,theta_deg,kappa`
pub fn write_reference_csv(path: &Path, reference: &ReferenceTrajectory) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "t,x,y,z,nx,ny,nz,grad_norm,theta_deg,kappa")?;
    for s in &reference.samples {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            F(s.t),
            F(s.x[0]),
            F(s.x[1]),
            F(s.x[2]),
            F(s.n[0]),
            F(s.n[1]),
            F(s.n[2]),
            F(s.grad_norm_standard),
            F(s.theta_deg),
            F(s.kappa)
        )?;
    }
    out.flush()
}

/// One row per mesh; observed orders live in [`ConvergenceReport::orders`].
pub fn write_convergence_csv(path: &Path, report: &ConvergenceReport) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(
        out,
        "cells_x,h,max_err_x,max_err_theta,max_err_kappa,max_sdf_dev,max_err_grad_norm,final_err_grad_norm"
    )?;
    for r in &report.rows {
        let e = &r.errors;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.cells_x,
            F(r.h),
            F(e.max_err_x),
            F(e.max_err_theta),
            F(e.max_err_kappa),
            F(e.max_sdf_dev),
            F(e.max_err_grad_norm),
            F(e.final_err_grad_norm)
        )?;
    }
    out.flush()
}
