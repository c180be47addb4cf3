//! Reproduction front end: single runs with file output, mesh-refinement
//! studies against the characteristics oracle, and the CSV/VTK writers.

mod convergence;
mod csv;
mod vtk;

pub use convergence::{
    compare_with_reference, observed_order, reference_for, run_convergence, ConvergenceOrders, ConvergenceReport,
    ConvergenceRow, ErrorSummary,
};
pub use csv::{write_convergence_csv, write_reference_csv, write_timeseries_csv};
pub use vtk::{write_structured_points, write_vtk_snapshot};

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::config::{ConfigError, SolverConfig};
use crate::oracle::OracleError;
use crate::simulation::{run_with, RunError, RunOptions, RunOutput};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("mesh list must hold at least two strictly refining entries, got {0:?}")]
    Meshes(Vec<usize>),
}

impl HarnessError {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config(_) => "config",
            Self::Run(RunError::Solver(_)) => "solver",
            Self::Run(RunError::ContactLost { .. }) => "contact",
            Self::Oracle(_) => "oracle",
            Self::Io { .. } => "io",
            Self::Meshes(_) => "meshes",
        }
    }
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Files produced by [`run_case`].
#[derive(Debug, Clone)]
pub struct CaseFiles {
    pub timeseries: PathBuf,
    pub reference: PathBuf,
    pub snapshots: Vec<PathBuf>,
}

/// Runs `config` and writes `timeseries.csv`, `reference.csv` and one
/// `snapshot_NNN.vtk` per snapshot time into `config.output_dir`.
pub fn run_case(config: &SolverConfig) -> Result<(RunOutput, CaseFiles), HarnessError> {
    let output = run_with(config, RunOptions::default(), |_, _, _| {})?;
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;

    let timeseries = dir.join("timeseries.csv");
    write_timeseries_csv(&timeseries, config.dim(), &output.rows).map_err(io_err(&timeseries))?;

    let times: Vec<f64> = output.rows.iter().map(|r| r.record.t).collect();
    let reference = reference_for(config, &times)?;
    let reference_path = dir.join("reference.csv");
    write_reference_csv(&reference_path, &reference).map_err(io_err(&reference_path))?;

    let mut snapshots = Vec::new();
    for (i, s) in output.snapshots.iter().enumerate() {
        let path = dir.join(format!("snapshot_{i:03}.vtk"));
        write_vtk_snapshot(&s.phi, &path).map_err(io_err(&path))?;
        snapshots.push(path);
    }
    Ok((
        output,
        CaseFiles {
            timeseries,
            reference: reference_path,
            snapshots,
        },
    ))
}

/// Writes `convergence.csv` plus one `cells_N/` directory per mesh holding its
/// `timeseries.csv` and `reference.csv`.
pub fn write_convergence_outputs(dir: &Path, dim: usize, report: &ConvergenceReport) -> Result<PathBuf, HarnessError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    for row in &report.rows {
        let run_dir = dir.join(format!("cells_{}", row.cells_x));
        std::fs::create_dir_all(&run_dir).map_err(io_err(&run_dir))?;
        let ts = run_dir.join("timeseries.csv");
        write_timeseries_csv(&ts, dim, &row.timeseries).map_err(io_err(&ts))?;
        let rf = run_dir.join("reference.csv");
        write_reference_csv(&rf, &row.reference).map_err(io_err(&rf))?;
    }
    let path = dir.join("convergence.csv");
    write_convergence_csv(&path, report).map_err(io_err(&path))?;
    Ok(path)
}
