//! Command-line front end: `run`, `convergence` and `validate-field`.
//!
//! Failures print one JSON object on stderr and exit with status 1 (2 for
//! usage errors, as reported by clap).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sdpls::config::SolverConfig;
use sdpls::harness::{run_case, run_convergence, write_convergence_outputs, HarnessError};
use sdpls::velocity::{validate, AnalyticVelocity, SampleSet};
use sdpls::Vec3;

#[derive(Parser)]
#[command(name = "sdpls", version, about = "Signed-distance-preserving level set advection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write timeseries, reference and snapshots.
    Run { config: PathBuf },
    /// Mesh-refinement study against the characteristics oracle.
    Convergence {
        config: PathBuf,
        /// Cells along x, comma separated and strictly increasing.
        #[arg(long, value_delimiter = ',', required = true)]
        meshes: Vec<usize>,
        #[arg(long, value_enum, default_value = "on")]
        source: Switch,
    },
    /// Check incompressibility and wall impermeability of a velocity field.
    ValidateField { id: String },
}

struct Failure {
    kind: &'static str,
    message: String,
    key: Option<String>,
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let key = match &e {
            HarnessError::Config(c) => c.key().map(str::to_string),
            _ => None,
        };
        Self {
            kind: e.kind(),
            message: e.to_string(),
            key,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let line = json!({ "status": "error", "kind": f.kind, "key": f.key, "message": f.message });
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}

fn load(path: &PathBuf) -> Result<SolverConfig, Failure> {
    SolverConfig::from_file(path).map_err(|e| HarnessError::from(e).into())
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { config } => {
            let config = load(&config)?;
            let (out, files) = run_case(&config)?;
            let last = out.rows.last().map(|r| r.record);
            let summary = json!({
                "status": "ok",
                "steps": out.final_state.step_index,
                "t": out.final_state.t,
                "contact_misses": out.misses.len(),
                "final_x": last.map(|r| r.x.as_slice().to_vec()),
                "final_theta_deg": last.map(|r| r.theta_deg),
                "final_kappa": last.map(|r| r.kappa),
                "timeseries": files.timeseries,
                "reference": files.reference,
                "snapshots": files.snapshots,
            });
            println!("{summary}");
            Ok(())
        }
        Command::Convergence { config, meshes, source } => {
            let config = load(&config)?;
            let on = matches!(source, Switch::On);
            let report = run_convergence(&config, &meshes, on)?;
            let dir = config
                .output_dir
                .join(format!("convergence_source_{}", if on { "on" } else { "off" }));
            let csv = write_convergence_outputs(&dir, config.dim(), &report)?;
            print!("{}", report.table());
            println!("wrote {}", csv.display());
            Ok(())
        }
        Command::ValidateField { id } => {
            let v = AnalyticVelocity::from_id(&id).map_err(|e| Failure {
                kind: "velocity",
                message: e.to_string(),
                key: Some("velocity".into()),
            })?;
            let dim = v.dim().unwrap_or(2);
            let (hi, times) = if dim == 3 {
                (Vec3::new(2.0, 0.6, 2.0), vec![0.0, 0.5, 1.0])
            } else {
                (Vec3::new(1.0, 0.5, 0.0), vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.8])
            };
            let report = validate(&v, &SampleSet::lattice(dim, Vec3::zeros(), hi, 21, times));
            let divergence_ok = report.max_abs_divergence <= 1e-10;
            let wall_ok = report.max_abs_wall_normal_velocity <= 1e-10;
            println!(
                "{}",
                json!({
                    "field": v.id(),
                    "dim": dim,
                    "max_abs_divergence": report.max_abs_divergence,
                    "max_abs_wall_normal_velocity": report.max_abs_wall_normal_velocity,
                    "wall_impermeable_expected": v.is_wall_impermeable(),
                })
            );
            if !divergence_ok || (v.is_wall_impermeable() && !wall_ok) {
                return Err(Failure {
                    kind: "velocity",
                    message: format!("field `{}` violates its invariants", v.id()),
                    key: None,
                });
            }
            Ok(())
        }
    }
}
