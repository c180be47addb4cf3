//! Level-set advection with a signed-distance-preserving source term on
//! uniform Cartesian grids.
//!
//! The solver transports `φ` with a first-order donor-cell scheme and adds a
//! reaction term `-r φ` that keeps `|∇φ| ≈ 1` near the zero contour. Contact
//! line diagnostics (position, angle, curvature) are extracted on the lower
//! `y` wall and can be compared against an ODE oracle integrated along
//! characteristics.
//!
//! ```no_run
//! use sdpls::config::SolverConfig;
//! use sdpls::simulation::run;
//!
//! let config = SolverConfig::from_file("configs/vortex2d.cfg").unwrap();
//! let out = run(&config).unwrap();
//! let last = out.rows.last().unwrap().record;
//! println!("t = {} x = {} theta = {}", last.t, last.x[0], last.theta_deg);
//! ```

pub mod config;
pub mod diagnostics;
pub mod field;
pub mod grid;
pub mod harness;
pub mod oracle;
pub mod simulation;
pub mod solver;
pub mod velocity;

pub use config::SolverConfig;
pub use diagnostics::ContactRecord;
pub use field::ScalarField;
pub use grid::{Grid, Vec3};
pub use solver::{Solver, SolverState, SourceParams, StepControl};
pub use velocity::AnalyticVelocity;
