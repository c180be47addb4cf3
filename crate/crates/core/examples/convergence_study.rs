//! Mesh-refinement study of the vortex case against the oracle, with the
//! observed orders between consecutive meshes. Optional arguments: meshes,
//! e.g. `100 200 400 800`.
//!
//!     cargo run --release --example convergence_study -- 100 200 400

use sdpls::config::SolverConfig;
use sdpls::harness::{run_convergence, write_convergence_outputs};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = SolverConfig::from_file(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/vortex2d.cfg"))?;
    let mut meshes: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    if meshes.is_empty() {
        meshes = vec![100, 200, 400];
    }
    for source in [true, false] {
        let report = run_convergence(&config, &meshes, source)?;
        print!("{}", report.table());
        let dir = std::env::temp_dir().join(format!("sdpls_convergence_{}", if source { "on" } else { "off" }));
        let csv = write_convergence_outputs(&dir, config.dim(), &report)?;
        println!("wrote {}\n", csv.display());
    }
    Ok(())
}
