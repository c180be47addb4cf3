//! Three-dimensional linear field: a spherical cap on the wall y = 0 is
//! stretched while one material point of its contact line is tracked.
//! Writes VTK snapshots at t = 0 and t = 1.93.
//!
//!     cargo run --release --example linear3d_contact_line

use sdpls::config::SolverConfig;
use sdpls::harness::{reference_for, run_case};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = SolverConfig::from_file(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/linear3d.cfg"))?;
    config.output_dir = std::env::temp_dir().join("sdpls_linear3d");
    let (out, files) = run_case(&config)?;
    let times: Vec<f64> = out.rows.iter().map(|r| r.record.t).collect();
    let reference = reference_for(&config, &times)?;

    println!(
        "{:>6} {:>17} {:>17} {:>9} {:>9} {:>8} {:>8}",
        "t", "contact point", "oracle", "theta", "oracle", "kappa", "oracle"
    );
    let stride = (out.rows.len() / 8).max(1);
    for (i, (row, s)) in out.rows.iter().zip(&reference.samples).enumerate() {
        if i % stride != 0 && i + 1 != out.rows.len() {
            continue;
        }
        let r = row.record;
        println!(
            "{:>6.3} ({:>6.3}, {:>6.3}) ({:>6.3}, {:>6.3}) {:>9.3} {:>9.3} {:>8.3} {:>8.3}",
            r.t, r.x[0], r.x[2], s.x[0], s.x[2], r.theta_deg, s.theta_deg, r.kappa, s.kappa
        );
    }
    for s in &files.snapshots {
        println!("snapshot {}", s.display());
    }
    Ok(())
}
