//! Checks every catalog velocity field for incompressibility and wall
//! impermeability, and prints its Jacobian at one point.
//!
//!     cargo run --release --example field_validation

use sdpls::grid::Vec3;
use sdpls::velocity::{validate, AnalyticVelocity, SampleSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for id in ["vortex_box", "time_periodic", "linear3d", "translation", "rotation2d"] {
        let v = AnalyticVelocity::from_id(id)?;
        let dim = v.dim().unwrap_or(3);
        let samples = SampleSet::lattice(dim, Vec3::zeros(), Vec3::new(1.0, 0.5, 1.0), 25, vec![0.0, 0.3, 0.7]);
        let report = validate(&v, &samples);
        println!(
            "{id:<14} max|div v| = {:.2e}  max|v_y| on y=0 = {:.2e}  (impermeable by design: {})",
            report.max_abs_divergence,
            report.max_abs_wall_normal_velocity,
            v.is_wall_impermeable()
        );
        let j = v.eval_gradient(0.0, &Vec3::new(0.3, 0.2, 0.1));
        println!("  grad v at (0.3, 0.2, 0.1):");
        for a in 0..dim {
            let row: Vec<String> = (0..dim).map(|b| format!("{:+.4}", j[(a, b)])).collect();
            println!("    {}", row.join("  "));
        }
    }
    Ok(())
}
