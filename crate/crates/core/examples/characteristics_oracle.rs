//! Reference solution along the characteristic through the right contact
//! point of the vortex case: position, angle, curvature and the gradient norm
//! of the source-free level set.
//!
//!     cargo run --release --example characteristics_oracle

use sdpls::grid::Vec3;
use sdpls::oracle::{integrate_reference, sphere_seed, DEFAULT_DT_REF};
use sdpls::velocity::AnalyticVelocity;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let center = Vec3::new(0.5, -0.15, 0.0);
    let x0 = Vec3::new(0.5 + 0.3 * 60f64.to_radians().sin(), 0.0, 0.0);
    let seed = sphere_seed(2, &center, &x0)?;
    let traj = integrate_reference(&AnalyticVelocity::vortex_box(), &seed, 0.875, DEFAULT_DT_REF)?;

    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10}",
        "t", "x", "theta", "kappa", "|grad|"
    );
    for s in traj.samples.iter().step_by(traj.samples.len() / 10) {
        println!(
            "{:>6.3} {:>10.6} {:>10.4} {:>10.4} {:>10.6}",
            s.t, s.x[0], s.theta_deg, s.kappa, s.grad_norm_standard
        );
    }
    Ok(())
}
