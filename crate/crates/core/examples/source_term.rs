//! The interface generation rate for the vortex field on the initial circle,
//! and the mollifier that confines it to a band around the zero contour.
//!
//!     cargo run --release --example source_term

use sdpls::config::InitialSurface;
use sdpls::grid::{make_grid, Vec3};
use sdpls::solver::{mollifier, source_field, SourceParams};
use sdpls::velocity::AnalyticVelocity;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = SourceParams::default_2d(true);
    println!("mollifier w1 = {}, w2 = {}", p.w1, p.w2);
    for x in [0.0, 0.05, 0.075, 0.1, 0.125, 0.15, 0.2] {
        println!("  G({x:>5}) = {:.6e}", mollifier(x, p.w1, p.w2)?);
    }

    let grid = make_grid(2, &[0.0, 0.0], &[1.0, 0.5], &[100, 50])?;
    let surface = InitialSurface {
        center: Vec3::new(0.5, -0.15, 0.0),
        radius: 0.3,
    };
    let phi = surface.level_set(&grid);
    let r = source_field(&phi, 0.0, &AnalyticVelocity::vortex_box(), &p);
    let (lo, hi) = r.min_max();
    let active = r.values().iter().filter(|v| v.abs() > 1e-6).count();
    println!(
        "vortex field, initial circle: r in [{lo:.4}, {hi:.4}], {active} of {} cells active",
        grid.len()
    );

    // One row of the rate through the circle top, x = 0.5.
    let i = 50;
    for j in (0..50).step_by(5) {
        let idx = grid.index(i, j, 0);
        println!(
            "  y = {:.3}  phi = {:+.4}  r = {:+.5}",
            grid.center_coord(1, j),
            phi.get(idx),
            r.get(idx)
        );
    }
    Ok(())
}
