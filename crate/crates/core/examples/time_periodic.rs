//! Time-periodic linear field over one period, with and without the source
//! term: the zero contour is the same, the gradient norm at the contact point
//! is not.
//!
//!     cargo run --release --example time_periodic

use sdpls::config::SolverConfig;
use sdpls::harness::reference_for;
use sdpls::simulation::run;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = SolverConfig::from_file(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/periodic2d.cfg"))?;
    let on = run(&config)?;
    let off = run(&config.with_source(false))?;
    let times: Vec<f64> = on.rows.iter().map(|r| r.record.t).collect();
    let reference = reference_for(&config, &times)?;

    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>12} {:>12} {:>12}",
        "t", "x on", "x off", "x ref", "|grad| on", "|grad| off", "ODE |grad|"
    );
    let stride = (on.rows.len() / 10).max(1);
    for (i, (row, s)) in on.rows.iter().zip(&reference.samples).enumerate() {
        if i % stride != 0 && i + 1 != on.rows.len() {
            continue;
        }
        let r = row.record;
        let o = off.rows.iter().find(|x| x.record.t == r.t).map(|x| x.record);
        println!(
            "{:>6.3} {:>10.6} {:>10.6} {:>10.6} {:>12.6} {:>12.6} {:>12.6}",
            r.t,
            r.x[0],
            o.map_or(f64::NAN, |o| o.x[0]),
            s.x[0],
            r.grad_norm,
            o.map_or(f64::NAN, |o| o.grad_norm),
            s.grad_norm_standard
        );
    }
    Ok(())
}
