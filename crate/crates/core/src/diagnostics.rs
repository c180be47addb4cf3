//! Contact-line diagnostics on the lower `y` wall: contact point, contact
//! angle, curvature and gradient norm.
//!
//! Cell-center quantities (gradient, curvature) are evaluated with the field
//! stencils and then carried to the wall point by [`wall_value_with`]:
//! tangential multilinear interpolation of the first three cell layers and
//! quadratic extrapolation to the wall.

use thiserror::Error;

use crate::field::{curvature_at, gradient_at, wall_value_with, ScalarField};
use crate::grid::{Grid, Vec3};

/// Below this gradient norm the normal (and everything derived from it) is
/// considered undefined.
pub const DEGENERATE_GRADIENT: f64 = 1e-8;

/// Half-width of the 3D re-bracketing search, in cells.
pub const SEARCH_RADIUS_CELLS: f64 = 3.0;

/// Samples per cell used to bracket the root along the search ray.
const SEARCH_SAMPLES_PER_CELL: f64 = 4.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("no sign change of the level set along the wall (interface detached)")]
    NoSignChange,
    #[error("gradient norm {0:e} too small to define a normal")]
    DegenerateGradient(f64),
}

/// Diagnostics at the tracked contact point at one time level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactRecord {
    pub t: f64,
    /// Contact point on the wall `y = y_min`.
    pub x: Vec3,
    pub theta_deg: f64,
    /// `-∇·n` convention.
    pub kappa: f64,
    pub grad_norm: f64,
}

/// Which wall crossing to report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContactSelector {
    /// Largest-`x` crossing along the wall row (2D).
    Rightmost,
    /// Smallest-`x` crossing along the wall row (2D).
    Leftmost,
    /// Crossing nearest to `seed` along the ray through `seed` in the
    /// direction of the wall-projected gradient, searched within
    /// [`SEARCH_RADIUS_CELLS`] cells.
    Tracked { seed: Vec3 },
}

/// Level set traced onto the wall at `x`.
pub fn wall_phi(phi: &ScalarField, x: &Vec3) -> f64 {
    wall_value_with(phi.grid(), x, |i| phi.get(i))
}

/// Gradient of the level set traced onto the wall at `x`.
pub fn wall_gradient(phi: &ScalarField, x: &Vec3) -> Vec3 {
    let grid = phi.grid();
    let mut g = Vec3::zeros();
    for c in 0..grid.dim() {
        g[c] = wall_value_with(grid, x, |i| gradient_at(phi, i)[c]);
    }
    g
}

fn wall_point(grid: &Grid, x: f64, z: f64) -> Vec3 {
    Vec3::new(x, grid.lower(1), if grid.dim() == 3 { z } else { 0.0 })
}

/// Locates the contact point on the lower `y` wall.
pub fn find_contact_point(phi: &ScalarField, selector: ContactSelector) -> Result<Vec3, DiagnosticsError> {
    let grid = phi.grid();
    match selector {
        ContactSelector::Rightmost | ContactSelector::Leftmost => {
            let nx = grid.cells()[0];
            let k = grid.cells()[2] / 2;
            let z = grid.center_coord(2, k);
            let trace: Vec<f64> = (0..nx)
                .map(|i| {
                    let at = |j| phi.get(grid.index(i, j, k));
                    (15.0 * at(0) - 10.0 * at(1) + 3.0 * at(2)) / 8.0
                })
                .collect();
            let crossing = |i: usize| {
                let (a, b) = (trace[i], trace[i + 1]);
                if a == 0.0 && b == 0.0 {
                    return None;
                }
                if a * b > 0.0 {
                    return None;
                }
                let s = a / (a - b);
                Some(grid.center_coord(0, i) + s * grid.spacing())
            };
            let found = if selector == ContactSelector::Rightmost {
                (0..nx - 1).rev().find_map(crossing)
            } else {
                (0..nx - 1).find_map(crossing)
            };
            found
                .map(|x| wall_point(grid, x, z))
                .ok_or(DiagnosticsError::NoSignChange)
        }
        ContactSelector::Tracked { seed } => track_crossing(phi, seed),
    }
}

fn track_crossing(phi: &ScalarField, seed: Vec3) -> Result<Vec3, DiagnosticsError> {
    let grid = phi.grid();
    let seed = wall_point(grid, seed[0], seed[2]);
    let mut dir = wall_gradient(phi, &seed);
    dir[1] = 0.0;
    let norm = dir.norm();
    if norm < DEGENERATE_GRADIENT {
        return Err(DiagnosticsError::DegenerateGradient(norm));
    }
    dir /= norm;
    let f = |s: f64| wall_phi(phi, &(seed + s * dir));

    let h = grid.spacing();
    let ds = h / SEARCH_SAMPLES_PER_CELL;
    let m = (SEARCH_RADIUS_CELLS * SEARCH_SAMPLES_PER_CELL) as i64;
    let samples: Vec<(f64, f64)> = (-m..=m).map(|k| (k as f64 * ds, f(k as f64 * ds))).collect();
    let bracket = samples
        .windows(2)
        .filter(|w| w[0].1 * w[1].1 <= 0.0 && !(w[0].1 == 0.0 && w[1].1 == 0.0))
        .min_by(|a, b| {
            let ma = (a[0].0 + a[1].0).abs();
            let mb = (b[0].0 + b[1].0).abs();
            ma.total_cmp(&mb)
        })
        .ok_or(DiagnosticsError::NoSignChange)?;

    let s = regula_falsi(f, bracket[0], bracket[1]);
    Ok(seed + s * dir)
}

/// Illinois variant of false position on a sign-changing bracket.
fn regula_falsi(f: impl Fn(f64) -> f64, (mut a, mut fa): (f64, f64), (mut b, mut fb): (f64, f64)) -> f64 {
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let mut side = 0i8;
    for _ in 0..100 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = f(c);
        if fc == 0.0 || (b - a).abs() < 1e-15 {
            return c;
        }
        if fc * fb > 0.0 {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    (a * fb - b * fa) / (fb - fa)
}

/// Contact angle in degrees between the interface normal and the inward wall
/// normal `e_y`.
pub fn contact_angle(phi: &ScalarField, x: &Vec3, eps: f64) -> Result<f64, DiagnosticsError> {
    let g = wall_gradient(phi, x);
    let norm = g.norm();
    if norm < DEGENERATE_GRADIENT {
        return Err(DiagnosticsError::DegenerateGradient(norm));
    }
    let n = g / (norm + eps);
    Ok(n[1].clamp(-1.0, 1.0).acos().to_degrees())
}

/// Curvature `-∇·n_ε` carried to the wall point `x`.
pub fn contact_curvature(phi: &ScalarField, x: &Vec3, eps: f64) -> Result<f64, DiagnosticsError> {
    let norm = wall_gradient(phi, x).norm();
    if norm < DEGENERATE_GRADIENT {
        return Err(DiagnosticsError::DegenerateGradient(norm));
    }
    Ok(wall_value_with(phi.grid(), x, |i| curvature_at(phi, i, eps)))
}

/// `|∇φ|` carried to the wall point `x`.
pub fn contact_grad_norm(phi: &ScalarField, x: &Vec3) -> f64 {
    wall_gradient(phi, x).norm()
}

/// All four diagnostics at the contact point `x`.
pub fn contact_record(phi: &ScalarField, t: f64, x: Vec3, eps: f64) -> Result<ContactRecord, DiagnosticsError> {
    Ok(ContactRecord {
        t,
        x,
        theta_deg: contact_angle(phi, &x, eps)?,
        kappa: contact_curvature(phi, &x, eps)?,
        grad_norm: contact_grad_norm(phi, &x),
    })
}

/// `max_n |1 - |∇φ|(t_n)|`; `None` for an empty series.
pub fn max_sdf_deviation(records: &[ContactRecord]) -> Option<f64> {
    records.iter().map(|r| (1.0 - r.grad_norm).abs()).reduce(f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    fn circle(n: usize) -> ScalarField {
        let g = make_grid(2, &[0.0, 0.0], &[1.0, 0.5], &[n, n / 2]).unwrap();
        ScalarField::from_fn(&g, |x| ((x[0] - 0.5).powi(2) + (x[1] + 0.15).powi(2)).sqrt() - 0.3)
    }

    #[test]
    fn circle_contact_point_and_angle() {
        let phi = circle(200);
        let x = find_contact_point(&phi, ContactSelector::Rightmost).unwrap();
        let exact = 0.5 + (0.09f64 - 0.0225).sqrt();
        assert!((x[0] - exact).abs() < 1e-4, "{}", x[0]);
        assert!((exact - 0.7598).abs() < 1e-4);
        let left = find_contact_point(&phi, ContactSelector::Leftmost).unwrap();
        assert!((left[0] - (1.0 - exact)).abs() < 1e-4);
        let theta = contact_angle(&phi, &x, 1e-12).unwrap();
        assert!((theta - 60.0).abs() < 0.05, "{theta}");
        let k = contact_curvature(&phi, &x, 1e-12).unwrap();
        assert!((k + 1.0 / 0.3).abs() < 0.06, "{k}");
        assert!((contact_grad_norm(&phi, &x) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn wall_curvature_error_is_first_order() {
        // One-sided normals in the wall layers make the wall curvature O(h).
        let err = |n| {
            let phi = circle(n);
            let x = find_contact_point(&phi, ContactSelector::Rightmost).unwrap();
            (contact_curvature(&phi, &x, 1e-12).unwrap() + 1.0 / 0.3).abs()
        };
        let (e1, e2) = (err(200), err(400));
        let order = (e1 / e2).log2();
        assert!((0.8..2.2).contains(&order), "{e1} {e2} {order}");
    }

    #[test]
    fn affine_trace_has_exact_root() {
        let g = make_grid(2, &[0.0, 0.0], &[1.0, 0.5], &[20, 10]).unwrap();
        let phi = ScalarField::from_fn(&g, |x| 2.0 * (x[0] - 0.4321) + 0.7 * x[1]);
        let x = find_contact_point(&phi, ContactSelector::Rightmost).unwrap();
        assert!((x[0] - 0.4321).abs() < 1e-13);
        assert_eq!(x[1], 0.0);
        let tracked = find_contact_point(
            &phi,
            ContactSelector::Tracked {
                seed: Vec3::new(0.45, 0.0, 0.0),
            },
        )
        .unwrap();
        assert!((tracked[0] - 0.4321).abs() < 1e-13);
    }

    #[test]
    fn interface_parallel_to_wall_gives_zero_angle() {
        let g = make_grid(2, &[0.0, 0.0], &[1.0, 0.5], &[20, 10]).unwrap();
        let phi = ScalarField::from_fn(&g, |x| x[1] - 0.2);
        let theta = contact_angle(&phi, &Vec3::new(0.5, 0.0, 0.0), 1e-12).unwrap();
        // acos near one turns the O(ε) normal shortfall into O(√ε).
        assert!(theta.abs() < 1e-3, "{theta}");
        assert_eq!(
            find_contact_point(&phi, ContactSelector::Rightmost),
            Err(DiagnosticsError::NoSignChange)
        );
        assert!(contact_curvature(&phi, &Vec3::new(0.5, 0.0, 0.0), 1e-12).unwrap().abs() < 1e-9);
    }

    #[test]
    fn scaled_distance_doubles_grad_norm() {
        let phi = circle(200);
        let x = find_contact_point(&phi, ContactSelector::Rightmost).unwrap();
        let doubled = ScalarField::from_fn(phi.grid(), |p| {
            2.0 * (((p[0] - 0.5).powi(2) + (p[1] + 0.15).powi(2)).sqrt() - 0.3)
        });
        assert!((contact_grad_norm(&doubled, &x) - 2.0).abs() < 2e-3);
    }

    #[test]
    fn flat_field_is_degenerate() {
        let g = make_grid(2, &[0.0, 0.0], &[1.0, 0.5], &[20, 10]).unwrap();
        let phi = ScalarField::from_fn(&g, |_| 1.0);
        assert!(matches!(
            contact_angle(&phi, &Vec3::new(0.5, 0.0, 0.0), 1e-12),
            Err(DiagnosticsError::DegenerateGradient(_))
        ));
    }

    #[test]
    fn sdf_deviation() {
        let rec = |g| ContactRecord {
            t: 0.0,
            x: Vec3::zeros(),
            theta_deg: 60.0,
            kappa: 0.0,
            grad_norm: g,
        };
        assert_eq!(max_sdf_deviation(&[rec(1.0), rec(1.0)]), Some(0.0));
        let d = max_sdf_deviation(&[rec(1.0), rec(1.2), rec(0.9)]).unwrap();
        assert!((d - 0.2).abs() < 1e-15);
        assert_eq!(max_sdf_deviation(&[]), None);
    }
}
