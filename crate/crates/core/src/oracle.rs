//! Reference solutions along the characteristic through the contact point.
//!
//! Along `dx/dt = v` the level-set gradient `g = ∇φ` and Hessian `H = ∇²φ` of
//! the classical advection equation obey
//!
//! ```text
//! dg/dt = -Jᵀ g
//! dH/dt = -Jᵀ H - H J - Σ_k g_k ∇²v_k
//! ```
//!
//! with `J = ∇v`. The zero contour is shared with the source-augmented
//! equation, so the normal `n = g/|g|`, the contact angle and the curvature
//! `κ = -(tr H - nᵀHn)/|g|` are references for both variants; `|g|` is the
//! gradient-norm reference for the source-free equation only.
//!
//! Integration is classical fourth-order Runge-Kutta with a fixed step,
//! shortened where needed to land exactly on requested output times.

use thiserror::Error;

use crate::field::Mat3;
use crate::grid::Vec3;
use crate::velocity::AnalyticVelocity;

/// Default reference step.
pub const DEFAULT_DT_REF: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("initial normal must be a unit vector, |n0| = {0}")]
    NotUnit(f64),
    #[error("gradient norm vanished along the characteristic at t = {0}")]
    GradientVanished(f64),
    #[error("output times must be non-negative and non-decreasing")]
    BadTimes,
    #[error("reference step must be positive, got {0}")]
    BadStep(f64),
    #[error("point coincides with the sphere center")]
    AtCenter,
}

/// Initial data on the characteristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicSeed {
    pub x0: Vec3,
    pub n0: Vec3,
    pub hessian0: Mat3,
    pub grad0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSample {
    pub t: f64,
    pub x: Vec3,
    /// Unit normal, renormalized from the integrated gradient.
    pub n: Vec3,
    /// `|∇φ|` of the classical (source-free) level-set equation.
    pub grad_norm_standard: f64,
    pub hessian: Mat3,
    pub theta_deg: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTrajectory {
    pub samples: Vec<ReferenceSample>,
}

impl ReferenceTrajectory {
    pub fn last(&self) -> Option<&ReferenceSample> {
        self.samples.last()
    }
}

#[derive(Debug, Clone, Copy)]
struct State {
    x: Vec3,
    g: Vec3,
    h: Mat3,
}

impl State {
    fn axpy(&self, a: f64, d: &State) -> State {
        State {
            x: self.x + a * d.x,
            g: self.g + a * d.g,
            h: self.h + a * d.h,
        }
    }
}

fn rhs(v: &AnalyticVelocity, t: f64, s: &State) -> State {
    let j = v.eval_gradient(t, &s.x);
    let hess = v.eval_hessian(t, &s.x);
    let jt = j.transpose();
    let mut dh = -(jt * s.h) - s.h * j;
    for (k, hk) in hess.iter().enumerate() {
        dh -= s.g[k] * hk;
    }
    State {
        x: v.eval(t, &s.x),
        g: -(jt * s.g),
        h: dh,
    }
}

fn rk4(v: &AnalyticVelocity, t: f64, dt: f64, s: &State) -> State {
    let k1 = rhs(v, t, s);
    let k2 = rhs(v, t + 0.5 * dt, &s.axpy(0.5 * dt, &k1));
    let k3 = rhs(v, t + 0.5 * dt, &s.axpy(0.5 * dt, &k2));
    let k4 = rhs(v, t + dt, &s.axpy(dt, &k3));
    State {
        x: s.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
        g: s.g + dt / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g),
        h: s.h + dt / 6.0 * (k1.h + 2.0 * k2.h + 2.0 * k3.h + k4.h),
    }
}

fn sample(t: f64, s: &State) -> Result<ReferenceSample, OracleError> {
    let gn = s.g.norm();
    if !(gn > 0.0) || !gn.is_finite() {
        return Err(OracleError::GradientVanished(t));
    }
    let n = s.g / gn;
    let h = 0.5 * (s.h + s.h.transpose());
    Ok(ReferenceSample {
        t,
        x: s.x,
        n,
        grad_norm_standard: gn,
        hessian: h,
        theta_deg: n[1].clamp(-1.0, 1.0).acos().to_degrees(),
        kappa: -(h.trace() - n.dot(&(h * n))) / gn,
    })
}

/// Integrates the characteristic system and reports a sample at every entry
/// of `times` (non-decreasing, starting at or after zero).
pub fn integrate_reference_at(
    v: &AnalyticVelocity,
    seed: &CharacteristicSeed,
    times: &[f64],
    dt_ref: f64,
) -> Result<ReferenceTrajectory, OracleError> {
    if !(dt_ref > 0.0) {
        return Err(OracleError::BadStep(dt_ref));
    }
    let nn = seed.n0.norm();
    if (nn - 1.0).abs() > 1e-12 {
        return Err(OracleError::NotUnit(nn));
    }
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(OracleError::BadTimes);
    }
    let mut s = State {
        x: seed.x0,
        g: seed.grad0 * seed.n0,
        h: seed.hessian0,
    };
    let mut t = 0.0;
    let mut samples = Vec::with_capacity(times.len());
    for &target in times {
        while t < target {
            let remaining = target - t;
            // Avoid a sliver step right before the target.
            let dt = if remaining <= 1.000001 * dt_ref {
                remaining
            } else {
                dt_ref
            };
            s = rk4(v, t, dt, &s);
            t = if dt == remaining { target } else { t + dt };
            if !(s.g.norm() > 0.0) {
                return Err(OracleError::GradientVanished(t));
            }
        }
        samples.push(sample(target, &s)?);
    }
    Ok(ReferenceTrajectory { samples })
}

/// Integrates to `t_end` and samples every `dt_ref` (plus `t_end` itself).
pub fn integrate_reference(
    v: &AnalyticVelocity,
    seed: &CharacteristicSeed,
    t_end: f64,
    dt_ref: f64,
) -> Result<ReferenceTrajectory, OracleError> {
    if !(dt_ref > 0.0) {
        return Err(OracleError::BadStep(dt_ref));
    }
    let n = (t_end / dt_ref).floor() as usize;
    let mut times: Vec<f64> = (0..=n).map(|i| i as f64 * dt_ref).filter(|t| *t <= t_end).collect();
    if times.last().map_or(true, |t| *t < t_end) {
        times.push(t_end);
    }
    integrate_reference_at(v, seed, &times, dt_ref)
}

/// Hessian of the distance to a circle (2D) or sphere (3D) centered at
/// `center`, evaluated at `x0`: `(P - e_r e_rᵀ)/|x0 - center|` with `P` the
/// identity on the active axes.
pub fn initial_hessian_sphere(dim: usize, center: &Vec3, x0: &Vec3) -> Result<Mat3, OracleError> {
    let mut d = x0 - center;
    if dim == 2 {
        d[2] = 0.0;
    }
    let r = d.norm();
    if r == 0.0 {
        return Err(OracleError::AtCenter);
    }
    let e = d / r;
    let mut p = Mat3::identity();
    if dim == 2 {
        p[(2, 2)] = 0.0;
    }
    Ok((p - e * e.transpose()) / r)
}

/// Seed for a point `x0` on the surface of a signed-distance circle/sphere.
pub fn sphere_seed(dim: usize, center: &Vec3, x0: &Vec3) -> Result<CharacteristicSeed, OracleError> {
    let mut d = x0 - center;
    if dim == 2 {
        d[2] = 0.0;
    }
    let r = d.norm();
    if r == 0.0 {
        return Err(OracleError::AtCenter);
    }
    Ok(CharacteristicSeed {
        x0: *x0,
        n0: d / r,
        hessian0: initial_hessian_sphere(dim, center, x0)?,
        grad0: 1.0,
    })
}

/// Gradient norm of the classical level-set solution at this sample.
pub fn reference_gradient_norm_standard(sample: &ReferenceSample) -> f64 {
    sample.grad_norm_standard
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn translation_keeps_everything_constant() {
        let c = Vec3::new(0.3, 0.0, -0.1);
        let v = AnalyticVelocity::Translation { c };
        let center = Vec3::new(0.5, -0.15, 0.0);
        let x0 = Vec3::new(0.5 + (0.0675f64).sqrt(), 0.0, 0.0);
        let seed = sphere_seed(2, &center, &x0).unwrap();
        let tr = integrate_reference(&v, &seed, 1.0, 1e-2).unwrap();
        let last = tr.last().unwrap();
        assert!((last.x - (x0 + c)).norm() < 1e-13);
        assert!((last.n - seed.n0).norm() < 1e-14);
        assert!((last.grad_norm_standard - 1.0).abs() < 1e-14);
        assert!((last.kappa + 1.0 / 0.3).abs() < 1e-12);
        assert!((last.theta_deg - 60.0).abs() < 1e-10);
    }

    #[test]
    fn rotation_preserves_gradient_norm() {
        let v = AnalyticVelocity::Rotation2d {
            omega: 2.0 * PI,
            xc: 0.5,
            yc: 0.5,
        };
        let seed = sphere_seed(2, &Vec3::new(0.5, 0.7, 0.0), &Vec3::new(0.65, 0.7, 0.0)).unwrap();
        let tr = integrate_reference(&v, &seed, 1.0, 1e-3).unwrap();
        for s in &tr.samples {
            assert!((s.grad_norm_standard - 1.0).abs() < 1e-10);
            assert!((s.kappa + 1.0 / 0.15).abs() < 1e-8);
        }
        assert!((tr.last().unwrap().x - seed.x0).norm() < 1e-10);
    }

    #[test]
    fn sphere_initial_values() {
        let center = Vec3::new(0.0, -0.2, 0.0);
        let x0 = Vec3::new(0.4, 0.0, 0.4);
        let seed = sphere_seed(3, &center, &x0).unwrap();
        assert!((seed.n0 - Vec3::new(2.0, 1.0, 2.0) / 3.0).norm() < 1e-15);
        let s = integrate_reference_at(&AnalyticVelocity::linear3d(), &seed, &[0.0], 1e-4)
            .unwrap()
            .samples[0];
        assert!((s.theta_deg - (1.0f64 / 3.0).acos().to_degrees()).abs() < 1e-12);
        assert!((s.theta_deg - 70.53).abs() < 0.01);
        assert!((s.kappa + 10.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn circle_hessian_properties() {
        let center = Vec3::new(0.5, -0.15, 0.0);
        let x0 = Vec3::new(0.5 + (0.0675f64).sqrt(), 0.0, 0.0);
        let h = initial_hessian_sphere(2, &center, &x0).unwrap();
        let e = (x0 - center) / 0.3;
        assert!((h * e).norm() < 1e-14);
        assert!((h.trace() - 1.0 / 0.3).abs() < 1e-12);
        let on_axis = initial_hessian_sphere(3, &Vec3::zeros(), &Vec3::new(0.0, 0.6, 0.0)).unwrap();
        assert!((on_axis * Vec3::y()).norm() < 1e-15);
        assert_eq!(
            initial_hessian_sphere(3, &Vec3::zeros(), &Vec3::zeros()),
            Err(OracleError::AtCenter)
        );
    }

    #[test]
    fn rejects_bad_input() {
        let v = AnalyticVelocity::vortex_box();
        let mut seed = sphere_seed(2, &Vec3::new(0.5, -0.15, 0.0), &Vec3::new(0.7598, 0.0, 0.0)).unwrap();
        assert_eq!(
            integrate_reference_at(&v, &seed, &[0.2, 0.1], 1e-3),
            Err(OracleError::BadTimes)
        );
        assert_eq!(
            integrate_reference_at(&v, &seed, &[0.2], 0.0),
            Err(OracleError::BadStep(0.0))
        );
        seed.n0 *= 2.0;
        assert!(matches!(
            integrate_reference_at(&v, &seed, &[0.2], 1e-3),
            Err(OracleError::NotUnit(_))
        ));
    }
}
