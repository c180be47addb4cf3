//! Interface generation rate `r = -<(∇v) n_ε, n_ε> G(φ)` and its cut-off.

use std::f64::consts::LN_10;

use rayon::prelude::*;

use super::SolverError;
use crate::field::{gradient_at, Mat3, ScalarField};
use crate::grid::Vec3;
use crate::velocity::AnalyticVelocity;

/// `ln(10³)`: the mollifier has decayed to `10⁻³` at distance `w2`.
const LN_1000: f64 = 3.0 * LN_10;

/// Source-term settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams {
    /// Regularization of the normal `∇φ / (|∇φ| + ε)`.
    pub epsilon: f64,
    /// Half-width of the plateau where the mollifier is one.
    pub w1: f64,
    /// Distance at which the mollifier equals `10⁻³`.
    pub w2: f64,
    pub enabled: bool,
}

impl SourceParams {
    pub fn new(epsilon: f64, w1: f64, w2: f64, enabled: bool) -> Result<Self, SolverError> {
        let p = Self {
            epsilon,
            w1,
            w2,
            enabled,
        };
        p.validate()?;
        Ok(p)
    }

    /// Defaults for two-dimensional runs: `ε = 1e-12`, `w1 = 0.05`, `w2 = 0.15`.
    pub fn default_2d(enabled: bool) -> Self {
        Self {
            epsilon: 1e-12,
            w1: 0.05,
            w2: 0.15,
            enabled,
        }
    }

    /// Defaults for three-dimensional runs: `w1 = 0.2`, `w2 = 0.6`, a plateau
    /// of five cells on a 50-cell mesh of the unit-2 box.
    pub fn default_3d(enabled: bool) -> Self {
        Self {
            epsilon: 1e-12,
            w1: 0.2,
            w2: 0.6,
            enabled,
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(SolverError::InvalidParameter {
                name: "epsilon",
                reason: "must be positive",
            });
        }
        if !(self.w1 > 0.0) {
            return Err(SolverError::InvalidParameter {
                name: "w1",
                reason: "must be positive",
            });
        }
        if !(self.w2 > self.w1 && self.w2.is_finite()) {
            return Err(SolverError::InvalidParameter {
                name: "w2",
                reason: "must exceed w1",
            });
        }
        Ok(())
    }
}

/// Symmetric C¹ cut-off: one on `|x| ≤ w1`, Gaussian decay beyond with
/// `G(±w2) = 10⁻³`.
pub fn mollifier(x: f64, w1: f64, w2: f64) -> Result<f64, SolverError> {
    if !(w1 > 0.0 && w2 > w1) {
        return Err(SolverError::InvalidParameter {
            name: "w2",
            reason: "mollifier needs 0 < w1 < w2",
        });
    }
    Ok(mollifier_unchecked(x, w1, w2))
}

#[inline]
pub(crate) fn mollifier_unchecked(x: f64, w1: f64, w2: f64) -> f64 {
    let d = x.abs();
    if d <= w1 {
        1.0
    } else {
        let s = (d - w1) / (w2 - w1);
        (-LN_1000 * s * s).exp()
    }
}

/// Source rate for one cell from the analytic Jacobian, the discrete gradient
/// and the cell value of `φ`.
#[inline]
pub fn source_rate(jacobian: &Mat3, grad: &Vec3, phi: f64, p: &SourceParams) -> f64 {
    if !p.enabled {
        return 0.0;
    }
    let n = grad / (grad.norm() + p.epsilon);
    normal_strain_rate(jacobian, &n) * mollifier_unchecked(phi, p.w1, p.w2)
}

/// `-<J n, n>`: the unmollified rate for a given normal.
#[inline]
pub fn normal_strain_rate(jacobian: &Mat3, n: &Vec3) -> f64 {
    -n.dot(&(jacobian * n))
}

#[inline]
pub(crate) fn source_at(phi: &ScalarField, idx: usize, t: f64, v: &AnalyticVelocity, p: &SourceParams) -> f64 {
    if !p.enabled {
        return 0.0;
    }
    let x = phi.grid().cell_center(idx);
    source_rate(&v.eval_gradient(t, &x), &gradient_at(phi, idx), phi.get(idx), p)
}

/// Discrete interface generation rate at every cell. Identically zero when
/// the source is disabled.
pub fn source_field(phi: &ScalarField, t: f64, v: &AnalyticVelocity, p: &SourceParams) -> ScalarField {
    let grid = phi.grid();
    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| source_at(phi, idx, t, v, p))
        .collect();
    ScalarField::from_values_unchecked(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn mollifier_reference_values() {
        let (w1, w2) = (0.05, 0.15);
        assert_eq!(mollifier(0.0, w1, w2).unwrap(), 1.0);
        assert_eq!(mollifier(w1, w1, w2).unwrap(), 1.0);
        assert_eq!(mollifier(-w1, w1, w2).unwrap(), 1.0);
        assert!((mollifier(w2, w1, w2).unwrap() - 1e-3).abs() < 1e-15);
        assert!((mollifier(-w2, w1, w2).unwrap() - 1e-3).abs() < 1e-15);
        // 1000^(-1/4)
        let expect = 1000f64.powf(-0.25);
        assert!((mollifier(0.1, w1, w2).unwrap() - expect).abs() < 1e-14);
        assert!((expect - 0.17783).abs() < 1e-5);
    }

    #[test]
    fn mollifier_rejects_bad_widths() {
        assert!(mollifier(0.0, 0.2, 0.1).is_err());
        assert!(mollifier(0.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn params_validation_names_the_key() {
        let err = SourceParams::new(1e-12, 0.1, 0.1, true).unwrap_err();
        assert!(err.to_string().contains("w2"));
        let err = SourceParams::new(0.0, 0.05, 0.1, true).unwrap_err();
        assert!(err.to_string().contains("epsilon"));
    }

    #[test]
    fn vortex_rate_at_origin() {
        let j = AnalyticVelocity::vortex_box().eval_gradient(0.0, &Vec3::zeros());
        let r = normal_strain_rate(&j, &Vec3::new(1.0, 0.0, 0.0));
        assert!((r + 0.2 * PI).abs() < 1e-12, "{r}");
        // Through the regularized normal the rate is off by O(ε).
        let p = SourceParams::default_2d(true);
        let r = source_rate(&j, &Vec3::new(1.0, 0.0, 0.0), 0.0, &p);
        assert!((r + 0.2 * PI).abs() < 1e-11, "{r}");
    }

    #[test]
    fn disabled_source_is_zero() {
        let j = AnalyticVelocity::vortex_box().eval_gradient(0.0, &Vec3::zeros());
        let p = SourceParams::default_2d(false);
        assert_eq!(source_rate(&j, &Vec3::new(1.0, 0.0, 0.0), 0.0, &p), 0.0);
    }
}
