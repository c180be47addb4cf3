//! Cell-centered fields and the finite-difference operators built on them.
//!
//! Derivatives use the second-order central stencil in the interior and the
//! three-point one-sided stencils on the first and last cell layer of every
//! axis:
//!
//! ```text
//! f'(x) ≈ (-3 f(x) + 4 f(x+h) - f(x+2h)) / 2h     (first layer)
//! f'(x) ≈ ( 3 f(x) - 4 f(x-h) + f(x-2h)) / 2h     (last layer)
//! ```
//!
//! Every operator also has a single-cell form (`*_at`) that evaluates the exact
//! same arithmetic locally, so diagnostics can probe a few cells without
//! sweeping the whole grid.

use nalgebra::Matrix3;
use rayon::prelude::*;
use thiserror::Error;

use crate::grid::{Grid, Vec3};

pub type Mat3 = Matrix3<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("expected {expected} values for the grid, got {got}")]
    Length { expected: usize, got: usize },
    #[error("non-finite value at cell {0}")]
    NonFinite(usize),
}

/// One scalar per cell center.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
        }
    }

    /// Samples `f` at every cell center.
    pub fn from_fn(grid: &Grid, f: impl Fn(&Vec3) -> f64 + Sync) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|idx| f(&grid.cell_center(idx)))
            .collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    /// Wraps raw values, checking count and finiteness.
    pub fn from_values(grid: &Grid, values: Vec<f64>) -> Result<Self, FieldError> {
        if values.len() != grid.len() {
            return Err(FieldError::Length {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(FieldError::NonFinite(bad));
        }
        Ok(Self {
            grid: grid.clone(),
            values,
        })
    }

    /// Wraps raw values without the finiteness check. Callers that may produce
    /// non-finite data check with [`ScalarField::first_non_finite`].
    pub(crate) fn from_values_unchecked(grid: &Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn first_non_finite(&self) -> Option<usize> {
        self.values.iter().position(|v| !v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// One `dim`-vector per cell center (inactive components are zero).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    values: Vec<Vec3>,
}

impl VectorField {
    pub fn from_fn(grid: &Grid, f: impl Fn(&Vec3) -> Vec3 + Sync) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|idx| f(&grid.cell_center(idx)))
            .collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Vec3] {
        &self.values
    }

    #[inline]
    pub fn get(&self, idx: usize) -> Vec3 {
        self.values[idx]
    }

    /// Scalar field of one component.
    pub fn component(&self, c: usize) -> ScalarField {
        ScalarField::from_values_unchecked(&self.grid, self.values.iter().map(|v| v[c]).collect())
    }

    pub fn norm(&self) -> ScalarField {
        ScalarField::from_values_unchecked(&self.grid, self.values.iter().map(|v| v.norm()).collect())
    }
}

/// One `dim × dim` matrix per cell center, e.g. a sampled velocity Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    grid: Grid,
    values: Vec<Mat3>,
}

impl TensorField {
    pub fn from_fn(grid: &Grid, f: impl Fn(&Vec3) -> Mat3 + Sync) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|idx| f(&grid.cell_center(idx)))
            .collect();
        Self {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Mat3] {
        &self.values
    }

    #[inline]
    pub fn get(&self, idx: usize) -> Mat3 {
        self.values[idx]
    }
}

/// Derivative along `axis` at cell `idx` of the per-cell quantity `f`.
#[inline]
pub(crate) fn axis_derivative(grid: &Grid, idx: usize, axis: usize, f: impl Fn(usize) -> f64) -> f64 {
    let n = grid.cells()[axis];
    let p = grid.ijk(idx)[axis];
    let s = grid.stride(axis);
    let inv2h = 0.5 / grid.spacing();
    if p == 0 {
        (-3.0 * f(idx) + 4.0 * f(idx + s) - f(idx + 2 * s)) * inv2h
    } else if p == n - 1 {
        (3.0 * f(idx) - 4.0 * f(idx - s) + f(idx - 2 * s)) * inv2h
    } else {
        (f(idx + s) - f(idx - s)) * inv2h
    }
}

/// Gradient of `f` at a single cell.
pub fn gradient_at(f: &ScalarField, idx: usize) -> Vec3 {
    let grid = f.grid();
    let mut g = Vec3::zeros();
    for axis in 0..grid.dim() {
        g[axis] = axis_derivative(grid, idx, axis, |i| f.values[i]);
    }
    g
}

/// Cell-centered gradient with central interior / one-sided boundary stencils.
pub fn gradient(f: &ScalarField) -> VectorField {
    let grid = f.grid();
    let values = (0..grid.len()).into_par_iter().map(|idx| gradient_at(f, idx)).collect();
    VectorField {
        grid: grid.clone(),
        values,
    }
}

/// Regularized unit normal `∇f / (|∇f| + eps)` at a single cell.
#[inline]
pub fn normal_at(f: &ScalarField, idx: usize, eps: f64) -> Vec3 {
    let g = gradient_at(f, idx);
    g / (g.norm() + eps)
}

/// Divergence of a vector field with the same stencil family as [`gradient`].
pub fn divergence(v: &VectorField) -> ScalarField {
    let grid = v.grid();
    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            (0..grid.dim())
                .map(|a| axis_derivative(grid, idx, a, |i| v.values[i][a]))
                .sum()
        })
        .collect();
    ScalarField::from_values_unchecked(grid, values)
}

/// `κ = -∇·(∇f / (|∇f| + eps))` at a single cell. Identical arithmetic to
/// [`curvature`]: the normals on the stencil cells are recomputed locally.
pub fn curvature_at(f: &ScalarField, idx: usize, eps: f64) -> f64 {
    let grid = f.grid();
    let div: f64 = (0..grid.dim())
        .map(|a| axis_derivative(grid, idx, a, |i| normal_at(f, i, eps)[a]))
        .sum();
    -div
}

/// Curvature field `κ = -∇·n_ε`. In 3D this is the sum of the principal
/// curvatures; a sphere of radius `R` with outward normal gives `-2/R`.
pub fn curvature(f: &ScalarField, eps: f64) -> ScalarField {
    let grid = f.grid();
    let n = VectorField {
        grid: grid.clone(),
        values: (0..grid.len())
            .into_par_iter()
            .map(|idx| normal_at(f, idx, eps))
            .collect(),
    };
    let mut k = divergence(&n);
    k.values.iter_mut().for_each(|v| *v = -*v);
    k
}

/// Multilinear interpolation weights for `x` over cell centers. Coordinates
/// outside the hull of centers are clamped. Axes listed in `skip` are pinned to
/// layer `layer` instead of being interpolated.
fn interp_weights(grid: &Grid, x: &Vec3, skip: Option<(usize, usize)>) -> ([(usize, f64); 8], usize) {
    let n = grid.cells();
    let mut lo = [0usize; 3];
    let mut frac = [0.0f64; 3];
    let mut active = [false; 3];
    for a in 0..grid.dim() {
        if let Some((axis, layer)) = skip {
            if axis == a {
                lo[a] = layer;
                continue;
            }
        }
        let p = grid.center_position(a, x[a]).clamp(0.0, (n[a] - 1) as f64);
        let i0 = (p.floor() as usize).min(n[a] - 2);
        lo[a] = i0;
        frac[a] = p - i0 as f64;
        active[a] = true;
    }
    let mut out = [(0usize, 0.0f64); 8];
    let mut count = 0;
    for corner in 0..8usize {
        let mut w = 1.0;
        let mut c = lo;
        let mut skip_corner = false;
        for a in 0..3 {
            let bit = (corner >> a) & 1;
            if active[a] {
                c[a] += bit;
                w *= if bit == 1 { frac[a] } else { 1.0 - frac[a] };
            } else if bit == 1 {
                skip_corner = true;
            }
        }
        if !skip_corner {
            out[count] = (grid.index(c[0], c[1], c[2]), w);
            count += 1;
        }
    }
    (out, count)
}

/// Multilinear interpolation of cell-center values of the per-cell quantity `f`.
pub fn interpolate_with(grid: &Grid, x: &Vec3, f: impl Fn(usize) -> f64) -> f64 {
    let (w, n) = interp_weights(grid, x, None);
    w[..n].iter().map(|&(idx, wt)| wt * f(idx)).sum()
}

/// Multilinear interpolation of cell-center values; queries outside the hull of
/// cell centers clamp to the nearest point of the hull.
pub fn sample_bilinear(f: &ScalarField, x: &Vec3) -> f64 {
    interpolate_with(f.grid(), x, |i| f.values[i])
}

/// Value of the per-cell quantity `f` on the lower `y` wall at `x`.
///
/// The first three cell layers are interpolated in the wall-tangential
/// directions and then extrapolated to `y = y_min` with the quadratic
/// extrapolant through the centers at `h/2, 3h/2, 5h/2`.
pub fn wall_value_with(grid: &Grid, x: &Vec3, f: impl Fn(usize) -> f64) -> f64 {
    let layer = |j: usize| {
        let (w, n) = interp_weights(grid, x, Some((1, j)));
        w[..n].iter().map(|&(idx, wt)| wt * f(idx)).sum::<f64>()
    };
    (15.0 * layer(0) - 10.0 * layer(1) + 3.0 * layer(2)) / 8.0
}

/// Cells whose values [`wall_value_with`] reads for the wall point `x`.
pub fn wall_stencil(grid: &Grid, x: &Vec3) -> Vec<usize> {
    let mut out = Vec::with_capacity(12);
    for j in 0..3 {
        let (w, n) = interp_weights(grid, x, Some((1, j)));
        out.extend(w[..n].iter().map(|&(idx, _)| idx));
    }
    out
}
