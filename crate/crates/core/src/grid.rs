//! Uniform Cartesian grids with cell-centered storage.
//!
//! A [`Grid`] is always stored with three axes. Two-dimensional grids carry a
//! single cell along `z` and never touch that axis in stencils.

use nalgebra::Vector3;
use thiserror::Error;

/// Points and vectors in physical space. Two-dimensional data keeps `z = 0`.
pub type Vec3 = Vector3<f64>;

/// Smallest cell count per active axis. The one-sided second-order stencils
/// need three cells and the central stencil needs a neighbour on each side.
pub const MIN_CELLS: usize = 4;

/// Relative tolerance used when checking that every axis implies the same spacing.
const SPACING_RTOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid dimension must be 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("expected {expected} components for `{what}`, got {got}")]
    ComponentCount {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("axis {axis}: need at least {MIN_CELLS} cells, got {cells}")]
    TooFewCells { axis: usize, cells: usize },
    #[error("axis {axis}: extent must be positive and finite, got {extent}")]
    BadExtent { axis: usize, extent: f64 },
    #[error("non-uniform spacing: axis 0 gives {h0}, axis {axis} gives {h}")]
    NonUniformSpacing { axis: usize, h0: f64, h: f64 },
}

/// Uniform Cartesian mesh descriptor. Owns indexing and spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    origin: Vec3,
    cells: [usize; 3],
    spacing: f64,
}

impl Grid {
    /// Builds a grid from per-axis origin, extent and cell counts.
    ///
    /// All slices must have exactly `dim` entries and every axis must imply the
    /// same spacing `extent[a] / cells[a]`.
    pub fn new(dim: usize, origin: &[f64], extent: &[f64], cells: &[usize]) -> Result<Self, GridError> {
        if dim != 2 && dim != 3 {
            return Err(GridError::BadDimension(dim));
        }
        for (what, got) in [
            ("origin", origin.len()),
            ("extent", extent.len()),
            ("cells", cells.len()),
        ] {
            if got != dim {
                return Err(GridError::ComponentCount {
                    what,
                    expected: dim,
                    got,
                });
            }
        }
        for axis in 0..dim {
            if !(extent[axis].is_finite() && extent[axis] > 0.0) {
                return Err(GridError::BadExtent {
                    axis,
                    extent: extent[axis],
                });
            }
            if cells[axis] < MIN_CELLS {
                return Err(GridError::TooFewCells {
                    axis,
                    cells: cells[axis],
                });
            }
        }
        let h0 = extent[0] / cells[0] as f64;
        for axis in 1..dim {
            let h = extent[axis] / cells[axis] as f64;
            if ((h - h0) / h0).abs() > SPACING_RTOL {
                return Err(GridError::NonUniformSpacing { axis, h0, h });
            }
        }
        let mut o = Vec3::zeros();
        let mut n = [1usize; 3];
        for axis in 0..dim {
            o[axis] = origin[axis];
            n[axis] = cells[axis];
        }
        Ok(Self {
            dim,
            origin: o,
            cells: n,
            spacing: h0,
        })
    }

    /// Grid with `cells_x` cells along `x`; the other axes get
    /// `round(extent / h)` cells. Used to build mesh sequences.
    pub fn with_resolution(dim: usize, origin: &[f64], extent: &[f64], cells_x: usize) -> Result<Self, GridError> {
        if extent.is_empty() {
            return Err(GridError::ComponentCount {
                what: "extent",
                expected: dim,
                got: 0,
            });
        }
        let h = extent[0] / cells_x as f64;
        let cells: Vec<usize> = extent.iter().map(|e| (e / h).round().max(0.0) as usize).collect();
        Self::new(dim, origin, extent, &cells)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    /// Cell counts; inactive axes report 1.
    pub fn cells(&self) -> [usize; 3] {
        self.cells
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn extent(&self) -> Vec3 {
        let mut e = Vec3::zeros();
        for a in 0..self.dim {
            e[a] = self.cells[a] as f64 * self.spacing;
        }
        e
    }

    pub fn len(&self) -> usize {
        self.cells.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    /// Linear index, `x` fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.cells[0] * (j + self.cells[1] * k)
    }

    #[inline]
    pub fn ijk(&self, idx: usize) -> [usize; 3] {
        let nx = self.cells[0];
        let ny = self.cells[1];
        [idx % nx, (idx / nx) % ny, idx / (nx * ny)]
    }

    /// Linear-index offset of one step along `axis`.
    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        match axis {
            0 => 1,
            1 => self.cells[0],
            _ => self.cells[0] * self.cells[1],
        }
    }

    /// Cell-center coordinate along `axis` for integer position `i`.
    #[inline]
    pub fn center_coord(&self, axis: usize, i: usize) -> f64 {
        if axis < self.dim {
            self.origin[axis] + (i as f64 + 0.5) * self.spacing
        } else {
            0.0
        }
    }

    pub fn cell_center(&self, idx: usize) -> Vec3 {
        let c = self.ijk(idx);
        Vec3::new(
            self.center_coord(0, c[0]),
            self.center_coord(1, c[1]),
            self.center_coord(2, c[2]),
        )
    }

    /// Fractional cell-center coordinate of `x` along `axis`
    /// (0 at the first center, `n - 1` at the last).
    #[inline]
    pub fn center_position(&self, axis: usize, x: f64) -> f64 {
        (x - self.origin[axis]) / self.spacing - 0.5
    }

    /// Lower wall coordinate along `axis`.
    pub fn lower(&self, axis: usize) -> f64 {
        self.origin[axis]
    }

    /// Upper wall coordinate along `axis`.
    pub fn upper(&self, axis: usize) -> f64 {
        self.origin[axis] + self.cells[axis] as f64 * self.spacing
    }

    /// Whether `x` lies in the closed domain box (active axes only).
    pub fn contains(&self, x: &Vec3) -> bool {
        (0..self.dim).all(|a| x[a] >= self.lower(a) && x[a] <= self.upper(a))
    }
}

/// Convenience constructor mirroring [`Grid::new`].
pub fn make_grid(dim: usize, origin: &[f64], extent: &[f64], cells: &[usize]) -> Result<Grid, GridError> {
    Grid::new(dim, origin, extent, cells)
}
