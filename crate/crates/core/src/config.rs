//! Run configuration files.
//!
//! Configurations are TOML documents with flat keys:
//!
//! | key               | type            | required | meaning                                        |
//! |-------------------|-----------------|----------|------------------------------------------------|
//! | `dim`             | integer         | yes      | 2 or 3                                         |
//! | `origin`          | array of floats | yes      | lower domain corner                            |
//! | `extent`          | array of floats | yes      | domain lengths                                 |
//! | `cells`           | array of ints   | yes      | cells per axis (uniform spacing required)      |
//! | `cfl`             | float           | yes      | Courant number, `(0, 1]`                       |
//! | `c_r`             | float           | no (0.5) | bound on `|r| Δt`, `(0, 1)`                    |
//! | `epsilon`         | float           | no (1e-12) | normal regularization                        |
//! | `w1`, `w2`        | float           | yes      | mollifier plateau / decay distance             |
//! | `source`          | bool            | yes      | source term on or off                          |
//! | `velocity`        | string          | yes      | velocity field id                              |
//! | `velocity_params` | table of floats | no       | overrides of the field parameters              |
//! | `surface_center`  | array of floats | yes      | center of the initial circle/sphere            |
//! | `surface_radius`  | float           | yes      | radius of the initial circle/sphere            |
//! | `contact_seed`    | array of floats | 3D only  | tracked contact-line point at `t = 0`          |
//! | `t_end`           | float           | yes      | final time                                     |
//! | `snapshot_times`  | array of floats | no       | times at which the level set is written        |
//! | `output_dir`      | string          | no       | run directory (default `out`)                  |
//! | `dt_ref`          | float           | no (1e-4) | oracle step                                   |
//!
//! Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::field::ScalarField;
use crate::grid::{Grid, GridError, Vec3};
use crate::oracle::DEFAULT_DT_REF;
use crate::solver::{SourceParams, StepControl};
use crate::velocity::AnalyticVelocity;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config key `{key}`: {message}")]
    Invalid { key: &'static str, message: String },
}

impl ConfigError {
    fn invalid(key: &'static str, message: impl Into<String>) -> Self {
        Self::Invalid {
            key,
            message: message.into(),
        }
    }

    /// Key the error refers to, when known.
    pub fn key(&self) -> Option<&str> {
        match self {
            Self::Invalid { key, .. } => Some(key),
            _ => None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dim: usize,
    origin: Vec<f64>,
    extent: Vec<f64>,
    cells: Vec<usize>,
    cfl: f64,
    c_r: Option<f64>,
    epsilon: Option<f64>,
    w1: f64,
    w2: f64,
    source: bool,
    velocity: String,
    #[serde(default)]
    velocity_params: BTreeMap<String, f64>,
    surface_center: Vec<f64>,
    surface_radius: f64,
    contact_seed: Option<Vec<f64>>,
    t_end: f64,
    #[serde(default)]
    snapshot_times: Vec<f64>,
    output_dir: Option<PathBuf>,
    dt_ref: Option<f64>,
}

/// Initial signed-distance circle (2D) or sphere (3D).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialSurface {
    pub center: Vec3,
    pub radius: f64,
}

impl InitialSurface {
    /// Signed distance `|x - c| - R`.
    pub fn signed_distance(&self, x: &Vec3) -> f64 {
        (x - self.center).norm() - self.radius
    }

    pub fn level_set(&self, grid: &Grid) -> ScalarField {
        ScalarField::from_fn(grid, |x| self.signed_distance(x))
    }
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub grid: Grid,
    /// Domain as written in the file; used to rebuild grids for mesh studies.
    pub origin: Vec<f64>,
    pub extent: Vec<f64>,
    pub control: StepControl,
    pub source: SourceParams,
    pub velocity: AnalyticVelocity,
    pub surface: InitialSurface,
    pub contact_seed: Option<Vec3>,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    pub output_dir: PathBuf,
    pub dt_ref: f64,
}

fn vec3(key: &'static str, v: &[f64], dim: usize) -> Result<Vec3, ConfigError> {
    if v.len() != dim {
        return Err(ConfigError::invalid(
            key,
            format!("expected {dim} components, got {}", v.len()),
        ));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(ConfigError::invalid(key, "components must be finite"));
    }
    let mut out = Vec3::zeros();
    for (a, c) in v.iter().enumerate() {
        out[a] = *c;
    }
    Ok(out)
}

fn grid_error_key(e: &GridError) -> &'static str {
    match e {
        GridError::BadDimension(_) => "dim",
        GridError::ComponentCount { what, .. } => what,
        GridError::BadExtent { .. } => "extent",
        GridError::TooFewCells { .. } | GridError::NonUniformSpacing { .. } => "cells",
    }
}

impl SolverConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))?;
        Self::from_raw(raw)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    fn from_raw(raw: RawConfig) -> Result<Self, ConfigError> {
        let dim = raw.dim;
        let grid = Grid::new(dim, &raw.origin, &raw.extent, &raw.cells)
            .map_err(|e| ConfigError::invalid(grid_error_key(&e), e.to_string()))?;

        let control = StepControl {
            cfl: raw.cfl,
            c_r: raw.c_r.unwrap_or(0.5),
        };
        if !(control.cfl > 0.0 && control.cfl <= 1.0) {
            return Err(ConfigError::invalid("cfl", "must lie in (0, 1]"));
        }
        if !(control.c_r > 0.0 && control.c_r < 1.0) {
            return Err(ConfigError::invalid("c_r", "must lie in (0, 1)"));
        }

        let source = SourceParams {
            epsilon: raw.epsilon.unwrap_or(1e-12),
            w1: raw.w1,
            w2: raw.w2,
            enabled: raw.source,
        };
        if !(source.epsilon > 0.0) {
            return Err(ConfigError::invalid("epsilon", "must be positive"));
        }
        if !(source.w1 > 0.0) {
            return Err(ConfigError::invalid("w1", "must be positive"));
        }
        if !(source.w2 > source.w1) {
            return Err(ConfigError::invalid("w2", format!("must exceed w1 = {}", source.w1)));
        }

        let velocity = AnalyticVelocity::from_params(&raw.velocity, &raw.velocity_params).map_err(|e| match e {
            crate::velocity::VelocityError::UnknownField(_) => ConfigError::invalid("velocity", e.to_string()),
            _ => ConfigError::invalid("velocity_params", e.to_string()),
        })?;
        if let Some(d) = velocity.dim() {
            if d != dim {
                return Err(ConfigError::invalid(
                    "velocity",
                    format!("`{}` is a {d}D field but dim = {dim}", velocity.id()),
                ));
            }
        }

        let center = vec3("surface_center", &raw.surface_center, dim)?;
        if !(raw.surface_radius > 0.0) {
            return Err(ConfigError::invalid("surface_radius", "must be positive"));
        }
        let surface = InitialSurface {
            center,
            radius: raw.surface_radius,
        };

        let contact_seed = match (&raw.contact_seed, dim) {
            (Some(s), _) => {
                let p = vec3("contact_seed", s, dim)?;
                if (p[1] - grid.lower(1)).abs() > 1e-12 {
                    return Err(ConfigError::invalid("contact_seed", "must lie on the wall y = y_min"));
                }
                let d = surface.signed_distance(&p);
                if d.abs() > 1e-9 {
                    return Err(ConfigError::invalid(
                        "contact_seed",
                        format!("not on the initial surface (distance {d:e})"),
                    ));
                }
                Some(p)
            }
            (None, 3) => return Err(ConfigError::invalid("contact_seed", "required for 3D runs")),
            (None, _) => None,
        };
        let wall_offset = grid.lower(1) - center[1];
        if wall_offset.abs() >= surface.radius {
            return Err(ConfigError::invalid(
                "surface_center",
                "initial surface does not meet the wall y = y_min",
            ));
        }

        if !(raw.t_end >= 0.0 && raw.t_end.is_finite()) {
            return Err(ConfigError::invalid("t_end", "must be finite and non-negative"));
        }
        let mut snapshot_times = raw.snapshot_times;
        if snapshot_times.iter().any(|t| !(*t >= 0.0 && *t <= raw.t_end)) {
            return Err(ConfigError::invalid("snapshot_times", "must lie in [0, t_end]"));
        }
        snapshot_times.sort_by(f64::total_cmp);
        snapshot_times.dedup();

        let dt_ref = raw.dt_ref.unwrap_or(DEFAULT_DT_REF);
        if !(dt_ref > 0.0) {
            return Err(ConfigError::invalid("dt_ref", "must be positive"));
        }

        Ok(Self {
            grid,
            origin: raw.origin,
            extent: raw.extent,
            control,
            source,
            velocity,
            surface,
            contact_seed,
            t_end: raw.t_end,
            snapshot_times,
            output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("out")),
            dt_ref,
        })
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    /// Same setup on a grid with `cells_x` cells along `x`.
    pub fn with_cells_x(&self, cells_x: usize) -> Result<Self, ConfigError> {
        let grid = Grid::with_resolution(self.dim(), &self.origin, &self.extent, cells_x)
            .map_err(|e| ConfigError::invalid("cells", e.to_string()))?;
        Ok(Self { grid, ..self.clone() })
    }

    pub fn with_source(&self, enabled: bool) -> Self {
        let mut c = self.clone();
        c.source.enabled = enabled;
        c
    }

    /// Analytic contact point at `t = 0`: the configured seed, or in 2D the
    /// rightmost intersection of the circle with the wall.
    pub fn initial_contact_point(&self) -> Vec3 {
        if let Some(s) = self.contact_seed {
            return s;
        }
        let y = self.grid.lower(1);
        let c = self.surface.center;
        let dx = (self.surface.radius.powi(2) - (y - c[1]).powi(2)).sqrt();
        Vec3::new(c[0] + dx, y, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const VORTEX: &str = r#"
dim = 2
origin = [0.0, 0.0]
extent = [1.0, 0.5]
cells = [100, 50]
cfl = 0.5
epsilon = 1e-12
w1 = 0.05
w2 = 0.15
source = true
velocity = "vortex_box"
velocity_params = { v0 = -0.2 }
surface_center = [0.5, -0.15]
surface_radius = 0.3
t_end = 0.875
snapshot_times = [0.875, 0.0, 0.5]
"#;

    #[test]
    fn parses_vortex_setup() {
        let c = SolverConfig::from_toml_str(VORTEX).unwrap();
        assert_eq!(c.grid.cells(), [100, 50, 1]);
        assert_eq!(c.control, StepControl { cfl: 0.5, c_r: 0.5 });
        assert_eq!(c.velocity, AnalyticVelocity::VortexBox { v0: -0.2 });
        assert_eq!(c.snapshot_times, vec![0.0, 0.5, 0.875]);
        let x = c.initial_contact_point();
        assert!((x[0] - (0.5 + 0.3 * 60f64.to_radians().sin())).abs() < 1e-15);
    }

    #[test]
    fn errors_name_the_key() {
        let bad = VORTEX.replace("w2 = 0.15", "w2 = 0.05");
        let e = SolverConfig::from_toml_str(&bad).unwrap_err();
        assert_eq!(e.key(), Some("w2"));

        let missing = VORTEX.replace("w1 = 0.05\n", "");
        let e = SolverConfig::from_toml_str(&missing).unwrap_err();
        assert!(e.to_string().contains("w1"), "{e}");

        let unknown = VORTEX.replace("vortex_box", "swirl");
        let e = SolverConfig::from_toml_str(&unknown).unwrap_err();
        assert_eq!(e.key(), Some("velocity"));

        let extra = format!("{VORTEX}\nbogus = 1\n");
        let e = SolverConfig::from_toml_str(&extra).unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");

        let snap = VORTEX.replace("[0.875, 0.0, 0.5]", "[2.0]");
        assert_eq!(
            SolverConfig::from_toml_str(&snap).unwrap_err().key(),
            Some("snapshot_times")
        );

        let cells = VORTEX.replace("[100, 50]", "[100, 40]");
        assert_eq!(SolverConfig::from_toml_str(&cells).unwrap_err().key(), Some("cells"));
    }

    #[test]
    fn three_dimensional_needs_a_seed() {
        let text = r#"
dim = 3
origin = [0.0, 0.0, 0.0]
extent = [2.0, 0.6, 2.0]
cells = [50, 15, 50]
cfl = 0.2
w1 = 0.1
w2 = 0.3
source = true
velocity = "linear3d"
surface_center = [0.0, -0.2, 0.0]
surface_radius = 0.6
t_end = 1.93
"#;
        assert_eq!(
            SolverConfig::from_toml_str(text).unwrap_err().key(),
            Some("contact_seed")
        );
        let seeded = format!("{text}contact_seed = [0.4, 0.0, 0.4]\n");
        let c = SolverConfig::from_toml_str(&seeded).unwrap();
        assert_eq!(c.initial_contact_point(), Vec3::new(0.4, 0.0, 0.4));
        let off = format!("{text}contact_seed = [0.5, 0.0, 0.4]\n");
        assert_eq!(
            SolverConfig::from_toml_str(&off).unwrap_err().key(),
            Some("contact_seed")
        );
    }

    #[test]
    fn resolution_change_keeps_domain() {
        let c = SolverConfig::from_toml_str(VORTEX).unwrap().with_cells_x(400).unwrap();
        assert_eq!(c.grid.cells(), [400, 200, 1]);
        assert!((c.grid.spacing() - 0.0025).abs() < 1e-15);
    }
}
