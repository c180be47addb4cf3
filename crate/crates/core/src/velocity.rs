//! Closed-form, divergence-free velocity fields with analytic first and second
//! spatial derivatives.
//!
//! Jacobians follow `J[(i, j)] = ∂v_i/∂x_j`. Hessians are returned per
//! component: `hess[k][(i, j)] = ∂_i ∂_j v_k`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use thiserror::Error;

use crate::field::Mat3;
use crate::grid::Vec3;

/// Second derivatives, one symmetric matrix per velocity component.
pub type Hessian = [Mat3; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VelocityError {
    #[error(
        "unknown velocity field `{0}` (expected one of vortex_box, time_periodic, linear3d, translation, rotation2d)"
    )]
    UnknownField(String),
    #[error("velocity field `{field}` has no parameter `{param}`")]
    UnknownParam { field: &'static str, param: String },
    #[error("velocity parameter `{param}` must be {what}")]
    BadParam { param: &'static str, what: &'static str },
}

/// Catalog of analytic velocity fields.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticVelocity {
    /// `v0 (-sin πx cos πy, cos πx sin πy)`.
    VortexBox { v0: f64 },
    /// `cos(πt/τ) (v0 + c1 x + c2 y, -c1 y)`.
    TimePeriodic { v0: f64, c1: f64, c2: f64, tau: f64 },
    /// Affine 3D field `(v1⁰ + c1x + c2y + c3z, -(c1+c6)y, v3⁰ + c4x + c5y + c6z)`.
    Linear3d { v1_0: f64, v3_0: f64, c: [f64; 6] },
    /// Uniform transport by `c`.
    Translation { c: Vec3 },
    /// Rigid rotation with angular velocity `omega` about `(xc, yc)`.
    Rotation2d { omega: f64, xc: f64, yc: f64 },
}

impl AnalyticVelocity {
    pub fn vortex_box() -> Self {
        Self::VortexBox { v0: -0.2 }
    }

    pub fn time_periodic() -> Self {
        Self::TimePeriodic {
            v0: -0.2,
            c1: 0.1,
            c2: -2.0,
            tau: 0.4,
        }
    }

    pub fn linear3d() -> Self {
        Self::Linear3d {
            v1_0: 0.3,
            v3_0: 0.4,
            c: [0.1, 0.1, -0.2, 0.3, -0.1, 0.1],
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Self::VortexBox { .. } => "vortex_box",
            Self::TimePeriodic { .. } => "time_periodic",
            Self::Linear3d { .. } => "linear3d",
            Self::Translation { .. } => "translation",
            Self::Rotation2d { .. } => "rotation2d",
        }
    }

    /// Field with default parameters for `id`.
    pub fn from_id(id: &str) -> Result<Self, VelocityError> {
        Ok(match id {
            "vortex_box" => Self::vortex_box(),
            "time_periodic" => Self::time_periodic(),
            "linear3d" => Self::linear3d(),
            "translation" => Self::Translation {
                c: Vec3::new(1.0, 0.0, 0.0),
            },
            "rotation2d" => Self::Rotation2d {
                omega: 2.0 * PI,
                xc: 0.5,
                yc: 0.5,
            },
            other => return Err(VelocityError::UnknownField(other.to_string())),
        })
    }

    /// Field `id` with named parameter overrides applied on top of the defaults.
    pub fn from_params(id: &str, params: &BTreeMap<String, f64>) -> Result<Self, VelocityError> {
        let mut v = Self::from_id(id)?;
        for (name, &value) in params {
            v.set_param(name, value)?;
        }
        if let Self::TimePeriodic { tau, .. } = v {
            if !(tau > 0.0) {
                return Err(VelocityError::BadParam {
                    param: "tau",
                    what: "positive",
                });
            }
        }
        Ok(v)
    }

    fn set_param(&mut self, name: &str, value: f64) -> Result<(), VelocityError> {
        let field = self.id();
        let unknown = || VelocityError::UnknownParam {
            field,
            param: name.to_string(),
        };
        let slot: &mut f64 = match self {
            Self::VortexBox { v0 } => match name {
                "v0" => v0,
                _ => return Err(unknown()),
            },
            Self::TimePeriodic { v0, c1, c2, tau } => match name {
                "v0" => v0,
                "c1" => c1,
                "c2" => c2,
                "tau" => tau,
                _ => return Err(unknown()),
            },
            Self::Linear3d { v1_0, v3_0, c } => match name {
                "v1_0" => v1_0,
                "v3_0" => v3_0,
                "c1" => &mut c[0],
                "c2" => &mut c[1],
                "c3" => &mut c[2],
                "c4" => &mut c[3],
                "c5" => &mut c[4],
                "c6" => &mut c[5],
                _ => return Err(unknown()),
            },
            Self::Translation { c } => match name {
                "cx" => &mut c[0],
                "cy" => &mut c[1],
                "cz" => &mut c[2],
                _ => return Err(unknown()),
            },
            Self::Rotation2d { omega, xc, yc } => match name {
                "omega" => omega,
                "xc" => xc,
                "yc" => yc,
                _ => return Err(unknown()),
            },
        };
        *slot = value;
        Ok(())
    }

    /// Spatial dimension the field is defined in (translation works in both).
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::VortexBox { .. } | Self::TimePeriodic { .. } | Self::Rotation2d { .. } => Some(2),
            Self::Linear3d { .. } => Some(3),
            Self::Translation { .. } => None,
        }
    }

    /// Whether the field does not depend on time.
    pub fn is_steady(&self) -> bool {
        !matches!(self, Self::TimePeriodic { .. })
    }

    /// Whether the closed form satisfies `v_y = 0` on `y = 0` for every parameter set.
    /// Holds for the vortex, time-periodic and linear 3D fields.
    pub fn is_wall_impermeable(&self) -> bool {
        matches!(
            self,
            Self::VortexBox { .. } | Self::TimePeriodic { .. } | Self::Linear3d { .. }
        )
    }

    fn time_factor(&self, t: f64) -> f64 {
        match self {
            Self::TimePeriodic { tau, .. } => (PI * t / tau).cos(),
            _ => 1.0,
        }
    }

    pub fn eval(&self, t: f64, x: &Vec3) -> Vec3 {
        match *self {
            Self::VortexBox { v0 } => {
                let (sx, cx) = (PI * x[0]).sin_cos();
                let (sy, cy) = (PI * x[1]).sin_cos();
                Vec3::new(-v0 * sx * cy, v0 * cx * sy, 0.0)
            }
            Self::TimePeriodic { .. } => self.time_factor(t) * self.spatial_periodic(x),
            Self::Linear3d { v1_0, v3_0, c } => Vec3::new(
                v1_0 + c[0] * x[0] + c[1] * x[1] + c[2] * x[2],
                -(c[0] + c[5]) * x[1],
                v3_0 + c[3] * x[0] + c[4] * x[1] + c[5] * x[2],
            ),
            Self::Translation { c } => c,
            Self::Rotation2d { omega, xc, yc } => Vec3::new(-omega * (x[1] - yc), omega * (x[0] - xc), 0.0),
        }
    }

    fn spatial_periodic(&self, x: &Vec3) -> Vec3 {
        match *self {
            Self::TimePeriodic { v0, c1, c2, .. } => Vec3::new(v0 + c1 * x[0] + c2 * x[1], -c1 * x[1], 0.0),
            _ => unreachable!(),
        }
    }

    /// Velocity bound used for the CFL restriction: the field itself for
    /// steady fields, the spatial amplitude (time factor replaced by one) for
    /// the time-periodic field.
    pub fn cfl_velocity(&self, t: f64, x: &Vec3) -> Vec3 {
        match self {
            Self::TimePeriodic { .. } => self.spatial_periodic(x),
            _ => self.eval(t, x),
        }
    }

    /// Jacobian `∂v_i/∂x_j`.
    pub fn eval_gradient(&self, t: f64, x: &Vec3) -> Mat3 {
        match *self {
            Self::VortexBox { v0 } => {
                let (sx, cx) = (PI * x[0]).sin_cos();
                let (sy, cy) = (PI * x[1]).sin_cos();
                let a = v0 * PI;
                Mat3::new(
                    -a * cx * cy,
                    a * sx * sy,
                    0.0,
                    -a * sx * sy,
                    a * cx * cy,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                )
            }
            Self::TimePeriodic { c1, c2, .. } => {
                self.time_factor(t) * Mat3::new(c1, c2, 0.0, 0.0, -c1, 0.0, 0.0, 0.0, 0.0)
            }
            Self::Linear3d { c, .. } => Mat3::new(c[0], c[1], c[2], 0.0, -(c[0] + c[5]), 0.0, c[3], c[4], c[5]),
            Self::Translation { .. } => Mat3::zeros(),
            Self::Rotation2d { omega, .. } => Mat3::new(0.0, -omega, 0.0, omega, 0.0, 0.0, 0.0, 0.0, 0.0),
        }
    }

    /// Second derivatives `∂_i ∂_j v_k`, returned as `[∇²v_1, ∇²v_2, ∇²v_3]`.
    pub fn eval_hessian(&self, _t: f64, x: &Vec3) -> Hessian {
        match *self {
            Self::VortexBox { v0 } => {
                let (sx, cx) = (PI * x[0]).sin_cos();
                let (sy, cy) = (PI * x[1]).sin_cos();
                let b = v0 * PI * PI;
                let h1 = Mat3::new(
                    b * sx * cy,
                    b * cx * sy,
                    0.0,
                    b * cx * sy,
                    b * sx * cy,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                );
                let h2 = Mat3::new(
                    -b * cx * sy,
                    -b * sx * cy,
                    0.0,
                    -b * sx * cy,
                    -b * cx * sy,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                );
                [h1, h2, Mat3::zeros()]
            }
            _ => [Mat3::zeros(); 3],
        }
    }
}

/// Maxima over a validation sample set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValidationReport {
    /// `max |∇·v|` over all samples.
    pub max_abs_divergence: f64,
    /// `max |v_y|` over the samples projected onto the wall `y = 0`.
    pub max_abs_wall_normal_velocity: f64,
}

/// Deterministic set of `(t, x)` samples.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub times: Vec<f64>,
    pub points: Vec<Vec3>,
}

impl SampleSet {
    /// Regular lattice with `n` points per active axis spanning the box
    /// `[lo, hi]` (end points included), evaluated at every time in `times`.
    pub fn lattice(dim: usize, lo: Vec3, hi: Vec3, n: usize, times: Vec<f64>) -> Self {
        let n = n.max(2);
        let coord = |a: usize, i: usize| lo[a] + (hi[a] - lo[a]) * i as f64 / (n - 1) as f64;
        let nz = if dim == 3 { n } else { 1 };
        let mut points = Vec::with_capacity(n * n * nz);
        for k in 0..nz {
            for j in 0..n {
                for i in 0..n {
                    let z = if dim == 3 { coord(2, k) } else { 0.0 };
                    points.push(Vec3::new(coord(0, i), coord(1, j), z));
                }
            }
        }
        Self { times, points }
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty() || self.points.is_empty()
    }
}

/// Checks incompressibility (trace of the analytic Jacobian) and wall
/// impermeability (`v_y` on `y = 0`) over `samples`.
pub fn validate(v: &AnalyticVelocity, samples: &SampleSet) -> FieldValidationReport {
    let mut div: f64 = 0.0;
    let mut wall: f64 = 0.0;
    for &t in &samples.times {
        for x in &samples.points {
            div = div.max(v.eval_gradient(t, x).trace().abs());
            let on_wall = Vec3::new(x[0], 0.0, x[2]);
            wall = wall.max(v.eval(t, &on_wall)[1].abs());
        }
    }
    FieldValidationReport {
        max_abs_divergence: div,
        max_abs_wall_normal_velocity: wall,
    }
}
