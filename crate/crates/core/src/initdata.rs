//! Well-prepared initial data: two bulk maps into `O(n)^-` and `O(n)^+`
//! related by a reflection across the interface, glued by the one-dimensional
//! optimal profile in a layer of width `O(eps)`.

use thiserror::Error;

use crate::interface::{plateau, InterfaceError, SphereInterface};
use crate::matgeo::Mat;
use crate::profile1d::profile_s;
use crate::solver::{Field, GridSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InitError {
    #[error("scenario: {0}")]
    Invalid(String),
    #[error("layer half-width {delta} must be below delta_gamma / 2 = {limit}")]
    LayerTooWide { delta: f64, limit: f64 },
    #[error(transparent)]
    Interface(#[from] InterfaceError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScenarioKind {
    /// Constant bulk maps and a constant reflection axis.
    Constant,
    /// `A0^+` constant; the axis turns `winding` times as the polar angle
    /// goes once around the centre, so `A0^-` winds in the exterior.
    RotatingAxis { winding: i32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    /// Base map in `O(n)^-`.
    pub a_minus_base: Mat,
    /// Reflection axis for the constant scenario.
    pub axis: Vec<f64>,
    /// Half-width of the transition layer.
    pub delta: f64,
}

impl ScenarioSpec {
    /// `a_minus_base = R(angle) diag(-1, 1, ..)` with `R` a rotation in the
    /// first coordinate plane, and axis `e_1`.
    pub fn with_angle(kind: ScenarioKind, n: usize, angle: f64, delta: f64) -> Self {
        let mut d = vec![1.0; n];
        d[0] = -1.0;
        let mut axis = vec![0.0; n];
        axis[0] = 1.0;
        ScenarioSpec { kind, a_minus_base: Mat::plane_rotation(n, angle) * Mat::diag(&d), axis, delta }
    }

    pub fn validate(&self, g: &SphereInterface) -> Result<(), InitError> {
        let base = &self.a_minus_base;
        if base.orthogonality_defect() > 1e-10 || base.det() > 0.0 {
            return Err(InitError::Invalid("base map must lie in O(n)^-".into()));
        }
        let norm = self.axis.iter().map(|v| v * v).sum::<f64>().sqrt();
        if self.axis.len() != base.n() || (norm - 1.0).abs() > 1e-12 {
            return Err(InitError::Invalid(format!("axis must be a unit vector of length {}", base.n())));
        }
        let limit = 0.5 * g.delta_gamma;
        if !(self.delta > 0.0 && self.delta < limit) {
            return Err(InitError::LayerTooWide { delta: self.delta, limit });
        }
        if let ScenarioKind::RotatingAxis { .. } = self.kind {
            if g.flat || g.dim != 2 {
                return Err(InitError::Invalid("rotating axis needs a circle in two dimensions".into()));
            }
        }
        Ok(())
    }

    /// Reflection axis attached to the point `x`; constant along normals.
    pub fn axis_at(&self, g: &SphereInterface, x: &[f64; 2]) -> Vec<f64> {
        match self.kind {
            ScenarioKind::Constant => self.axis.clone(),
            ScenarioKind::RotatingAxis { winding } => {
                let theta = (x[1] - g.center[1]).atan2(x[0] - g.center[0]);
                let mut v = vec![0.0; self.a_minus_base.n()];
                v[0] = (winding as f64 * theta).cos();
                v[1] = (winding as f64 * theta).sin();
                v
            }
        }
    }

    /// Bulk maps `(A0^-(x), A0^+(x))`, with `A0^+ = A0^- (I - 2 n n^T)`.
    pub fn bulk_maps(&self, g: &SphereInterface, x: &[f64; 2]) -> (Mat, Mat) {
        let nrm = self.axis_at(g, x);
        let refl = Mat::identity(nrm.len()) - Mat::outer(&nrm, &nrm) * 2.0;
        match self.kind {
            ScenarioKind::Constant => (self.a_minus_base, self.a_minus_base * refl),
            ScenarioKind::RotatingAxis { .. } => {
                let e1 = {
                    let mut e = vec![0.0; nrm.len()];
                    e[0] = 1.0;
                    e
                };
                let plus = self.a_minus_base * (Mat::identity(nrm.len()) - Mat::outer(&e1, &e1) * 2.0);
                (plus * refl, plus)
            }
        }
    }
}

/// `S(x) = eta(x) s(d / eps) + (1 - eta(x)) chi(d > 0)`, with `eta` equal to 1
/// within `delta / 2` of the interface and 0 beyond `delta`.
pub fn interpolation_profile(x: &[f64; 2], eps: f64, g: &SphereInterface, delta: f64) -> Result<f64, InitError> {
    let d = g.signed_distance(x, 0.0)?;
    Ok(profile_from_distance(d, eps, delta))
}

fn profile_from_distance(d: f64, eps: f64, delta: f64) -> f64 {
    let eta = plateau(d / delta);
    let chi = if d > 0.0 { 1.0 } else { 0.0 };
    if eta == 0.0 {
        return chi;
    }
    eta * profile_s(d / eps) + (1.0 - eta) * chi
}

/// Node-wise `(1 - S) A0^- + S A0^+ = A0^- (I - 2 S n n^T)`.
pub fn build_well_prepared(
    grid: GridSpec,
    eps: f64,
    g: &SphereInterface,
    scenario: &ScenarioSpec,
) -> Result<Field, InitError> {
    scenario.validate(g)?;
    g.radius_at(0.0)?;
    let n = scenario.a_minus_base.n();
    Ok(Field::from_fn(grid, n, |_, _, x| {
        let d = g.signed_distance(&x, 0.0).expect("radius checked above");
        let s = profile_from_distance(d, eps, scenario.delta);
        if s == 1.0 {
            return scenario.bulk_maps(g, &x).1;
        }
        let (minus, _) = scenario.bulk_maps(g, &x);
        if s == 0.0 {
            return minus;
        }
        let nrm = scenario.axis_at(g, &x);
        minus * (Mat::identity(n) - Mat::outer(&nrm, &nrm) * (2.0 * s))
    }))
}
