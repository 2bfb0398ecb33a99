//! Minimal connecting orbits between the two orthogonal components and the
//! one-dimensional energies evaluated along curves in matrix space.

use std::f64::consts::SQRT_2;

use thiserror::Error;

use crate::matgeo::{potential_f, potential_grad, quasi_distance, quasi_potential, Mat, MatError};
use crate::quad::{adaptive_simpson, pairwise_sum};

/// Truncated domain on which the profile is resolved to machine precision.
pub const ORBIT_HALF_WIDTH: f64 = 20.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("endpoint {which} is not orthogonal (defect {defect:e})")]
    NotOrthogonal { which: &'static str, defect: f64 },
    #[error("endpoint {which} has determinant {det}, expected sign {expected}")]
    WrongComponent { which: &'static str, det: f64, expected: i8 },
    #[error("endpoints are not a minimal pair: |A+ - A-| = {dist}, expected 2")]
    NonMinimalPair { dist: f64 },
    #[error("curve needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("curve grid is not uniform and increasing near index {0}")]
    NonUniform(usize),
    #[error("curve has {z} grid points but {values} values")]
    LengthMismatch { z: usize, values: usize },
    #[error("grid spacing {0} exceeds 1e-2")]
    SpacingTooCoarse(f64),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// `s(z) = 1 - 1/(1 + exp(sqrt 2 z))`, evaluated without overflow.
pub fn profile_s(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-SQRT_2 * z).exp())
    } else {
        let e = (SQRT_2 * z).exp();
        e / (1.0 + e)
    }
}

/// `s'(z) = sqrt 2 s (1 - s)`.
pub fn profile_s_deriv(z: f64) -> f64 {
    let s = profile_s(z);
    SQRT_2 * s * profile_s(-z)
}

/// Endpoints and shift of a minimal connecting orbit.
#[derive(Clone, Copy, Debug)]
pub struct OrbitSpec {
    pub a_plus: Mat,
    pub a_minus: Mat,
    pub tau: f64,
}

impl OrbitSpec {
    pub fn new(a_plus: Mat, a_minus: Mat, tau: f64) -> Result<Self, ProfileError> {
        for (which, m, sign) in [("A+", &a_plus, 1i8), ("A-", &a_minus, -1i8)] {
            let defect = m.orthogonality_defect();
            if defect > 1e-10 {
                return Err(ProfileError::NotOrthogonal { which, defect });
            }
            let det = m.det();
            if det.signum() as i8 != sign {
                return Err(ProfileError::WrongComponent { which, det, expected: sign });
            }
        }
        let dist = (a_plus - a_minus).frob_norm();
        if (dist - 2.0).abs() > 1e-8 {
            return Err(ProfileError::NonMinimalPair { dist });
        }
        Ok(OrbitSpec { a_plus, a_minus, tau })
    }

    /// The pair `A+ = A- (I - 2 n n^T)` for a unit axis `n`.
    pub fn from_reflection(a_minus: Mat, axis: &[f64], tau: f64) -> Result<Self, ProfileError> {
        let n = a_minus.n();
        let refl = Mat::identity(n) - Mat::outer(axis, axis) * 2.0;
        Self::new(a_minus * refl, a_minus, tau)
    }

    /// `A- = diag(-1, 1, ..)`, `A+ = I`.
    pub fn standard(n: usize) -> Self {
        let mut d = vec![1.0; n];
        d[0] = -1.0;
        OrbitSpec { a_plus: Mat::identity(n), a_minus: Mat::diag(&d), tau: 0.0 }
    }
}

/// `Theta(z) = s(z + tau) A+ + (1 - s(z + tau)) A-`.
pub fn minimal_orbit(spec: &OrbitSpec, z: f64) -> Mat {
    // 1 - s(x) is s(-x); using it keeps the far tail accurate.
    let x = z + spec.tau;
    spec.a_plus * profile_s(x) + spec.a_minus * profile_s(-x)
}

pub fn minimal_orbit_deriv(spec: &OrbitSpec, z: f64) -> Mat {
    (spec.a_plus - spec.a_minus) * profile_s_deriv(z + spec.tau)
}

/// Sampled curve on a uniform, increasing grid.
#[derive(Clone, Debug)]
pub struct Curve1D {
    z: Vec<f64>,
    values: Vec<Mat>,
}

impl Curve1D {
    pub fn new(z: Vec<f64>, values: Vec<Mat>) -> Result<Self, ProfileError> {
        if z.len() != values.len() {
            return Err(ProfileError::LengthMismatch { z: z.len(), values: values.len() });
        }
        if z.len() < 3 {
            return Err(ProfileError::TooFewPoints(z.len()));
        }
        let h = z[1] - z[0];
        for i in 1..z.len() {
            let hi = z[i] - z[i - 1];
            if !(hi > 0.0) || (hi - h).abs() > 1e-12 {
                return Err(ProfileError::NonUniform(i));
            }
        }
        Ok(Curve1D { z, values })
    }

    /// Samples `f` at `m` equispaced points of `[a, b]`.
    pub fn sample(f: impl Fn(f64) -> Mat, a: f64, b: f64, m: usize) -> Result<Self, ProfileError> {
        let z = uniform_grid(a, b, m);
        let values = z.iter().map(|&x| f(x)).collect();
        Self::new(z, values)
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn values(&self) -> &[Mat] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        (self.z[self.z.len() - 1] - self.z[0]) / (self.z.len() - 1) as f64
    }

    /// Second-order derivative: centred inside, one-sided three-point at the ends.
    pub fn derivative(&self) -> Vec<Mat> {
        let v = &self.values;
        let m = v.len();
        let h = self.spacing();
        (0..m)
            .map(|i| {
                if i == 0 {
                    (v[0] * -3.0 + v[1] * 4.0 - v[2]) * (0.5 / h)
                } else if i == m - 1 {
                    (v[m - 1] * 3.0 - v[m - 2] * 4.0 + v[m - 3]) * (0.5 / h)
                } else {
                    (v[i + 1] - v[i - 1]) * (0.5 / h)
                }
            })
            .collect()
    }

    fn trapezoid(&self, integrand: &[f64]) -> f64 {
        let m = integrand.len();
        let inner = pairwise_sum(&integrand[1..m - 1]);
        self.spacing() * (inner + 0.5 * (integrand[0] + integrand[m - 1]))
    }
}

/// `m` equispaced points from `a` to `b` inclusive.
pub fn uniform_grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    let h = (b - a) / (m - 1) as f64;
    (0..m).map(|i| if i == m - 1 { b } else { a + i as f64 * h }).collect()
}

/// `int (1/2 |u'|^2 + F(u)) dz` by the trapezoid rule.
pub fn orbit_energy(curve: &Curve1D) -> f64 {
    let du = curve.derivative();
    let dens: Vec<f64> = curve.values.iter().zip(&du).map(|(u, d)| 0.5 * d.frob_norm_sq() + potential_f(u)).collect();
    curve.trapezoid(&dens)
}

/// `2 int_0^1 sqrt(2 f(rho)) drho` by adaptive quadrature.
pub fn surface_tension() -> f64 {
    let integrand = |r: f64| (2.0 * 0.25 * r * r * (2.0 - r) * (2.0 - r)).sqrt();
    2.0 * adaptive_simpson(&integrand, 0.0, 1.0, 1e-13)
}

/// Max over interior nodes of `|D_h^2 Theta - DF(Theta)|` on a uniform grid.
pub fn ode_residual(spec: &OrbitSpec, z_grid: &[f64]) -> Result<f64, ProfileError> {
    if z_grid.len() < 3 {
        return Err(ProfileError::TooFewPoints(z_grid.len()));
    }
    let h = z_grid[1] - z_grid[0];
    if h > 1e-2 * (1.0 + 1e-9) {
        return Err(ProfileError::SpacingTooCoarse(h));
    }
    let vals: Vec<Mat> = z_grid.iter().map(|&z| minimal_orbit(spec, z)).collect();
    let mut worst: f64 = 0.0;
    for i in 1..vals.len() - 1 {
        let lap = (vals[i + 1] - vals[i] * 2.0 + vals[i - 1]) * (1.0 / (h * h));
        worst = worst.max((lap - potential_grad(&vals[i])).frob_norm());
    }
    Ok(worst)
}

/// Max of `|1/2 |Theta'|^2 - F(Theta)|` over the grid, using the exact derivative.
pub fn equipartition_deviation(spec: &OrbitSpec, z_grid: &[f64]) -> f64 {
    z_grid
        .iter()
        .map(|&z| {
            let kinetic = 0.5 * minimal_orbit_deriv(spec, z).frob_norm_sq();
            (kinetic - potential_f(&minimal_orbit(spec, z))).abs()
        })
        .fold(0.0, f64::max)
}

/// `int (1/2 |g'|^2 + eps^-2 F~(g)) ds - eps^-1 (d(g(end)) - d(g(start)))`.
///
/// Nonnegative for every curve, and zero along minimal orbits of width `eps`.
pub fn line_modulated_energy(curve: &Curve1D, eps: f64) -> Result<f64, ProfileError> {
    let dg = curve.derivative();
    let inv2 = 1.0 / (eps * eps);
    let mut dens = Vec::with_capacity(dg.len());
    for (g, d) in curve.values.iter().zip(&dg) {
        dens.push(0.5 * d.frob_norm_sq() + inv2 * quasi_potential(g)?);
    }
    let first = quasi_distance(&curve.values[0])?;
    let last = quasi_distance(&curve.values[curve.values.len() - 1])?;
    Ok(curve.trapezoid(&dens) - (last - first) / eps)
}
