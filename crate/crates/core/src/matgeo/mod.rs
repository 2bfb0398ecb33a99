//! Small dense matrices, the Saint Venant-Kirchhoff potential and the
//! geometry of the two orthogonal components `O(n)^+` and `O(n)^-`.

mod bump;
mod mat;
mod orthogonal;
mod quasi;
mod svd;

pub use bump::{abs_cubic_moment, bump_moments, bump_theta, BumpMoments};
pub use mat::{Mat, MAX_DIM};
pub use orthogonal::{dist_to_component, dist_to_components, nearest_orthogonal, Component, Rho};
pub use quasi::{
    project_pi, quasi_distance, quasi_distance_grad, quasi_distance_grad_flagged, quasi_distance_smoothed,
    quasi_potential, quasi_potential_profile, smoothed_profile, smoothed_profile_deriv, surface_tension_closed_form,
    theta_constant, GradResult, QuasiDistParams, C_F,
};
pub use svd::{svd, SvdResult};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatError {
    #[error("matrix dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("SVD did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("projection onto the requested component is ambiguous (smallest singular value {sigma_min:e})")]
    DegenerateProjection { sigma_min: f64 },
    #[error("invalid quasi-distance parameters: {0}")]
    InvalidParams(String),
    #[error("negative argument {0} to the quasi-potential profile")]
    NegativeRho(f64),
}

/// `[a, b] = a b^T - b a^T`, always antisymmetric.
pub fn commutator(a: &Mat, b: &Mat) -> Result<Mat, MatError> {
    mat::check_dims(a, b)?;
    Ok(a.mul_transpose(b) - b.mul_transpose(a))
}

/// `F(A) = 1/4 ||A A^T - I||^2`.
pub fn potential_f(a: &Mat) -> f64 {
    0.25 * (a.mul_transpose(a) - Mat::identity(a.n())).frob_norm_sq()
}

/// `DF(A) = A A^T A - A`.
pub fn potential_grad(a: &Mat) -> Mat {
    a.mul_transpose(a) * *a - *a
}
