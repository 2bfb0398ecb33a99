//! The quasi-distance `d(A)`, a calibration of the potential that measures how
//! far `A` has travelled from `O(n)^-` towards `O(n)^+`, and its smoothed form.
//!
//! `d` only depends on the singular values of `A` (through `rho^+` and
//! `rho^-`), so smoothing is done on the scalar antiderivative rather than in
//! matrix space. That keeps the smoothed distance invariant under
//! `A -> U A V^T` for rotations `U`, `V`, and keeps its gradient commuting
//! with `A`.

use std::f64::consts::SQRT_2;

use super::bump::{abs_cubic_moment, bump_moments, bump_theta};
use super::mat::{Mat, MAX_DIM};
use super::orthogonal::Rho;
use super::MatError;
use crate::quad::tanh_sinh;

/// `c = 2 int_0^1 sqrt(2 f(rho)) drho = 2 sqrt(2) / 3`, the surface tension.
pub const C_F: f64 = 0.942_809_041_582_063_5;

pub fn surface_tension_closed_form() -> f64 {
    2.0 * SQRT_2 / 3.0
}

/// Smoothing configuration: the smoothing width is `eps^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuasiDistParams {
    pub eps: f64,
    pub k: u32,
    pub smoothing_width: f64,
}

impl QuasiDistParams {
    pub fn new(eps: f64, k: u32) -> Result<Self, MatError> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(MatError::InvalidParams(format!("eps must be positive, got {eps}")));
        }
        if k == 0 {
            return Err(MatError::InvalidParams("k must be at least 1".into()));
        }
        let w = eps.powi(k as i32);
        if !(w > 0.0 && w < 0.1) {
            return Err(MatError::InvalidParams(format!("smoothing width eps^k = {w} outside (0, 0.1)")));
        }
        Ok(QuasiDistParams { eps, k, smoothing_width: w })
    }

    /// Global bound on `|d_w - d|`: `c_theta * w`.
    pub fn smoothing_error_bound(&self) -> f64 {
        theta_constant() * self.smoothing_width
    }
}

/// `c_theta = m1 / sqrt(2)`: Lipschitz constant of `q` times the first absolute moment of the bump.
pub fn theta_constant() -> f64 {
    bump_moments().m1 / SQRT_2
}

/// `f(rho) = rho^2 (2 - rho)^2 / 4` on `[0, 1]`, `1/4` beyond.
pub fn quasi_potential_profile(rho: f64) -> Result<f64, MatError> {
    if rho < 0.0 || rho.is_nan() {
        return Err(MatError::NegativeRho(rho));
    }
    Ok(profile_f(rho))
}

fn profile_f(rho: f64) -> f64 {
    if rho >= 1.0 {
        0.25
    } else {
        0.25 * rho * rho * (2.0 - rho) * (2.0 - rho)
    }
}

/// `F~(A) = f(min(rho^+, rho^-))`.
pub fn quasi_potential(a: &Mat) -> Result<f64, MatError> {
    Ok(profile_f(Rho::of(a)?.min()))
}

/// Even extension of `q(r) = (r^2 - r^3/3)/sqrt 2`, constant `c/2` for `|r| >= 1`.
fn q_hat(r: f64) -> f64 {
    let r = r.abs();
    if r >= 1.0 {
        0.5 * C_F
    } else {
        (r * r - r * r * r / 3.0) / SQRT_2
    }
}

fn q_hat_deriv(r: f64) -> f64 {
    let a = r.abs();
    if a >= 1.0 {
        0.0
    } else {
        r.signum() * (2.0 * a - a * a) / SQRT_2
    }
}

/// Integrates `g(rho - w x) theta(x)` over `[-1, 1]`, split at the kinks of `g`.
fn convolve(g: impl Fn(f64) -> f64, rho: f64, w: f64) -> f64 {
    let mut cuts = [-1.0, 0.0, 0.0, 0.0, 1.0];
    let mut m = 1;
    for r in [-1.0, 0.0, 1.0] {
        let x = (rho - r) / w;
        if x > -1.0 && x < 1.0 {
            cuts[m] = x;
            m += 1;
        }
    }
    cuts[m] = 1.0;
    let cuts = &mut cuts[..=m];
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).map(|ab| tanh_sinh(|x| g(rho - w * x) * bump_theta(x), ab[0], ab[1], 1e-14)).sum()
}

/// `q_w = q_hat * theta_w` evaluated at `rho >= 0`.
pub fn smoothed_profile(rho: f64, w: f64) -> f64 {
    if w == 0.0 {
        return q_hat(rho);
    }
    if rho - w >= 1.0 {
        return 0.5 * C_F;
    }
    if rho - w >= 0.0 && rho + w <= 1.0 {
        // q is cubic on the window, so only the second moment survives.
        let q2 = (2.0 - 2.0 * rho) / SQRT_2;
        return q_hat(rho) + 0.5 * q2 * w * w * bump_moments().m2;
    }
    if rho < w && rho + w <= 1.0 {
        // Only |r|^3 feels the fold at 0; its moment is tabulated in u = rho / w.
        let (g, _) = abs_cubic_moment(rho / w);
        return (rho * rho + w * w * bump_moments().m2 - w * w * w * g / 3.0) / SQRT_2;
    }
    convolve(q_hat, rho, w)
}

pub fn smoothed_profile_deriv(rho: f64, w: f64) -> f64 {
    if w == 0.0 {
        return q_hat_deriv(rho);
    }
    if rho - w >= 1.0 {
        return 0.0;
    }
    if rho - w >= 0.0 && rho + w <= 1.0 {
        return q_hat_deriv(rho) - w * w * bump_moments().m2 / SQRT_2;
    }
    if rho < w && rho + w <= 1.0 {
        let (_, dg) = abs_cubic_moment(rho / w);
        return (2.0 * rho - w * w * dg / 3.0) / SQRT_2;
    }
    convolve(q_hat_deriv, rho, w)
}

/// Which distance drives the value: `rho^-` near `O(n)^-`, `rho^+` otherwise.
fn branch(r: &Rho) -> (i8, f64) {
    if r.minus <= r.plus {
        (-1, r.minus)
    } else {
        (1, r.plus)
    }
}

fn value_on_branch(s: i8, rho: f64, w: f64) -> f64 {
    if s < 0 {
        smoothed_profile(rho, w)
    } else {
        C_F - smoothed_profile(rho, w)
    }
}

/// Unsmoothed quasi-distance, in `[0, c]`.
pub fn quasi_distance(a: &Mat) -> Result<f64, MatError> {
    let r = Rho::of(a)?;
    let (s, rho) = branch(&r);
    Ok(value_on_branch(s, rho, 0.0))
}

pub fn quasi_distance_smoothed(a: &Mat, p: &QuasiDistParams) -> Result<f64, MatError> {
    let r = Rho::of(a)?;
    let (s, rho) = branch(&r);
    Ok(value_on_branch(s, rho, p.smoothing_width))
}

/// Smoothed distance together with its gradient.
#[derive(Clone, Copy, Debug)]
pub struct GradResult {
    pub value: f64,
    pub grad: Mat,
    /// Set when the nearest point on the active component is not unique,
    /// in which case `grad` is zero.
    pub degenerate: bool,
}

const SEPARATION: f64 = 1e-10;

pub fn quasi_distance_grad_flagged(a: &Mat, p: &QuasiDistParams) -> Result<GradResult, MatError> {
    let n = a.n();
    let w = p.smoothing_width;
    let r = Rho::of(a)?;
    let (s, rho) = branch(&r);
    let value = value_on_branch(s, rho, w);
    let zero = GradResult { value, grad: Mat::zeros(n), degenerate: false };
    if rho == 0.0 || rho - w >= 1.0 {
        return Ok(zero);
    }
    let sig = r.svd.sigma();
    let flip = r.flips(s);
    if (flip && sig[n - 2] - sig[n - 1] <= SEPARATION) || sig[n - 2] <= SEPARATION {
        return Ok(GradResult { degenerate: true, ..zero });
    }
    let dq = smoothed_profile_deriv(rho, w);
    let scale = if s < 0 { dq / rho } else { -dq / rho };
    // A - P^s(A) = u diag(sigma - j) v^T.
    let mut c = [0.0; MAX_DIM];
    for i in 0..n {
        c[i] = scale * (sig[i] - 1.0);
    }
    if flip {
        c[n - 1] = scale * (sig[n - 1] + 1.0);
    }
    Ok(GradResult { value, grad: r.svd.compose(&c[..n]), degenerate: false })
}

pub fn quasi_distance_grad(a: &Mat, p: &QuasiDistParams) -> Result<Mat, MatError> {
    Ok(quasi_distance_grad_flagged(a, p)?.grad)
}

/// Projection of `g` onto the line spanned by the smoothed-distance gradient at `a`.
pub fn project_pi(a: &Mat, g: &Mat, p: &QuasiDistParams) -> Result<Mat, MatError> {
    let d = quasi_distance_grad(a, p)?;
    Ok(project_onto(&d, g))
}

/// `(g : D) D / ||D||^2`, zero when `||D|| <= 1e-12`.
pub(crate) fn project_onto(d: &Mat, g: &Mat) -> Mat {
    let nd2 = d.frob_norm_sq();
    if nd2.sqrt() <= 1e-12 {
        return Mat::zeros(d.n());
    }
    *d * (g.dot(d) / nd2)
}
