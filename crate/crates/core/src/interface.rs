//! Analytic mean-curvature-flow reference interfaces and the fields built
//! around them: signed distance, extended normal `xi`, extended curvature `H`.
//!
//! Mean curvature is the sum of principal curvatures, so a circle of radius
//! `R` in the plane obeys `R' = -1/R` and `Delta d = -(d-1)/R` on the interface.

use thiserror::Error;

use crate::solver::GridSpec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterfaceError {
    #[error("interface {0}")]
    Invalid(String),
    #[error("reference interface reaches its tubular width at t = {t}: R^2 = {radius_sq}")]
    Extinction { t: f64, radius_sq: f64 },
    #[error("interface does not fit the domain: {0}")]
    Margin(String),
}

/// Shrinking sphere (circle in 2D, interval in 1D) or a stationary hyperplane `{x_1 = 0}`.
///
/// The positive phase is inside the sphere, and `x_1 > 0` for the flat interface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereInterface {
    pub dim: usize,
    pub center: [f64; 2],
    pub r0: f64,
    pub delta_gamma: f64,
    pub flat: bool,
}

impl SphereInterface {
    pub fn sphere(dim: usize, center: [f64; 2], r0: f64, delta_gamma: f64) -> Result<Self, InterfaceError> {
        let g = SphereInterface { dim, center, r0, delta_gamma, flat: false };
        g.check_shape()?;
        Ok(g)
    }

    pub fn flat(dim: usize, delta_gamma: f64) -> Result<Self, InterfaceError> {
        let g = SphereInterface { dim, center: [0.0; 2], r0: f64::INFINITY, delta_gamma, flat: true };
        g.check_shape()?;
        Ok(g)
    }

    fn check_shape(&self) -> Result<(), InterfaceError> {
        if self.dim != 1 && self.dim != 2 {
            return Err(InterfaceError::Invalid(format!("dimension {} not in {{1, 2}}", self.dim)));
        }
        if !(self.delta_gamma > 0.0 && self.delta_gamma < 1.0) {
            return Err(InterfaceError::Invalid(format!("delta_gamma {} outside (0, 1)", self.delta_gamma)));
        }
        if !self.flat && !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(InterfaceError::Invalid(format!("radius {} must be positive", self.r0)));
        }
        Ok(())
    }

    /// Checks that the tube around the interface stays inside `[-half, half]^dim`
    /// and that the sphere keeps a radius of at least `delta_gamma` up to `t_final`.
    pub fn check_domain(&self, half: f64, t_final: f64) -> Result<(), InterfaceError> {
        if self.flat {
            if self.delta_gamma >= half {
                return Err(InterfaceError::Margin(format!(
                    "tube width {} reaches the boundary at {half}",
                    self.delta_gamma
                )));
            }
            return Ok(());
        }
        let reach = self.r0 + self.delta_gamma;
        for k in 0..self.dim {
            if self.center[k].abs() + reach > half {
                return Err(InterfaceError::Margin(format!(
                    "ball of radius r0 + delta_gamma = {reach} around the centre leaves [-{half}, {half}]"
                )));
            }
        }
        let radius_sq = self.r0 * self.r0 - 2.0 * (self.dim as f64 - 1.0) * t_final;
        if radius_sq < self.delta_gamma * self.delta_gamma {
            return Err(InterfaceError::Margin(format!(
                "radius at t = {t_final} is {} < delta_gamma = {}",
                radius_sq.max(0.0).sqrt(),
                self.delta_gamma
            )));
        }
        Ok(())
    }

    /// `R(t) = sqrt(r0^2 - 2(d-1)t)`; infinite for the flat interface.
    pub fn radius_at(&self, t: f64) -> Result<f64, InterfaceError> {
        if self.flat {
            return Ok(f64::INFINITY);
        }
        let radius_sq = self.r0 * self.r0 - 2.0 * (self.dim as f64 - 1.0) * t;
        if radius_sq <= self.delta_gamma * self.delta_gamma {
            return Err(InterfaceError::Extinction { t, radius_sq });
        }
        Ok(radius_sq.sqrt())
    }

    fn offset(&self, x: &[f64; 2]) -> ([f64; 2], f64) {
        let dx = [x[0] - self.center[0], if self.dim == 2 { x[1] - self.center[1] } else { 0.0 }];
        (dx, (dx[0] * dx[0] + dx[1] * dx[1]).sqrt())
    }

    /// Signed distance, positive inside.
    pub fn signed_distance(&self, x: &[f64; 2], t: f64) -> Result<f64, InterfaceError> {
        if self.flat {
            return Ok(x[0]);
        }
        let r = self.radius_at(t)?;
        Ok(r - self.offset(x).1)
    }

    /// Unit gradient of the signed distance. At the centre the gradient is
    /// undefined; `e_1` is returned with the flag set.
    pub fn grad_signed_distance(&self, x: &[f64; 2]) -> ([f64; 2], bool) {
        if self.flat {
            return ([1.0, 0.0], false);
        }
        let (dx, r) = self.offset(x);
        if r == 0.0 {
            return ([1.0, 0.0], true);
        }
        ([-dx[0] / r, -dx[1] / r], false)
    }

    /// `xi = psi(d / delta_gamma) grad d`.
    pub fn xi(&self, x: &[f64; 2], t: f64) -> Result<[f64; 2], InterfaceError> {
        let d = self.signed_distance(x, t)?;
        let psi = cutoff_psi(d / self.delta_gamma);
        if psi == 0.0 {
            return Ok([0.0; 2]);
        }
        let (g, _) = self.grad_signed_distance(x);
        Ok([psi * g[0], psi * g[1]])
    }

    /// `H = psi_0(d / delta_gamma) (d-1)/R grad d`, pointing towards the centre.
    pub fn extended_h(&self, x: &[f64; 2], t: f64) -> Result<[f64; 2], InterfaceError> {
        if self.flat || self.dim == 1 {
            return Ok([0.0; 2]);
        }
        let r = self.radius_at(t)?;
        let d = self.signed_distance(x, t)?;
        let cut = plateau(d / self.delta_gamma);
        if cut == 0.0 {
            return Ok([0.0; 2]);
        }
        let k = cut * (self.dim as f64 - 1.0) / r;
        let (g, _) = self.grad_signed_distance(x);
        Ok([k * g[0], k * g[1]])
    }

    /// Nearest point of the interface at time `t`; `None` at the centre.
    pub fn project(&self, x: &[f64; 2], t: f64) -> Result<Option<[f64; 2]>, InterfaceError> {
        if self.flat {
            return Ok(Some([0.0, x[1]]));
        }
        let r = self.radius_at(t)?;
        let (dx, dist) = self.offset(x);
        if dist == 0.0 {
            return Ok(None);
        }
        Ok(Some([self.center[0] + r * dx[0] / dist, self.center[1] + r * dx[1] / dist]))
    }

    /// `m` points spread over the interface. The flat interface is sampled
    /// along `x_2 in [-half, half]`.
    pub fn sample_points(&self, t: f64, m: usize, half: f64) -> Result<Vec<[f64; 2]>, InterfaceError> {
        if self.dim == 1 {
            if self.flat {
                return Ok(vec![[0.0, 0.0]]);
            }
            let r = self.radius_at(t)?;
            return Ok(vec![[self.center[0] - r, 0.0], [self.center[0] + r, 0.0]]);
        }
        if self.flat {
            return Ok((0..m).map(|k| [0.0, -half + 2.0 * half * k as f64 / (m - 1) as f64]).collect());
        }
        let r = self.radius_at(t)?;
        Ok((0..m)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / m as f64;
                [self.center[0] + r * a.cos(), self.center[1] + r * a.sin()]
            })
            .collect())
    }

    /// Outward normal of the positive phase at an interface point, i.e. `grad d`.
    pub fn normal(&self, p: &[f64; 2]) -> [f64; 2] {
        self.grad_signed_distance(p).0
    }
}

/// `psi(s) = exp(1 - 1/(1 - s^2))` on `(-1, 1)`, zero outside.
pub fn cutoff_psi(s: f64) -> f64 {
    let r = 1.0 - s * s;
    if r <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / r).exp()
    }
}

/// Smooth plateau: 1 for `|s| <= 1/2`, 0 for `|s| >= 1`, `C^infinity` in between.
pub fn plateau(s: f64) -> f64 {
    smooth_step_down(2.0 * s.abs() - 1.0)
}

/// Derivative of [`plateau`].
pub fn plateau_deriv(s: f64) -> f64 {
    let u = 2.0 * s.abs() - 1.0;
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let f = |x: f64| (-1.0 / x).exp();
    let (a, b) = (f(1.0 - u), f(u));
    let g = -a * b * (1.0 / ((1.0 - u) * (1.0 - u)) + 1.0 / (u * u)) / ((a + b) * (a + b));
    2.0 * s.signum() * g
}

/// 1 for `u <= 0`, 0 for `u >= 1`, built from `exp(-1/x)` so every derivative
/// vanishes at both junctions.
fn smooth_step_down(u: f64) -> f64 {
    if u <= 0.0 {
        return 1.0;
    }
    if u >= 1.0 {
        return 0.0;
    }
    let f = |x: f64| (-1.0 / x).exp();
    let a = f(1.0 - u);
    a / (a + f(u))
}

/// Geometric compatibility residuals on a grid; see [`geometric_residuals`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GeometricResiduals {
    /// `max |div xi + H . xi| / (|d| + h)`.
    pub divergence: f64,
    /// `max |d_t xi + (H . grad) xi + (grad H)^T xi| / (|d| + h)`.
    pub transport: f64,
    /// `max |d_t |xi|^2 + (H . grad)|xi|^2| / (|d| + h)`.
    pub length_transport: f64,
    /// `max (|grad xi| + |H| + |grad H|)`.
    pub bound: f64,
}

const TIME_STEP: f64 = 1e-5;

/// Residuals of the transport identities satisfied by `xi` and `H`,
/// measured with central differences of step `h` in space and `1e-5` in time.
/// The first three maxima run over nodes with `|d| < delta_gamma / 2`.
pub fn geometric_residuals(g: &SphereInterface, t: f64, grid: &GridSpec) -> Result<GeometricResiduals, InterfaceError> {
    let h = grid.h();
    let dim = g.dim.min(grid.dim);
    let mut out = GeometricResiduals::default();
    for (_, _, x) in grid.node_positions() {
        let xi = g.xi(&x, t)?;
        let hh = g.extended_h(&x, t)?;
        // Jacobians: jx[a][b] = d xi_a / d x_b.
        let mut jx = [[0.0; 2]; 2];
        let mut jh = [[0.0; 2]; 2];
        for b in 0..dim {
            let mut xp = x;
            let mut xm = x;
            xp[b] += h;
            xm[b] -= h;
            let (p, m) = (g.xi(&xp, t)?, g.xi(&xm, t)?);
            let (hp, hm) = (g.extended_h(&xp, t)?, g.extended_h(&xm, t)?);
            for a in 0..2 {
                jx[a][b] = (p[a] - m[a]) / (2.0 * h);
                jh[a][b] = (hp[a] - hm[a]) / (2.0 * h);
            }
        }
        let frob = |j: &[[f64; 2]; 2]| j.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
        let hnorm = (hh[0] * hh[0] + hh[1] * hh[1]).sqrt();
        out.bound = out.bound.max(frob(&jx) + hnorm + frob(&jh));

        let d = g.signed_distance(&x, t)?;
        if d.abs() >= 0.5 * g.delta_gamma {
            continue;
        }
        let weight = 1.0 / (d.abs() + h);
        let div = jx[0][0] + jx[1][1];
        let h_dot_xi = hh[0] * xi[0] + hh[1] * xi[1];
        out.divergence = out.divergence.max((div + h_dot_xi).abs() * weight);

        // The time scale R^2 is unrelated to h, so time gets its own step;
        // one-sided at either end of the admissible interval.
        let tp = if g.radius_at(t + TIME_STEP).is_ok() { t + TIME_STEP } else { t };
        let tm = (t - TIME_STEP).max(0.0);
        let (xp, xm) = (g.xi(&x, tp)?, g.xi(&x, tm)?);
        let mut res = [0.0; 2];
        for a in 0..2 {
            let dt = (xp[a] - xm[a]) / (tp - tm);
            let adv = hh[0] * jx[a][0] + hh[1] * jx[a][1];
            let grad_h_t_xi = jh[0][a] * xi[0] + jh[1][a] * xi[1];
            res[a] = dt + adv + grad_h_t_xi;
        }
        out.transport = out.transport.max((res[0] * res[0] + res[1] * res[1]).sqrt() * weight);

        let len2 = |v: [f64; 2]| v[0] * v[0] + v[1] * v[1];
        let dt_len = (len2(xp) - len2(xm)) / (tp - tm);
        // grad |xi|^2 = 2 J^T xi.
        let grad_len = [2.0 * (jx[0][0] * xi[0] + jx[1][0] * xi[1]), 2.0 * (jx[0][1] * xi[0] + jx[1][1] * xi[1])];
        let adv = hh[0] * grad_len[0] + hh[1] * grad_len[1];
        out.length_transport = out.length_transport.max((dt_len + adv).abs() * weight);
    }
    Ok(out)
}
