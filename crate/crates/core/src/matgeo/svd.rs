//! One-sided Jacobi SVD for the small square matrices used throughout the crate.

use super::mat::{Mat, MAX_DIM};
use super::MatError;

const MAX_SWEEPS: usize = 60;
const ORTH_TOL: f64 = 1e-15;

/// `a = u * diag(sigma) * v^T` with `sigma` sorted in descending order.
#[derive(Clone, Copy, Debug)]
pub struct SvdResult {
    pub u: Mat,
    pub sigma: [f64; MAX_DIM],
    pub v: Mat,
    /// Sign of `det(a)`; 0 when `a` is numerically singular.
    pub det_sign: i8,
    /// `sign(det u * det v)`, always +1 or -1.
    ///
    /// Equals `det_sign` whenever that is nonzero. For singular input it still
    /// tells which orthogonal component `u v^T` lies in.
    pub frame_sign: i8,
}

impl SvdResult {
    pub fn n(&self) -> usize {
        self.u.n()
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma[..self.n()]
    }

    pub fn smallest(&self) -> f64 {
        self.sigma[self.n() - 1]
    }

    /// `u * diag(d) * v^T`.
    pub fn compose(&self, d: &[f64]) -> Mat {
        let n = self.n();
        let mut ud = self.u;
        for i in 0..n {
            for j in 0..n {
                ud.set(i, j, self.u.get(i, j) * d[j]);
            }
        }
        ud.mul_transpose(&self.v)
    }

    pub fn reconstruct(&self) -> Mat {
        self.compose(self.sigma())
    }
}

pub fn svd(a: &Mat) -> Result<SvdResult, MatError> {
    let n = a.n();
    if !a.is_finite() {
        return Err(MatError::NonFinite);
    }
    // Columns of w converge to u * diag(sigma).
    let mut w = *a;
    let mut v = Mat::identity(n);
    // Columns below this norm are rounding noise; they are never rotated and
    // get their left singular vector from the basis completion instead.
    let negligible = n as f64 * f64::EPSILON * a.frob_norm();
    let negligible_sq = negligible * negligible;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..n {
                    let wp = w.get(i, p);
                    let wq = w.get(i, q);
                    alpha += wp * wp;
                    beta += wq * wq;
                    gamma += wp * wq;
                }
                if gamma == 0.0 || alpha.min(beta) <= negligible_sq || gamma.abs() <= ORTH_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let wp = w.get(i, p);
                    let wq = w.get(i, q);
                    w.set(i, p, c * wp - s * wq);
                    w.set(i, q, s * wp + c * wq);
                    let vp = v.get(i, p);
                    let vq = v.get(i, q);
                    v.set(i, p, c * vp - s * vq);
                    v.set(i, q, s * vp + c * vq);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(MatError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut sigma = [0.0; MAX_DIM];
    for (j, s) in sigma.iter_mut().enumerate().take(n) {
        *s = (0..n).map(|i| w.get(i, j).powi(2)).sum::<f64>().sqrt();
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));

    let mut u = Mat::zeros(n);
    let mut vs = Mat::zeros(n);
    let mut sorted = [0.0; MAX_DIM];
    let smax = sigma[order[0]];
    let mut filled = [false; MAX_DIM];
    for (k, &j) in order.iter().enumerate() {
        sorted[k] = sigma[j];
        for i in 0..n {
            vs.set(i, k, v.get(i, j));
        }
        if sigma[j] > negligible {
            for i in 0..n {
                u.set(i, k, w.get(i, j) / sigma[j]);
            }
            filled[k] = true;
        }
    }
    complete_basis(&mut u, &filled[..n]);

    let frame_sign = if u.det() * vs.det() >= 0.0 { 1 } else { -1 };
    let det_sign = if sorted[n - 1] <= n as f64 * f64::EPSILON * smax { 0 } else { frame_sign };

    Ok(SvdResult { u, sigma: sorted, v: vs, det_sign, frame_sign })
}

/// Fills the columns of `u` not marked in `filled` with an orthonormal completion.
fn complete_basis(u: &mut Mat, filled: &[bool]) {
    let n = u.n();
    for k in 0..n {
        if filled[k] {
            continue;
        }
        // Try canonical vectors until one survives Gram-Schmidt against the rest.
        let mut best = [0.0; MAX_DIM];
        let mut best_norm = -1.0;
        for e in 0..n {
            let mut cand = [0.0; MAX_DIM];
            cand[e] = 1.0;
            for _ in 0..2 {
                for (j, &done) in filled.iter().enumerate() {
                    if !done && j >= k {
                        continue;
                    }
                    let proj: f64 = (0..n).map(|i| cand[i] * u.get(i, j)).sum();
                    for (i, c) in cand.iter_mut().enumerate().take(n) {
                        *c -= proj * u.get(i, j);
                    }
                }
            }
            let norm = cand[..n].iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm > best_norm {
                best_norm = norm;
                best = cand;
            }
        }
        for i in 0..n {
            u.set(i, k, best[i] / best_norm);
        }
    }
}
