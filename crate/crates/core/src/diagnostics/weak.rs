//! Residuals that need a time derivative: the phase-field curvature identity
//! and the commutator form of the limit flow tested against bump functions.

use rayon::prelude::*;

use crate::interface::{plateau, plateau_deriv, SphereInterface};
use crate::matgeo::{commutator, potential_grad, Mat};
use crate::quad::pairwise_sum;
use crate::solver::{discrete_laplacian, Field, Snapshot};

use super::DiagnosticsError;

/// Central difference of the field along `axis` at an interior node.
fn node_derivative(f: &Field, i: usize, j: usize, axis: usize) -> Mat {
    let h = f.grid.h();
    let (a, b) =
        if axis == 0 { (f.at_ij(i + 1, j), f.at_ij(i - 1, j)) } else { (f.at_ij(i, j + 1), f.at_ij(i, j - 1)) };
    (a - b) * (0.5 / h)
}

fn interior(f: &Field, i: usize, j: usize) -> bool {
    let np = f.grid.nodes_per_side();
    let ok = |k: usize| k >= 1 && k + 1 < np;
    ok(i) && (f.grid.dim == 1 || ok(j))
}

/// `max |H ‖grad A‖ + eps d_t A : grad A|` over interior nodes with
/// `‖grad A‖ > 1e-8`, where `H ‖grad A‖ = -(eps Lap A - eps^-1 DF(A)) : grad A`
/// and `d_t A` is the forward difference to the lead field.
pub fn curvature_identity_defect(snap: &Snapshot, eps: f64) -> Result<f64, DiagnosticsError> {
    let lead = snap.lead.as_ref().ok_or(DiagnosticsError::MissingLead)?;
    let f = &snap.field;
    if snap.lead_dt <= 0.0 {
        return Err(DiagnosticsError::MissingLead);
    }
    let lap = discrete_laplacian(f);
    let dim = f.grid.dim;
    let np = f.grid.nodes_per_side();
    let rows: Vec<f64> = (0..f.grid.rows())
        .into_par_iter()
        .map(|j| {
            let mut worst = 0.0f64;
            for i in 0..np {
                if !interior(f, i, j) {
                    continue;
                }
                let k = f.grid.index(i, j);
                let a = f.at(k);
                let grads: Vec<Mat> = (0..dim).map(|ax| node_derivative(f, i, j, ax)).collect();
                let norm = grads.iter().map(|g| g.frob_norm_sq()).sum::<f64>().sqrt();
                if norm <= 1e-8 {
                    continue;
                }
                let force = lap.at(k) * eps - potential_grad(&a) * (1.0 / eps);
                let dt_a = (lead.at(k) - a) * (1.0 / snap.lead_dt);
                let h_vec: Vec<f64> = grads.iter().map(|g| -force.dot(g) / norm).collect();
                let sq: f64 = grads.iter().zip(&h_vec).map(|(g, hv)| (hv * norm + eps * dt_a.dot(g)).powi(2)).sum();
                worst = worst.max(sq.sqrt());
            }
            worst
        })
        .collect();
    Ok(rows.into_iter().fold(0.0, f64::max))
}

/// `Phi(t, x) = b((t - T/2) / (T/2)) b(|x - x0| / r) E` with `b` the plateau
/// bump and `E` antisymmetric, compactly supported in `(0, T) x Omega`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    pub label: String,
    pub center: [f64; 2],
    pub radius: f64,
    pub t_final: f64,
    pub matrix: Mat,
}

impl TestFunction {
    pub fn time_factor(&self, t: f64) -> f64 {
        let half = 0.5 * self.t_final;
        if half <= 0.0 {
            return 0.0;
        }
        plateau((t - half) / half)
    }

    pub fn space_factor(&self, x: &[f64; 2]) -> f64 {
        plateau(self.dist(x) / self.radius)
    }

    fn dist(&self, x: &[f64; 2]) -> f64 {
        ((x[0] - self.center[0]).powi(2) + (x[1] - self.center[1]).powi(2)).sqrt()
    }

    pub fn space_gradient(&self, x: &[f64; 2]) -> [f64; 2] {
        let r = self.dist(x);
        if r == 0.0 {
            return [0.0; 2];
        }
        let s = plateau_deriv(r / self.radius) / (self.radius * r);
        [s * (x[0] - self.center[0]), s * (x[1] - self.center[1])]
    }

    /// Inside the positive phase, inside the negative phase, and straddling
    /// the interface, all with `E = e_1 e_2^T - e_2 e_1^T`. In 1D the second
    /// coordinate is ignored.
    pub fn library(g: &SphereInterface, n: usize, t_final: f64) -> Vec<TestFunction> {
        let e = Mat::elementary_antisymmetric(n, 0, 1);
        let make = |label: &str, center: [f64; 2], radius: f64| TestFunction {
            label: label.to_string(),
            center,
            radius,
            t_final,
            matrix: e,
        };
        if g.flat {
            return vec![
                make("plus", [0.5, 0.0], 0.3),
                make("minus", [-0.5, 0.0], 0.3),
                make("straddle", [0.0, 0.0], 0.3),
            ];
        }
        // Off the axes of the configuration, so reflection symmetry cannot
        // cancel the flux terms. The two outer bumps are wide enough that
        // their transition band spans about 10 cells at h = 1/64.
        let c = g.center;
        let r = g.r0;
        let r_end = g.radius_at(t_final).unwrap_or(r);
        let at = |dist: f64, angle: f64| [c[0] + dist * angle.cos(), c[1] + dist * angle.sin()];
        vec![
            make("plus", at(0.3 * r_end, 0.7), 0.5 * r_end),
            make("minus", at(r + 0.35, 2.2), 0.3),
            make("straddle", at(0.5 * (r + r_end), -1.0), 0.35),
        ]
    }
}

/// Spatial part of `1/2 [d_t A, A] : Phi + 1/2 sum_i [d_i A, A] : d_i Phi` at
/// one snapshot, without the time factor. The first term uses nodal
/// quadrature; the second uses edge midpoints, where
/// `[(A_j - A_i)/h, (A_i + A_j)/2] = [A_j, A_i]/h`.
pub fn weak_integrand(snap: &Snapshot, phi: &TestFunction) -> Result<f64, DiagnosticsError> {
    let lead = snap.lead.as_ref().ok_or(DiagnosticsError::MissingLead)?;
    let f = &snap.field;
    let grid = f.grid;
    let np = grid.nodes_per_side();
    let h = grid.h();
    let e = &phi.matrix;
    if e.n() != f.n {
        return Err(DiagnosticsError::Grid(format!("test matrix is {}x{}, field is {}x{}", e.n(), e.n(), f.n, f.n)));
    }
    let inv_dt = 1.0 / snap.lead_dt;
    let rows: Vec<Result<f64, DiagnosticsError>> = (0..grid.rows())
        .into_par_iter()
        .map(|j| {
            let mut terms = Vec::with_capacity(3 * np);
            for i in 0..np {
                let x = grid.coord(i, j);
                let k = grid.index(i, j);
                let a = f.at(k);
                let b = phi.space_factor(&x);
                if b != 0.0 {
                    let dt_a = (lead.at(k) - a) * inv_dt;
                    terms.push(0.5 * b * commutator(&dt_a, &a)?.dot(e));
                }
                let mut edge = |nb: usize, axis: usize| -> Result<(), DiagnosticsError> {
                    let mut mid = x;
                    mid[axis] += 0.5 * h;
                    let gphi = phi.space_gradient(&mid)[axis];
                    if gphi != 0.0 {
                        terms.push(0.5 * gphi * commutator(&f.at(nb), &a)?.dot(e) / h);
                    }
                    Ok(())
                };
                if i + 1 < np {
                    edge(grid.index(i + 1, j), 0)?;
                }
                if grid.dim == 2 && j + 1 < np {
                    edge(grid.index(i, j + 1), 1)?;
                }
            }
            Ok(pairwise_sum(&terms))
        })
        .collect();
    let sums = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(pairwise_sum(&sums) * grid.cell_volume())
}

/// Running trapezoid rule in time of the weak residual for each test function.
#[derive(Clone, Debug)]
pub struct WeakResidualAccumulator {
    pub functions: Vec<TestFunction>,
    last: Option<(f64, Vec<f64>)>,
    integral: Vec<f64>,
}

impl WeakResidualAccumulator {
    pub fn new(functions: Vec<TestFunction>) -> Self {
        let k = functions.len();
        WeakResidualAccumulator { functions, last: None, integral: vec![0.0; k] }
    }

    /// Adds a snapshot and returns the absolute accumulated residuals.
    pub fn push(&mut self, snap: &Snapshot) -> Result<Vec<f64>, DiagnosticsError> {
        let t = snap.field.t;
        let mut now = Vec::with_capacity(self.functions.len());
        for phi in &self.functions {
            let bt = phi.time_factor(t);
            now.push(if bt == 0.0 { 0.0 } else { bt * weak_integrand(snap, phi)? });
        }
        if let Some((t0, prev)) = &self.last {
            for (acc, (a, b)) in self.integral.iter_mut().zip(prev.iter().zip(&now)) {
                *acc += 0.5 * (t - t0) * (a + b);
            }
        }
        self.last = Some((t, now));
        Ok(self.residuals())
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.integral.iter().map(|v| v.abs()).collect()
    }
}
