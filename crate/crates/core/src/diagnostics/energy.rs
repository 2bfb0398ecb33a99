//! Cell-based quadrature of the modulated energy and the quantities that
//! share its integrand: coercivity terms and the projection identities.

use rayon::prelude::*;

use crate::interface::{InterfaceError, SphereInterface};
use crate::matgeo::{
    potential_f, quasi_distance_grad_flagged, quasi_distance_smoothed, Mat, MatError, QuasiDistParams,
};
use crate::quad::pairwise_sum;
use crate::solver::{Boundary, Field};

use super::DiagnosticsError;

/// `psi = d_w(A)` at every node.
pub fn psi_field(f: &Field, p: &QuasiDistParams) -> Result<Vec<f64>, MatError> {
    let n = f.n;
    f.data.par_chunks(f.stride()).map(|c| quasi_distance_smoothed(&Mat::from_row_major(n, c), p)).collect()
}

/// Integrated terms of the modulated energy and its companions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyTerms {
    /// `int eps/2 |grad A|^2`.
    pub dirichlet: f64,
    /// `int eps^-1 (F(A) + eps^(K-1))`.
    pub potential: f64,
    /// `int xi . grad psi`, with `grad psi` differenced from the node values.
    pub coupling: f64,
    /// `int (eps/2 |grad A|^2 + eps^-1 F_eps + |grad psi|) min(d^2, 1)`.
    pub coercivity_lhs1: f64,
    /// `eps int |grad A - Pi grad A|^2`.
    pub coercivity_lhs2: f64,
    /// Max over cells and directions of `| |Pi dA| |D| - |D : dA| |`.
    pub orth_norm_defect: f64,
    /// Max over cells and directions of `|(dA - Pi dA) : Pi dA|`.
    pub orth_split_defect: f64,
    /// Max over cells of `|grad A|^2`.
    pub max_grad_sq: f64,
    /// Cells whose distance gradient hit the degenerate fallback.
    pub degeneracies: u64,
}

impl EnergyTerms {
    pub fn modulated_energy(&self) -> f64 {
        self.dirichlet + self.potential - self.coupling
    }

    pub fn orthogonality_defect(&self) -> f64 {
        self.orth_norm_defect.max(self.orth_split_defect)
    }
}

#[derive(Default)]
struct RowAcc {
    dirichlet: Vec<f64>,
    potential: Vec<f64>,
    coupling: Vec<f64>,
    lhs1: Vec<f64>,
    lhs2: Vec<f64>,
    orth_norm: f64,
    orth_split: f64,
    max_grad_sq: f64,
    degeneracies: u64,
}

/// Midpoint quadrature over grid cells. Each cell uses the average of its
/// corner values and cell-centred differences along each axis.
pub fn energy_terms(
    f: &Field,
    psi: &[f64],
    g: &SphereInterface,
    p: &QuasiDistParams,
) -> Result<EnergyTerms, DiagnosticsError> {
    let grid = f.grid;
    let n = f.n;
    let eps = p.eps;
    let h = grid.h();
    let np = grid.nodes_per_side();
    let dim = grid.dim;
    let floor = eps.powi(p.k as i32 - 1);
    let t = f.t;
    if grid.boundary == Boundary::Periodic && dim == 2 && np < 2 {
        return Err(DiagnosticsError::Grid("grid too small".into()));
    }

    let rows: Vec<Result<RowAcc, DiagnosticsError>> = (0..grid.cell_rows())
        .into_par_iter()
        .map(|j| {
            let mut acc = RowAcc::default();
            let j1 = if dim == 2 { (j + 1) % np } else { j };
            for i in 0..grid.cells_per_row() {
                let i1 = (i + 1) % np;
                let corner = |a: usize, b: usize| f.at(grid.index(a, b));
                let corner_psi = |a: usize, b: usize| psi[grid.index(a, b)];
                let (a_c, grads, gpsi) = if dim == 1 {
                    let (a0, a1) = (corner(i, 0), corner(i1, 0));
                    let d = (a1 - a0) * (1.0 / h);
                    ((a0 + a1) * 0.5, [d, Mat::zeros(n)], [(corner_psi(i1, 0) - corner_psi(i, 0)) / h, 0.0])
                } else {
                    let (a00, a10, a01, a11) = (corner(i, j), corner(i1, j), corner(i, j1), corner(i1, j1));
                    let dx = ((a10 - a00) + (a11 - a01)) * (0.5 / h);
                    let dy = ((a01 - a00) + (a11 - a10)) * (0.5 / h);
                    let (p00, p10, p01, p11) =
                        (corner_psi(i, j), corner_psi(i1, j), corner_psi(i, j1), corner_psi(i1, j1));
                    let gx = ((p10 - p00) + (p11 - p01)) * (0.5 / h);
                    let gy = ((p01 - p00) + (p11 - p10)) * (0.5 / h);
                    ((a00 + a10 + a01 + a11) * 0.25, [dx, dy], [gx, gy])
                };
                let mut xc = grid.coord(i, j);
                xc[0] += 0.5 * h;
                if dim == 2 {
                    xc[1] += 0.5 * h;
                }
                let xi = g.xi(&xc, t).map_err(DiagnosticsError::from)?;
                let dist = g.signed_distance(&xc, t).map_err(DiagnosticsError::from)?;

                let grad_sq: f64 = grads[..dim].iter().map(|m| m.frob_norm_sq()).sum();
                let fe = potential_f(&a_c) + floor;
                let gpsi_norm = (gpsi[0] * gpsi[0] + gpsi[1] * gpsi[1]).sqrt();
                let dir = 0.5 * eps * grad_sq;
                let pot = fe / eps;
                acc.dirichlet.push(dir);
                acc.potential.push(pot);
                acc.coupling.push(xi[0] * gpsi[0] + xi[1] * gpsi[1]);
                acc.lhs1.push((dir + pot + gpsi_norm) * (dist * dist).min(1.0));
                acc.max_grad_sq = acc.max_grad_sq.max(grad_sq);

                let gr = quasi_distance_grad_flagged(&a_c, p).map_err(DiagnosticsError::from)?;
                if gr.degenerate {
                    acc.degeneracies += 1;
                }
                let d = gr.grad;
                let dn2 = d.frob_norm_sq();
                let dn = dn2.sqrt();
                let mut off = 0.0;
                for da in &grads[..dim] {
                    let pa = if dn <= 1e-12 { Mat::zeros(n) } else { d * (da.dot(&d) / dn2) };
                    let rest = *da - pa;
                    off += rest.frob_norm_sq();
                    let chain = da.dot(&d).abs();
                    acc.orth_norm =
                        acc.orth_norm.max((pa.frob_norm() * dn - if dn <= 1e-12 { 0.0 } else { chain }).abs());
                    acc.orth_split = acc.orth_split.max(rest.dot(&pa).abs());
                }
                acc.lhs2.push(eps * off);
            }
            Ok(acc)
        })
        .collect();

    let vol = grid.cell_volume();
    let mut parts: [Vec<f64>; 5] = Default::default();
    let mut out = EnergyTerms::default();
    for r in rows {
        let r = r?;
        for (k, v) in [&r.dirichlet, &r.potential, &r.coupling, &r.lhs1, &r.lhs2].into_iter().enumerate() {
            parts[k].push(pairwise_sum(v));
        }
        out.orth_norm_defect = out.orth_norm_defect.max(r.orth_norm);
        out.orth_split_defect = out.orth_split_defect.max(r.orth_split);
        out.max_grad_sq = out.max_grad_sq.max(r.max_grad_sq);
        out.degeneracies += r.degeneracies;
    }
    out.dirichlet = vol * pairwise_sum(&parts[0]);
    out.potential = vol * pairwise_sum(&parts[1]);
    out.coupling = vol * pairwise_sum(&parts[2]);
    out.coercivity_lhs1 = vol * pairwise_sum(&parts[3]);
    out.coercivity_lhs2 = vol * pairwise_sum(&parts[4]);
    Ok(out)
}

impl From<InterfaceError> for DiagnosticsError {
    fn from(e: InterfaceError) -> Self {
        DiagnosticsError::Interface(e)
    }
}
