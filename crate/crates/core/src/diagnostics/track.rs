//! Interface extraction from the distance field, Hausdorff distance to the
//! reference interface, and the minimal-pair defect across it.

use crate::interface::SphereInterface;
use crate::matgeo::{nearest_orthogonal, surface_tension_closed_form, Component, Mat, MatError};
use crate::solver::{Boundary, Field, GridSpec};

use super::DiagnosticsError;

/// Crossings of `psi = c / 2` along grid edges, linearly interpolated.
/// Edges that wrap around a periodic grid are skipped.
pub fn extract_interface(grid: &GridSpec, psi: &[f64]) -> Vec<[f64; 2]> {
    let level = 0.5 * surface_tension_closed_form();
    let np = grid.nodes_per_side();
    let h = grid.h();
    let mut pts = Vec::new();
    let mut edge = |a: usize, b: usize, xa: [f64; 2], axis: usize| {
        let (fa, fb) = (psi[a] - level, psi[b] - level);
        let crosses = (fa < 0.0 && fb >= 0.0) || (fa >= 0.0 && fb < 0.0);
        if crosses {
            let mut p = xa;
            p[axis] += h * fa / (fa - fb);
            pts.push(p);
        }
    };
    for j in 0..grid.rows() {
        for i in 0..np {
            let here = grid.index(i, j);
            let x = grid.coord(i, j);
            if i + 1 < np {
                edge(here, grid.index(i + 1, j), x, 0);
            }
            if grid.dim == 2 && j + 1 < np {
                edge(here, grid.index(i, j + 1), x, 1);
            }
        }
    }
    pts
}

/// Symmetric Hausdorff distance between `pts` and the reference interface,
/// the latter represented by `samples` points.
pub fn hausdorff(
    pts: &[[f64; 2]],
    g: &SphereInterface,
    t: f64,
    half: f64,
    samples: usize,
) -> Result<f64, DiagnosticsError> {
    if pts.is_empty() {
        return Err(DiagnosticsError::EmptyInterface);
    }
    let mut forward = 0.0f64;
    for p in pts {
        forward = forward.max(g.signed_distance(p, t)?.abs());
    }
    let mut backward = 0.0f64;
    for q in g.sample_points(t, samples, half)? {
        let near =
            pts.iter().map(|p| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()).fold(f64::INFINITY, f64::min);
        backward = backward.max(near);
    }
    Ok(forward.max(backward))
}

/// Bilinear (linear in 1D) interpolation of the node values.
pub fn sample_bilinear(f: &Field, x: &[f64; 2]) -> Mat {
    let grid = &f.grid;
    let np = grid.nodes_per_side();
    let h = grid.h();
    let locate = |c: f64| -> (usize, usize, f64) {
        let u = (c + grid.half_side()) / h;
        match grid.boundary {
            Boundary::Dirichlet => {
                let i = (u.floor().max(0.0) as usize).min(np - 2);
                (i, i + 1, (u - i as f64).clamp(0.0, 1.0))
            }
            Boundary::Periodic => {
                let w = u.rem_euclid(np as f64);
                let i = (w.floor() as usize).min(np - 1);
                (i, (i + 1) % np, w - i as f64)
            }
        }
    };
    let (i0, i1, fx) = locate(x[0]);
    if grid.dim == 1 {
        return f.at_ij(i0, 0) * (1.0 - fx) + f.at_ij(i1, 0) * fx;
    }
    let (j0, j1, fy) = locate(x[1]);
    (f.at_ij(i0, j0) * (1.0 - fx) + f.at_ij(i1, j0) * fx) * (1.0 - fy)
        + (f.at_ij(i0, j1) * (1.0 - fx) + f.at_ij(i1, j1) * fx) * fy
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MinimalPairDefect {
    /// `max |‖P+ - P-‖ - 2|` over the probed interface points.
    pub defect: f64,
    pub probed: usize,
    /// Probe points skipped because a projection was degenerate.
    pub skipped: usize,
}

/// Probes `A` at `p ± delta nu` for `samples` points `p` of the reference
/// interface, projects the inner value onto `O(n)^+` and the outer one onto
/// `O(n)^-`, and measures how far the pair is from being minimal.
///
/// Requires `delta > 2h`, both probes inside the domain and, for spheres,
/// `delta < 2R(t)` so the inner probe stays in the positive phase.
pub fn minimal_pair_defect(
    f: &Field,
    g: &SphereInterface,
    t: f64,
    delta: f64,
    samples: usize,
) -> Result<MinimalPairDefect, DiagnosticsError> {
    let grid = &f.grid;
    if !(delta > 2.0 * grid.h()) {
        return Err(DiagnosticsError::Probe(format!("probe distance {delta} must exceed 2h = {}", 2.0 * grid.h())));
    }
    if !g.flat && g.dim == 2 && delta >= 2.0 * g.radius_at(t)? {
        return Err(DiagnosticsError::Probe(format!("probe distance {delta} crosses the centre")));
    }
    let half = grid.half_side();
    let mut out = MinimalPairDefect::default();
    for p in g.sample_points(t, samples, half)? {
        let nu = g.normal(&p);
        let inner = [p[0] + delta * nu[0], p[1] + delta * nu[1]];
        let outer = [p[0] - delta * nu[0], p[1] - delta * nu[1]];
        let inside = |x: &[f64; 2]| x[..grid.dim].iter().all(|c| c.abs() <= half);
        if (!inside(&inner) || !inside(&outer)) && grid.boundary == Boundary::Dirichlet {
            return Err(DiagnosticsError::Probe(format!("probe at {p:?} leaves the domain")));
        }
        let plus = nearest_orthogonal(&sample_bilinear(f, &inner), Component::Plus);
        let minus = nearest_orthogonal(&sample_bilinear(f, &outer), Component::Minus);
        match (plus, minus) {
            (Ok(a), Ok(b)) => {
                out.defect = out.defect.max(((a - b).frob_norm() - 2.0).abs());
                out.probed += 1;
            }
            (Err(MatError::DegenerateProjection { .. }), _) | (_, Err(MatError::DegenerateProjection { .. })) => {
                out.skipped += 1;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        }
    }
    Ok(out)
}
