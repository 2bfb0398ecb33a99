use rayon::prelude::*;

use super::field::Field;
use super::grid::{Boundary, GridSpec};
use super::SolverError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Euler,
    Heun,
}

/// Explicit stepping parameters. The step is
/// `dt = dt_safety * min(h^2 / (2 d), eps^2 / 4)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeStepper {
    pub dt_safety: f64,
    pub scheme: Scheme,
}

impl Default for TimeStepper {
    fn default() -> Self {
        TimeStepper { dt_safety: 0.2, scheme: Scheme::Euler }
    }
}

impl TimeStepper {
    pub fn max_dt(&self, grid: &GridSpec, eps: f64) -> f64 {
        let h = grid.h();
        self.dt_safety * (h * h / (2.0 * grid.dim as f64)).min(eps * eps / 4.0)
    }
}

/// Neighbour node indices `(left, right, down, up)` of `(i, j)`, or `None`
/// for Dirichlet boundary nodes. In 1D `down`/`up` are unused.
#[inline]
fn neighbours(g: &GridSpec, i: usize, j: usize) -> Option<[usize; 4]> {
    let np = g.nodes_per_side();
    match g.boundary {
        Boundary::Dirichlet => {
            if g.is_boundary(i, j) {
                return None;
            }
            let (d, u) = if g.dim == 2 { (g.index(i, j - 1), g.index(i, j + 1)) } else { (0, 0) };
            Some([g.index(i - 1, j), g.index(i + 1, j), d, u])
        }
        Boundary::Periodic => {
            let l = if i == 0 { np - 1 } else { i - 1 };
            let r = if i + 1 == np { 0 } else { i + 1 };
            let (d, u) = if g.dim == 2 {
                let dj = if j == 0 { np - 1 } else { j - 1 };
                let uj = if j + 1 == np { 0 } else { j + 1 };
                (g.index(i, dj), g.index(i, uj))
            } else {
                (0, 0)
            };
            Some([g.index(l, j), g.index(r, j), d, u])
        }
    }
}

#[inline]
fn load<const N: usize>(s: &[f64]) -> [[f64; N]; N] {
    let mut a = [[0.0; N]; N];
    for r in 0..N {
        a[r].copy_from_slice(&s[r * N..(r + 1) * N]);
    }
    a
}

/// Writes `out = w1 b1 + w2 b2 + c (Lap src - eps^-2 (src src^T src - src))`,
/// one grid row at a time. Returns false if any written value is non-finite.
#[allow(clippy::too_many_arguments)]
fn fused_kernel<const N: usize>(
    g: &GridSpec,
    src: &[f64],
    b1: &[f64],
    w1: f64,
    b2: &[f64],
    w2: f64,
    c: f64,
    inv_eps2: f64,
    out: &mut [f64],
) -> bool {
    let ns = N * N;
    let np = g.nodes_per_side();
    let inv_h2 = 1.0 / (g.h() * g.h());
    let two_d = 2.0 * g.dim as f64;
    out.par_chunks_mut(np * ns)
        .enumerate()
        .map(|(j, row)| {
            let mut finite = true;
            for i in 0..np {
                let k = g.index(i, j);
                let o = &mut row[i * ns..(i + 1) * ns];
                let base = |e: usize| w1 * b1[k * ns + e] + w2 * b2[k * ns + e];
                let Some(nb) = neighbours(g, i, j) else {
                    for (e, v) in o.iter_mut().enumerate() {
                        *v = base(e);
                    }
                    continue;
                };
                let a = load::<N>(&src[k * ns..]);
                // a a^T
                let mut aat = [[0.0; N]; N];
                for r in 0..N {
                    for s in r..N {
                        let mut acc = 0.0;
                        for q in 0..N {
                            acc += a[r][q] * a[s][q];
                        }
                        aat[r][s] = acc;
                        aat[s][r] = acc;
                    }
                }
                for r in 0..N {
                    for s in 0..N {
                        let e = r * N + s;
                        let mut cubic = 0.0;
                        for q in 0..N {
                            cubic += aat[r][q] * a[q][s];
                        }
                        let mut lap = src[nb[0] * ns + e] + src[nb[1] * ns + e];
                        if g.dim == 2 {
                            lap += src[nb[2] * ns + e] + src[nb[3] * ns + e];
                        }
                        lap = (lap - two_d * a[r][s]) * inv_h2;
                        let v = base(e) + c * (lap - inv_eps2 * (cubic - a[r][s]));
                        finite &= v.is_finite();
                        o[e] = v;
                    }
                }
            }
            finite
        })
        .reduce(|| true, |x, y| x && y)
}

#[allow(clippy::too_many_arguments)]
fn dispatch(
    n: usize,
    g: &GridSpec,
    src: &[f64],
    b1: &[f64],
    w1: f64,
    b2: &[f64],
    w2: f64,
    c: f64,
    inv_eps2: f64,
    out: &mut [f64],
) -> bool {
    match n {
        2 => fused_kernel::<2>(g, src, b1, w1, b2, w2, c, inv_eps2, out),
        3 => fused_kernel::<3>(g, src, b1, w1, b2, w2, c, inv_eps2, out),
        4 => fused_kernel::<4>(g, src, b1, w1, b2, w2, c, inv_eps2, out),
        _ => unreachable!("matrix dimension checked at field construction"),
    }
}

/// Right-hand side `Lap A - eps^-2 (A A^T A - A)`, zero at Dirichlet nodes.
pub fn rhs(f: &Field, eps: f64) -> Field {
    let mut out = Field { t: f.t, ..Field::zeros(f.grid, f.n) };
    let zeros = vec![0.0; f.data.len()];
    dispatch(f.n, &f.grid, &f.data, &zeros, 0.0, &zeros, 0.0, 1.0, 1.0 / (eps * eps), &mut out.data);
    out
}

/// Three-point (1D) or five-point (2D) Laplacian; zero at Dirichlet nodes.
pub fn discrete_laplacian(f: &Field) -> Field {
    let mut out = Field { t: f.t, ..Field::zeros(f.grid, f.n) };
    let zeros = vec![0.0; f.data.len()];
    dispatch(f.n, &f.grid, &f.data, &zeros, 0.0, &zeros, 0.0, 1.0, 0.0, &mut out.data);
    out
}

/// Holds scratch buffers and the Dirichlet trace for repeated stepping.
pub struct Stepper {
    pub scheme: Scheme,
    pub eps: f64,
    boundary_values: Option<Vec<(usize, Vec<f64>)>>,
    next: Vec<f64>,
    stage: Vec<f64>,
    steps_taken: u64,
}

impl Stepper {
    /// `bc` supplies the Dirichlet trace; it is ignored for periodic grids.
    pub fn new(scheme: Scheme, eps: f64, bc: &Field) -> Self {
        let g = bc.grid;
        let boundary_values = (g.boundary == Boundary::Dirichlet).then(|| {
            let ns = bc.stride();
            g.node_positions()
                .filter(|&(i, j, _)| g.is_boundary(i, j))
                .map(|(i, j, _)| {
                    let k = g.index(i, j);
                    (k, bc.data[k * ns..(k + 1) * ns].to_vec())
                })
                .collect()
        });
        Stepper {
            scheme,
            eps,
            boundary_values,
            next: vec![0.0; bc.data.len()],
            stage: vec![0.0; bc.data.len()],
            steps_taken: 0,
        }
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps_taken
    }

    /// Advances `f` by one explicit step of size `dt`.
    pub fn step(&mut self, f: &mut Field, dt: f64) -> Result<(), SolverError> {
        let inv_eps2 = 1.0 / (self.eps * self.eps);
        let g = f.grid;
        let finite = match self.scheme {
            Scheme::Euler => dispatch(f.n, &g, &f.data, &f.data, 1.0, &f.data, 0.0, dt, inv_eps2, &mut self.next),
            Scheme::Heun => {
                let ok = dispatch(f.n, &g, &f.data, &f.data, 1.0, &f.data, 0.0, dt, inv_eps2, &mut self.stage);
                // A + dt/2 (k1 + k2) = (A + stage)/2 + dt/2 rhs(stage).
                ok && dispatch(f.n, &g, &self.stage, &f.data, 0.5, &self.stage, 0.5, 0.5 * dt, inv_eps2, &mut self.next)
            }
        };
        self.steps_taken += 1;
        if !finite {
            return Err(SolverError::BlowUp { step: self.steps_taken, t: f.t + dt, max_norm: f.max_norm() });
        }
        std::mem::swap(&mut f.data, &mut self.next);
        if let Some(bv) = &self.boundary_values {
            let ns = f.stride();
            for (k, v) in bv {
                f.data[k * ns..(k + 1) * ns].copy_from_slice(v);
            }
        }
        f.t += dt;
        Ok(())
    }
}
