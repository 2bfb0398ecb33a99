use rayon::prelude::*;

use super::grid::GridSpec;
use crate::matgeo::{potential_f, svd, Mat};
use crate::quad::pairwise_sum;

/// Matrix-valued grid function: node `k` owns `data[k*n*n..(k+1)*n*n]`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub grid: GridSpec,
    pub n: usize,
    pub t: f64,
    pub data: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: GridSpec, n: usize) -> Self {
        assert!((2..=4).contains(&n));
        Field { grid, n, t: 0.0, data: vec![0.0; grid.num_nodes() * n * n] }
    }

    pub fn from_fn(grid: GridSpec, n: usize, f: impl Fn(usize, usize, [f64; 2]) -> Mat + Sync) -> Self {
        let mut field = Self::zeros(grid, n);
        let ns = n * n;
        let row_len = grid.nodes_per_side() * ns;
        field.data.par_chunks_mut(row_len).enumerate().for_each(|(j, row)| {
            for i in 0..grid.nodes_per_side() {
                let m = f(i, j, grid.coord(i, j));
                assert_eq!(m.n(), n, "matrix dimension mismatch");
                row[i * ns..(i + 1) * ns].copy_from_slice(m.as_slice());
            }
        });
        field
    }

    pub fn constant(grid: GridSpec, value: Mat) -> Self {
        Self::from_fn(grid, value.n(), |_, _, _| value)
    }

    #[inline]
    pub fn stride(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn at(&self, node: usize) -> Mat {
        let s = self.stride();
        Mat::from_row_major(self.n, &self.data[node * s..(node + 1) * s])
    }

    #[inline]
    pub fn at_ij(&self, i: usize, j: usize) -> Mat {
        self.at(self.grid.index(i, j))
    }

    pub fn set(&mut self, node: usize, m: &Mat) {
        let s = self.stride();
        self.data[node * s..(node + 1) * s].copy_from_slice(m.as_slice());
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Largest Frobenius norm over nodes.
    pub fn max_norm(&self) -> f64 {
        self.data
            .par_chunks(self.stride())
            .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
            .reduce(|| 0.0, f64::max)
    }

    /// Largest singular value over all nodes.
    pub fn max_singular_value(&self) -> f64 {
        let n = self.n;
        self.data
            .par_chunks(self.stride())
            .map(|c| svd(&Mat::from_row_major(n, c)).map(|s| s.sigma[0]).unwrap_or(f64::NAN))
            .reduce(|| 0.0, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
    }

    /// `sqrt(h^d sum |A - B|^2)` over all nodes.
    pub fn l2_distance(&self, other: &Field) -> f64 {
        assert_eq!(self.data.len(), other.data.len());
        let sq: Vec<f64> = self.data.iter().zip(&other.data).map(|(a, b)| (a - b) * (a - b)).collect();
        (pairwise_sum(&sq) * self.grid.cell_volume()).sqrt()
    }

    /// Discrete Ginzburg-Landau energy whose gradient flow the scheme is:
    /// `h^d (sum over edges 1/2 |dA/h|^2 + sum over nodes eps^-2 F(A))`.
    pub fn gl_energy(&self, eps: f64) -> f64 {
        let g = self.grid;
        let h = g.h();
        let ns = self.stride();
        let np = g.nodes_per_side();
        let periodic = g.boundary == super::Boundary::Periodic;
        let inv_eps2 = 1.0 / (eps * eps);
        let inv_h2 = 1.0 / (h * h);
        let row_sums: Vec<f64> = (0..g.rows())
            .into_par_iter()
            .map(|j| {
                let mut terms = Vec::with_capacity(np);
                for i in 0..np {
                    let a = &self.data[g.index(i, j) * ns..][..ns];
                    let mut e = inv_eps2 * potential_f(&Mat::from_row_major(self.n, a));
                    let edge = |k: usize| {
                        let b = &self.data[k * ns..][..ns];
                        0.5 * inv_h2 * a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()
                    };
                    if i + 1 < np {
                        e += edge(g.index(i + 1, j));
                    } else if periodic {
                        e += edge(g.index(0, j));
                    }
                    if g.dim == 2 {
                        if j + 1 < np {
                            e += edge(g.index(i, j + 1));
                        } else if periodic {
                            e += edge(g.index(i, 0));
                        }
                    }
                    terms.push(e);
                }
                pairwise_sum(&terms)
            })
            .collect();
        pairwise_sum(&row_sums) * g.cell_volume()
    }
}
