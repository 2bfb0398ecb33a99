use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Dirichlet,
    Periodic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Dirichlet => "dirichlet",
            Boundary::Periodic => "periodic",
        })
    }
}

/// Uniform node grid on `[-L/2, L/2]^dim`.
///
/// Dirichlet grids carry `N + 1` nodes per side including both boundary
/// nodes; periodic grids carry `N`, the right end being identified with the left.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub dim: usize,
    pub cells: usize,
    pub side: f64,
    pub boundary: Boundary,
}

impl GridSpec {
    pub fn new(dim: usize, cells: usize, side: f64, boundary: Boundary) -> Self {
        assert!(dim == 1 || dim == 2, "grid dimension must be 1 or 2");
        assert!(cells >= 2 && side > 0.0);
        GridSpec { dim, cells, side, boundary }
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.side / self.cells as f64
    }

    #[inline]
    pub fn nodes_per_side(&self) -> usize {
        match self.boundary {
            Boundary::Dirichlet => self.cells + 1,
            Boundary::Periodic => self.cells,
        }
    }

    /// Rows in the second direction; 1 for one-dimensional grids.
    #[inline]
    pub fn rows(&self) -> usize {
        if self.dim == 1 {
            1
        } else {
            self.nodes_per_side()
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes_per_side() * self.rows()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nodes_per_side() + i
    }

    #[inline]
    pub fn coord1(&self, i: usize) -> f64 {
        -0.5 * self.side + i as f64 * self.h()
    }

    /// Physical position of node `(i, j)`; the second entry is 0 in 1D.
    #[inline]
    pub fn coord(&self, i: usize, j: usize) -> [f64; 2] {
        let y = if self.dim == 1 { 0.0 } else { self.coord1(j) };
        [self.coord1(i), y]
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        if self.boundary == Boundary::Periodic {
            return false;
        }
        let last = self.cells;
        i == 0 || i == last || (self.dim == 2 && (j == 0 || j == last))
    }

    /// Cells of the quadrature mesh; periodic grids wrap around.
    pub fn cells_per_row(&self) -> usize {
        self.cells
    }

    pub fn cell_rows(&self) -> usize {
        if self.dim == 1 {
            1
        } else {
            self.cells
        }
    }

    pub fn cell_volume(&self) -> f64 {
        self.h().powi(self.dim as i32)
    }

    pub fn half_side(&self) -> f64 {
        0.5 * self.side
    }

    pub fn node_positions(&self) -> impl Iterator<Item = (usize, usize, [f64; 2])> + '_ {
        (0..self.rows()).flat_map(move |j| (0..self.nodes_per_side()).map(move |i| (i, j, self.coord(i, j))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_layout() {
        let g = GridSpec::new(2, 4, 2.0, Boundary::Dirichlet);
        assert_eq!(g.nodes_per_side(), 5);
        assert_eq!(g.num_nodes(), 25);
        assert_eq!(g.coord(0, 4), [-1.0, 1.0]);
        assert!(g.is_boundary(0, 2) && g.is_boundary(2, 4) && !g.is_boundary(2, 2));
        let p = GridSpec::new(1, 8, 1.0, Boundary::Periodic);
        assert_eq!(p.num_nodes(), 8);
        assert_eq!(p.h(), 0.125);
        assert!(!p.is_boundary(0, 0));
    }
}
