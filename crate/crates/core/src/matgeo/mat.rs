use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::MatError;

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 4;

/// Dense `n x n` real matrix, `2 <= n <= 4`, stored row-major in a fixed buffer.
///
/// Arithmetic operators assert matching dimensions; the fallible entry points
/// (`commutator`, `try_add`) report a [`MatError::DimensionMismatch`] instead.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat {
    n: usize,
    e: [f64; MAX_DIM * MAX_DIM],
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        assert!((2..=MAX_DIM).contains(&n), "matrix dimension {n} outside 2..=4");
        Mat { n, e: [0.0; MAX_DIM * MAX_DIM] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.e[i * n + i] = 1.0;
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.e[i * d.len() + i] = v;
        }
        m
    }

    /// Builds a matrix from `n*n` row-major entries.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), n * n, "expected {} entries", n * n);
        let mut m = Self::zeros(n);
        m.e[..n * n].copy_from_slice(entries);
        m
    }

    pub fn from_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros(N);
        for (i, row) in rows.iter().enumerate() {
            m.e[i * N..(i + 1) * N].copy_from_slice(row);
        }
        m
    }

    /// Outer product `a b^T`.
    pub fn outer(a: &[f64], b: &[f64]) -> Self {
        assert_eq!(a.len(), b.len());
        let n = a.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.e[i * n + j] = a[i] * b[j];
            }
        }
        m
    }

    /// Elementary antisymmetric matrix `e_i e_j^T - e_j e_i^T`.
    pub fn elementary_antisymmetric(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.e[i * n + j] = 1.0;
        m.e[j * n + i] = -1.0;
        m
    }

    /// Rotation by `angle` in the coordinate plane `(0, 1)`.
    pub fn plane_rotation(n: usize, angle: f64) -> Self {
        let mut m = Self::identity(n);
        let (s, c) = angle.sin_cos();
        m.e[0] = c;
        m.e[1] = -s;
        m.e[n] = s;
        m.e[n + 1] = c;
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.e[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.e[i * self.n + j] = v;
    }

    /// Row-major entries, `n*n` long.
    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.e[..self.n * self.n]
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        let len = self.n * self.n;
        &mut self.e[..len]
    }

    pub fn column(&self, j: usize) -> [f64; MAX_DIM] {
        let mut c = [0.0; MAX_DIM];
        for (i, ci) in c.iter_mut().enumerate().take(self.n) {
            *ci = self.get(i, j);
        }
        c
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.e[j * n + i] = self.e[i * n + j];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Mat) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matmul");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.e[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.e[i * n + j] += a * rhs.e[k * n + j];
                }
            }
        }
        out
    }

    /// `self * rhs^T` without forming the transpose.
    pub fn mul_transpose(&self, rhs: &Mat) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch in mul_transpose");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += self.e[i * n + k] * rhs.e[j * n + k];
                }
                out.e[i * n + j] = acc;
            }
        }
        out
    }

    /// Frobenius inner product `A : B`.
    pub fn dot(&self, rhs: &Mat) -> f64 {
        assert_eq!(self.n, rhs.n, "dimension mismatch in dot");
        self.as_slice().iter().zip(rhs.as_slice()).map(|(a, b)| a * b).sum()
    }

    pub fn frob_norm_sq(&self) -> f64 {
        self.as_slice().iter().map(|a| a * a).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.frob_norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|a| a.is_finite())
    }

    pub fn try_add(&self, rhs: &Mat) -> Result<Mat, MatError> {
        check_dims(self, rhs)?;
        Ok(*self + *rhs)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.e;
        let mut det = 1.0;
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if a[r * n + col].abs() > a[piv * n + col].abs() {
                    piv = r;
                }
            }
            let p = a[piv * n + col];
            if p == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                for j in col..n {
                    a[r * n + j] -= f * a[col * n + j];
                }
            }
        }
        det
    }

    /// `||A A^T - I||`, the orthogonality defect.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.mul_transpose(self) - Mat::identity(self.n)).frob_norm()
    }
}

pub(crate) fn check_dims(a: &Mat, b: &Mat) -> Result<(), MatError> {
    if a.n != b.n {
        return Err(MatError::DimensionMismatch { left: a.n, right: b.n });
    }
    Ok(())
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}[", self.n)?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6e}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl Add for Mat {
    type Output = Mat;
    fn add(mut self, rhs: Mat) -> Mat {
        self += rhs;
        self
    }
}

impl AddAssign for Mat {
    fn add_assign(&mut self, rhs: Mat) {
        assert_eq!(self.n, rhs.n, "dimension mismatch in add");
        let len = self.n * self.n;
        for (a, b) in self.e[..len].iter_mut().zip(&rhs.e[..len]) {
            *a += b;
        }
    }
}

impl Sub for Mat {
    type Output = Mat;
    fn sub(mut self, rhs: Mat) -> Mat {
        self -= rhs;
        self
    }
}

impl SubAssign for Mat {
    fn sub_assign(&mut self, rhs: Mat) {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sub");
        let len = self.n * self.n;
        for (a, b) in self.e[..len].iter_mut().zip(&rhs.e[..len]) {
            *a -= b;
        }
    }
}

impl Mul<f64> for Mat {
    type Output = Mat;
    fn mul(mut self, s: f64) -> Mat {
        for a in self.as_mut_slice() {
            *a *= s;
        }
        self
    }
}

impl Mul<Mat> for f64 {
    type Output = Mat;
    fn mul(self, m: Mat) -> Mat {
        m * self
    }
}

impl Mul for Mat {
    type Output = Mat;
    fn mul(self, rhs: Mat) -> Mat {
        self.matmul(&rhs)
    }
}

impl Neg for Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self * -1.0
    }
}
