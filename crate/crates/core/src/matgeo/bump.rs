use std::sync::OnceLock;

use crate::quad::tanh_sinh;

/// Normalisation and moments of the unit-mass bump `theta`.
#[derive(Clone, Copy, Debug)]
pub struct BumpMoments {
    /// `1 / int exp(-1/(1-x^2)) dx`.
    pub norm: f64,
    /// `int |x| theta(x) dx`.
    pub m1: f64,
    /// `int x^2 theta(x) dx`.
    pub m2: f64,
}

fn raw(x: f64) -> f64 {
    let r = 1.0 - x * x;
    if r <= 0.0 {
        0.0
    } else {
        (-1.0 / r).exp()
    }
}

pub fn bump_moments() -> &'static BumpMoments {
    static MOMENTS: OnceLock<BumpMoments> = OnceLock::new();
    MOMENTS.get_or_init(|| {
        let tol = 1e-15;
        let mass = 2.0 * tanh_sinh(raw, 0.0, 1.0, tol);
        let m1 = 2.0 * tanh_sinh(|x| x * raw(x), 0.0, 1.0, tol) / mass;
        let m2 = 2.0 * tanh_sinh(|x| x * x * raw(x), 0.0, 1.0, tol) / mass;
        BumpMoments { norm: 1.0 / mass, m1, m2 }
    })
}

/// Even, smooth, unit-mass bump supported on `[-1, 1]`.
pub fn bump_theta(x: f64) -> f64 {
    bump_moments().norm * raw(x)
}

const CHEB_DEGREE: usize = 48;

/// Chebyshev coefficients on `[0, 1]` of `G(u) = int |u - y|^3 theta(y) dy`
/// and of `G'(u) = 3 int (u - y)|u - y| theta(y) dy`.
fn abs_cubic_tables() -> &'static ([f64; CHEB_DEGREE], [f64; CHEB_DEGREE]) {
    static TABLES: OnceLock<([f64; CHEB_DEGREE], [f64; CHEB_DEGREE])> = OnceLock::new();
    TABLES.get_or_init(|| {
        let m = CHEB_DEGREE;
        let mut g = [0.0; CHEB_DEGREE];
        let mut dg = [0.0; CHEB_DEGREE];
        let nodes: Vec<f64> = (0..m).map(|k| (std::f64::consts::PI * (k as f64 + 0.5) / m as f64).cos()).collect();
        let vals: Vec<(f64, f64)> = nodes
            .iter()
            .map(|&x| {
                let u = 0.5 * (x + 1.0);
                let left = |y: f64| (u - y).powi(3) * bump_theta(y);
                let right = |y: f64| (y - u).powi(3) * bump_theta(y);
                let lsq = |y: f64| (u - y).powi(2) * bump_theta(y);
                let gv = tanh_sinh(left, -1.0, u, 1e-15) + tanh_sinh(right, u, 1.0, 1e-15);
                let dv = 3.0
                    * (tanh_sinh(lsq, -1.0, u, 1e-15) - tanh_sinh(|y| (y - u).powi(2) * bump_theta(y), u, 1.0, 1e-15));
                (gv, dv)
            })
            .collect();
        for j in 0..m {
            let mut a = 0.0;
            let mut b = 0.0;
            for (k, (gv, dv)) in vals.iter().enumerate() {
                let c = (std::f64::consts::PI * j as f64 * (k as f64 + 0.5) / m as f64).cos();
                a += gv * c;
                b += dv * c;
            }
            let scale = if j == 0 { 1.0 } else { 2.0 } / m as f64;
            g[j] = a * scale;
            dg[j] = b * scale;
        }
        (g, dg)
    })
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + x * b1 - b2
}

/// `(G(u), G'(u))` for `u` in `[0, 1]`, see [`abs_cubic_tables`].
pub fn abs_cubic_moment(u: f64) -> (f64, f64) {
    debug_assert!((0.0..=1.0).contains(&u));
    let (g, dg) = abs_cubic_tables();
    let x = 2.0 * u - 1.0;
    (clenshaw(g, x), clenshaw(dg, x))
}
