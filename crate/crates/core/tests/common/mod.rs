//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use mvac::matgeo::Mat;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_mat<R: Rng>(rng: &mut R, n: usize, amp: f64) -> Mat {
    let e: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-amp..amp)).collect();
    Mat::from_row_major(n, &e)
}

/// Random rotation from a product of plane rotations in every coordinate plane.
pub fn random_rotation<R: Rng>(rng: &mut R, n: usize) -> Mat {
    let mut q = Mat::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            let a: f64 = rng.gen_range(-3.2..3.2);
            let mut g = Mat::identity(n);
            g.set(i, i, a.cos());
            g.set(j, j, a.cos());
            g.set(i, j, -a.sin());
            g.set(j, i, a.sin());
            q = q * g;
        }
    }
    q
}

/// Element of O(2)^sign at angle `theta`.
pub fn o2(theta: f64, sign: i8) -> Mat {
    let (s, c) = theta.sin_cos();
    if sign > 0 {
        Mat::from_rows([[c, -s], [s, c]])
    } else {
        Mat::from_rows([[c, s], [s, -c]])
    }
}

/// Brute-force `min over B in O(2)^sign of ||A - B||`: dense angle grid then
/// golden-section refinement around the best cell. Returns (distance, angle).
pub fn brute_force_o2(a: &Mat, sign: i8) -> (f64, f64) {
    let dist = |t: f64| (*a - o2(t, sign)).frob_norm();
    let m = 3600;
    let step = std::f64::consts::TAU / m as f64;
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for k in 0..m {
        let v = dist(k as f64 * step);
        if v < best_v {
            best_v = v;
            best = k;
        }
    }
    let (mut lo, mut hi) = ((best as f64 - 1.0) * step, (best as f64 + 1.0) * step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if dist(x1) < dist(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let t = 0.5 * (lo + hi);
    (dist(t).min(best_v), t)
}

/// Central-difference gradient of a scalar matrix function.
pub fn fd_gradient(f: impl Fn(&Mat) -> f64, a: &Mat, h: f64) -> Mat {
    let n = a.n();
    let mut g = Mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut p = *a;
            p.set(i, j, a.get(i, j) + h);
            let mut m = *a;
            m.set(i, j, a.get(i, j) - h);
            g.set(i, j, (f(&p) - f(&m)) / (2.0 * h));
        }
    }
    g
}
