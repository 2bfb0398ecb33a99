//! Scalar quadrature rules used for normalisation constants and reference integrals.

use std::f64::consts::FRAC_PI_2;

/// Tanh-sinh (double exponential) quadrature of `f` over `[a, b]`.
///
/// Halves the step until two successive levels agree to `tol` relative
/// to the running estimate. Integrands may be singular at the endpoints.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let half = 0.5 * (b - a);
    // Beyond |t| = 4 the abscissae sit within 1e-36 of the endpoints.
    let t_max = 4.0;
    let node = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (ch * ch);
        // 1 - tanh(u) computed without cancellation.
        let comp = 1.0 / (u.exp() * ch);
        let x = if t >= 0.0 { b - half * comp } else { a + half * (1.0 / ((-u).exp() * ch)) };
        if x <= a || x >= b {
            return 0.0;
        }
        w * f(x)
    };

    let mut h = 0.5;
    let mut sum = node(0.0);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > t_max {
            break;
        }
        sum += node(t) + node(-t);
        k += 1;
    }
    let mut estimate = half * h * sum;
    for _ in 0..10 {
        h *= 0.5;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > t_max {
                break;
            }
            sum += node(t) + node(-t);
            k += 2;
        }
        let next = half * h * sum;
        let done = (next - estimate).abs() <= tol * next.abs().max(1e-300);
        estimate = next;
        if done {
            break;
        }
    }
    estimate
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Sum in a fixed pairwise tree order, so results do not depend on how the
/// caller chunked the work.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
