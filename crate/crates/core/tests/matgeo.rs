mod common;

use common::{brute_force_o2, fd_gradient, random_mat, random_rotation, rng};
use mvac::matgeo::*;
use proptest::prelude::*;
use rand::Rng;

fn mat_strategy(n: usize, amp: f64) -> impl Strategy<Value = Mat> {
    prop::collection::vec(-amp..amp, n * n).prop_map(move |e| Mat::from_row_major(n, &e))
}

fn any_mat(amp: f64) -> impl Strategy<Value = Mat> {
    prop_oneof![mat_strategy(2, amp), mat_strategy(3, amp), mat_strategy(4, amp)]
}

#[test]
fn potential_gradient_matches_finite_differences() {
    let mut r = rng(1);
    for _ in 0..200 {
        let n = r.gen_range(2..5);
        let a = random_mat(&mut r, n, 1.5);
        let fd = fd_gradient(potential_f, &a, 1e-6);
        let an = potential_grad(&a);
        let rel = (fd - an).frob_norm() / an.frob_norm().max(1e-3);
        assert!(rel <= 1e-6, "relative error {rel}");
    }
}

#[test]
fn rho_matches_brute_force_over_o2() {
    let mut r = rng(2);
    for _ in 0..200 {
        let a = random_mat(&mut r, 2, 2.0);
        for s in [1i8, -1] {
            let (bf, _) = brute_force_o2(&a, s);
            let fast = dist_to_component(&a, s).unwrap();
            assert!((bf - fast).abs() <= 1e-6, "sign {s}: {bf} vs {fast} for {a:?}");
        }
    }
}

#[test]
fn constrained_projection_is_the_brute_force_minimiser() {
    let mut r = rng(3);
    for _ in 0..100 {
        let a = random_mat(&mut r, 2, 2.0);
        for (s, c) in [(1i8, Component::Plus), (-1, Component::Minus)] {
            let (bf, t) = brute_force_o2(&a, s);
            let p = nearest_orthogonal(&a, c).unwrap();
            assert!(((a - p).frob_norm() - bf).abs() < 1e-9);
            let sep = svd(&a).unwrap();
            // Only compare the minimiser itself when it is well separated.
            if sep.sigma[0] - sep.sigma[1] > 1e-3 {
                assert!((p - common::o2(t, s)).frob_norm() < 1e-5);
            }
            assert!((p.det() - s as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn smoothed_distance_near_minus_component_is_small() {
    let mut r = rng(4);
    for eps in [0.3, 0.1, 0.04] {
        let p = QuasiDistParams::new(eps, 5).unwrap();
        let bound = p.smoothing_error_bound();
        // The profile at zero, from an independent quadrature of q * theta.
        let q = |x: f64| {
            let t = (x * p.smoothing_width).abs();
            (t * t - t * t * t / 3.0) / std::f64::consts::SQRT_2
        };
        let q0 = mvac::quad::adaptive_simpson(&|x: f64| q(x) * bump_theta(x), -1.0, 1.0, 1e-22);
        for _ in 0..20 {
            let b = random_rotation(&mut r, 3) * Mat::diag(&[1.0, 1.0, -1.0]);
            let v = quasi_distance_smoothed(&b, &p).unwrap();
            assert!(v >= 0.0 && v <= bound, "{v} vs bound {bound}");
            assert!((v - q0).abs() <= 1e-12 * (1.0 + q0) + 1e-18, "{v} vs {q0}");
        }
    }
}

#[test]
fn reflections_swap_the_components() {
    // Invariance holds for rotations; a reflection maps d to c - d.
    let mut r = rng(5);
    let refl = Mat::diag(&[-1.0, 1.0, 1.0]);
    for _ in 0..100 {
        let a = random_mat(&mut r, 3, 1.2);
        let d = quasi_distance(&a).unwrap();
        let dr = quasi_distance(&(refl * a)).unwrap();
        assert!((d + dr - C_F).abs() < 1e-12);
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let mut r = rng(6);
    let mut checked = 0;
    for eps in [0.2, 0.08] {
        let p = QuasiDistParams::new(eps, 5).unwrap();
        while checked < 300 {
            let n = r.gen_range(2..4);
            let a = random_mat(&mut r, n, 1.5);
            let rho = dist_to_components(&a).unwrap();
            let s = rho.svd.sigma();
            // Keep away from the kinks: branch switch, det = 0, rho = 1, repeated values.
            if (rho.plus - rho.minus).abs() < 0.05
                || s[n - 1] < 0.05
                || (rho.min() - 1.0).abs() < 0.05
                || rho.min() > 1.0
                || s.windows(2).any(|w| w[0] - w[1] < 0.05)
            {
                continue;
            }
            let fd = fd_gradient(|m| quasi_distance_smoothed(m, &p).unwrap(), &a, 1e-6);
            let g = quasi_distance_grad(&a, &p).unwrap();
            let rel = (fd - g).frob_norm() / g.frob_norm().max(1e-8);
            assert!(rel <= 1e-5, "relative error {rel} at {a:?}");
            checked += 1;
        }
        checked = 0;
    }
}

#[test]
fn projection_examples() {
    let p = QuasiDistParams::new(0.1, 5).unwrap();
    let a = Mat::diag(&[0.4, 1.0]);
    let d = quasi_distance_grad(&a, &p).unwrap();
    assert!(d.frob_norm() > 0.1);
    let g = d * 2.5;
    assert!((project_pi(&a, &g, &p).unwrap() - g).frob_norm() < 1e-14);
    // g orthogonal to D.
    let g = Mat::from_rows([[0.0, 1.0], [0.0, 0.0]]);
    assert!(g.dot(&d).abs() < 1e-15);
    assert_eq!(project_pi(&a, &g, &p).unwrap(), Mat::zeros(2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn frob_norm_is_sqrt_of_self_dot(a in any_mat(3.0)) {
        prop_assert!((a.frob_norm().powi(2) - a.dot(&a)).abs() <= 1e-12 * (1.0 + a.dot(&a)));
    }

    #[test]
    fn commutator_is_antisymmetric(a in mat_strategy(3, 2.0), b in mat_strategy(3, 2.0)) {
        let c = commutator(&a, &b).unwrap();
        let d = commutator(&b, &a).unwrap();
        prop_assert!((c + d).frob_norm() < 1e-13);
        prop_assert!((c + c.transpose()).frob_norm() < 1e-13);
    }

    #[test]
    fn svd_invariants(a in any_mat(2.0)) {
        let s = svd(&a).unwrap();
        let n = a.n() as f64;
        prop_assert!(s.u.orthogonality_defect() <= 1e-12 * n);
        prop_assert!(s.v.orthogonality_defect() <= 1e-12 * n);
        prop_assert!((s.reconstruct() - a).frob_norm() <= 1e-10 * (1.0 + a.frob_norm()));
        prop_assert!(s.sigma().windows(2).all(|w| w[0] >= w[1]));
        let det = a.det();
        if s.det_sign != 0 {
            prop_assert_eq!(det.signum() as i8, s.det_sign);
        }
    }

    #[test]
    fn lemma_profile_inequalities(a in prop_oneof![mat_strategy(2, 2.0), mat_strategy(3, 2.0)]) {
        let f = potential_f(&a);
        let rho = dist_to_components(&a).unwrap().min();
        prop_assert!(f >= 0.25 * (2.0 - rho).powi(2) * rho * rho - 1e-10);
        prop_assert!(quasi_potential(&a).unwrap() <= f + 1e-10);
    }

    #[test]
    fn quasi_distance_is_lipschitz(a in mat_strategy(3, 1.5), b in mat_strategy(3, 1.5)) {
        let da = quasi_distance(&a).unwrap();
        let db = quasi_distance(&b).unwrap();
        prop_assert!((da - db).abs() <= (std::f64::consts::FRAC_1_SQRT_2 + 1e-9) * (a - b).frob_norm());
    }

    #[test]
    fn smoothing_error_is_bounded(a in any_mat(2.0), eps in 0.02f64..0.5) {
        let p = QuasiDistParams::new(eps, 5).unwrap();
        let d = quasi_distance(&a).unwrap();
        let ds = quasi_distance_smoothed(&a, &p).unwrap();
        prop_assert!((d - ds).abs() <= p.smoothing_error_bound() + 1e-15);
    }

    #[test]
    fn gradient_commutes_with_argument(a in any_mat(2.0), eps in 0.02f64..0.3) {
        let p = QuasiDistParams::new(eps, 5).unwrap();
        let d = quasi_distance_grad(&a, &p).unwrap();
        let c = commutator(&d, &a).unwrap();
        prop_assert!(c.frob_norm() <= 1e-8 * (1.0 + a.frob_norm_sq()));
    }

    #[test]
    fn differential_inequality(a in prop_oneof![mat_strategy(2, 1.7), mat_strategy(3, 1.7)], eps in 0.01f64..0.1) {
        prop_assume!(a.frob_norm() <= 3.0);
        let p = QuasiDistParams::new(eps, 5).unwrap();
        let d = quasi_distance_grad(&a, &p).unwrap();
        prop_assert!(d.frob_norm() <= (2.0 * potential_f(&a) + eps.powi(4)).sqrt() + 1e-9);
    }

    #[test]
    fn rotation_invariance(a in mat_strategy(3, 1.5), seed in any::<u64>(), eps in 0.05f64..0.4) {
        let mut r = rng(seed);
        let u = random_rotation(&mut r, 3);
        let v = random_rotation(&mut r, 3);
        let p = QuasiDistParams::new(eps, 5).unwrap();
        let d = quasi_distance_smoothed(&a, &p).unwrap();
        let dr = quasi_distance_smoothed(&(u * a * v.transpose()), &p).unwrap();
        prop_assert!((d - dr).abs() <= 1e-10);
    }

    #[test]
    fn projection_properties(a in mat_strategy(3, 1.5), g in mat_strategy(3, 2.0), eps in 0.05f64..0.3) {
        let p = QuasiDistParams::new(eps, 5).unwrap();
        let pg = project_pi(&a, &g, &p).unwrap();
        prop_assert!((g - pg).dot(&pg).abs() <= 1e-12 * (1.0 + g.frob_norm_sq()));
        prop_assert!(pg.frob_norm() <= g.frob_norm() + 1e-14);
        let ppg = project_pi(&a, &pg, &p).unwrap();
        prop_assert!((ppg - pg).frob_norm() <= 1e-13 * (1.0 + pg.frob_norm()));
    }
}
