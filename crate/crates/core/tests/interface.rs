use mvac::interface::{cutoff_psi, geometric_residuals, plateau, SphereInterface};
use mvac::solver::{Boundary, GridSpec};
use proptest::prelude::*;

fn circle() -> SphereInterface {
    SphereInterface::sphere(2, [0.0, 0.0], 0.3, 0.22).unwrap()
}

fn grid(cells: usize) -> GridSpec {
    GridSpec::new(2, cells, 2.0, Boundary::Dirichlet)
}

#[test]
fn flat_interface_transport_identities_are_exact() {
    let g = SphereInterface::flat(2, 0.22).unwrap();
    let h = 2.0 / 64.0;
    let r = geometric_residuals(&g, 0.01, &grid(64)).unwrap();
    assert!(r.transport <= 1e-6 && r.length_transport <= 1e-6, "{r:?}");
    assert!(r.bound.is_finite());
    // div xi = psi'(x / dg) / dg is O(d) but not zero; compare with its node-wise maximum.
    let dg = 0.22;
    let mut worst: f64 = 0.0;
    for i in 0..=64 {
        let x = -1.0 + i as f64 * h;
        if x.abs() < 0.5 * dg {
            let s = x / dg;
            let dpsi = cutoff_psi(s) * (-2.0 * s / (1.0 - s * s).powi(2));
            worst = worst.max((dpsi / dg).abs() / (x.abs() + h));
        }
    }
    assert!((r.divergence - worst).abs() <= 0.02 * worst, "{} vs {worst}", r.divergence);
}

#[test]
fn circle_residual_ratios_do_not_grow_under_refinement() {
    let g = circle();
    for t in [0.0, 0.01, 0.02] {
        let coarse = geometric_residuals(&g, t, &grid(100)).unwrap();
        let fine = geometric_residuals(&g, t, &grid(200)).unwrap();
        assert!(fine.divergence <= 1.2 * coarse.divergence, "t {t}: {coarse:?} vs {fine:?}");
        assert!(fine.transport <= 1.2 * coarse.transport, "t {t}");
        assert!(fine.length_transport <= 1.2 * coarse.length_transport, "t {t}");
        assert!((fine.bound - coarse.bound).abs() <= 0.1 * coarse.bound, "t {t}");
    }
}

#[test]
fn divergence_residual_matches_its_closed_form() {
    // Inside the plateau, div xi + H.xi = psi'(d/dg)/dg + psi (1/R - 1/r).
    let g = circle();
    let dg = 0.22;
    let r_t = 0.3;
    let mut worst: f64 = 0.0;
    for k in 1..50 {
        let d = -0.5 * dg + dg * k as f64 / 50.0;
        let r = r_t - d;
        let s = d / dg;
        let dpsi = cutoff_psi(s) * (-2.0 * s / (1.0 - s * s).powi(2));
        worst = worst.max((dpsi / dg + cutoff_psi(s) * (1.0 / r_t - 1.0 / r)).abs() / (d.abs() + 0.01));
    }
    let r = geometric_residuals(&g, 0.0, &grid(200)).unwrap();
    assert!((r.divergence - worst).abs() <= 0.05 * worst, "{} vs {worst}", r.divergence);
}

#[test]
fn radius_obeys_the_shrinking_law() {
    let g = circle();
    let tau = 1e-6;
    for t in [0.0, 0.005, 0.015] {
        let r = g.radius_at(t + tau).unwrap();
        let dr = (g.radius_at(t + 2.0 * tau).unwrap() - g.radius_at(t).unwrap()) / (2.0 * tau);
        assert!((r * dr + 1.0).abs() <= 1e-8, "t {t}: {}", r * dr);
    }
}

#[test]
fn curvature_vector_points_inward_with_magnitude_one_over_r() {
    let g = circle();
    let h = g.extended_h(&[0.0, 0.3], 0.0).unwrap();
    assert!(h[0].abs() < 1e-15 && (h[1] + 1.0 / 0.3).abs() < 1e-12);
    assert_eq!(g.extended_h(&[0.0, 0.9], 0.0).unwrap(), [0.0, 0.0]);
    assert_eq!(SphereInterface::flat(2, 0.22).unwrap().extended_h(&[0.1, 0.2], 0.0).unwrap(), [0.0, 0.0]);
}

proptest! {
    #[test]
    fn cutoff_sandwich(s in -0.4999f64..0.4999) {
        let p = cutoff_psi(s);
        prop_assert!(1.0 - 4.0 * s * s <= p + 1e-15);
        prop_assert!(p <= 1.0 - 0.5 * s * s + 1e-15);
    }

    #[test]
    fn xi_is_a_short_cut_off_normal(x in -1.0f64..1.0, y in -1.0f64..1.0, t in 0.0f64..0.02) {
        let g = circle();
        let xi = g.xi(&[x, y], t).unwrap();
        let len = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
        let d = g.signed_distance(&[x, y], t).unwrap();
        prop_assert!(len <= 1.0 + 1e-15);
        if d.abs() >= 0.22 {
            prop_assert_eq!(xi, [0.0, 0.0]);
            prop_assert_eq!(g.extended_h(&[x, y], t).unwrap(), [0.0, 0.0]);
        } else if x * x + y * y > 1e-12 {
            prop_assert!((len - cutoff_psi(d / 0.22)).abs() <= 1e-14);
        }
    }

    #[test]
    fn plateau_is_symmetric_and_bounded(s in -2.0f64..2.0) {
        let p = plateau(s);
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert_eq!(p, plateau(-s));
    }
}
