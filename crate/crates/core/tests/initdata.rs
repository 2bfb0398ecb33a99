use mvac::initdata::{build_well_prepared, interpolation_profile, InitError, ScenarioKind, ScenarioSpec};
use mvac::interface::SphereInterface;
use mvac::matgeo::{potential_f, quasi_potential, svd, Mat};
use mvac::solver::{Boundary, Field, GridSpec};

const EPS: f64 = 0.04;
const ANGLE: f64 = 0.3;
const DELTA: f64 = 0.1;

fn circle() -> SphereInterface {
    SphereInterface::sphere(2, [0.0, 0.0], 0.3, 0.22).unwrap()
}

fn build(kind: ScenarioKind, cells: usize) -> Field {
    let grid = GridSpec::new(2, cells, 2.0, Boundary::Dirichlet);
    build_well_prepared(grid, EPS, &circle(), &ScenarioSpec::with_angle(kind, 2, ANGLE, DELTA)).unwrap()
}

fn rot(a: f64) -> Mat {
    Mat::from_rows([[a.cos(), -a.sin()], [a.sin(), a.cos()]])
}

/// Reflection `I - 2 v v^T` for the unit vector at angle `a`.
fn reflect(a: f64) -> Mat {
    Mat::from_rows([[-(2.0 * a).cos(), -(2.0 * a).sin()], [-(2.0 * a).sin(), (2.0 * a).cos()]])
}

/// Hand-written bulk maps: `(A^-, A^+, axis angle)` at `x`.
fn bulk(kind: ScenarioKind, x: [f64; 2]) -> (Mat, Mat, f64) {
    let flip = Mat::from_rows([[-1.0, 0.0], [0.0, 1.0]]);
    match kind {
        ScenarioKind::Constant => (rot(ANGLE) * flip, rot(ANGLE), 0.0),
        ScenarioKind::RotatingAxis { winding } => {
            let theta = winding as f64 * x[1].atan2(x[0]);
            (rot(ANGLE) * reflect(theta), rot(ANGLE), theta)
        }
    }
}

fn kinds() -> [ScenarioKind; 3] {
    [ScenarioKind::Constant, ScenarioKind::RotatingAxis { winding: 1 }, ScenarioKind::RotatingAxis { winding: 2 }]
}

#[test]
fn nodes_match_the_glued_formula() {
    for kind in kinds() {
        let f = build(kind, 128);
        for (i, j, x) in f.grid.node_positions() {
            let d = 0.3 - (x[0] * x[0] + x[1] * x[1]).sqrt();
            let a = f.at_ij(i, j);
            let (minus, plus, theta) = bulk(kind, x);
            if d.abs() >= DELTA {
                let expect = if d > 0.0 { plus } else { minus };
                assert!((a - expect).frob_norm() <= 1e-14, "bulk node {x:?}");
                continue;
            }
            // S is between the plain profile and the sharp indicator.
            let s = {
                let m = a.transpose() * minus;
                (1.0 - m.get(0, 0) * theta.cos().powi(2)
                    - 2.0 * m.get(0, 1) * theta.cos() * theta.sin()
                    - m.get(1, 1) * theta.sin().powi(2))
                    / 2.0
            };
            let plain = 0.5 * (1.0 + (d / (EPS * 2f64.sqrt())).tanh());
            let sharp = if d > 0.0 { 1.0 } else { 0.0 };
            assert!((s - plain) * (s - sharp) <= 1e-12, "node {x:?}: S = {s}, profile {plain}");
            let n = [theta.cos(), theta.sin()];
            let nn = Mat::from_rows([[n[0] * n[0], n[0] * n[1]], [n[0] * n[1], n[1] * n[1]]]);
            let glued = minus * (Mat::identity(2) - nn * (2.0 * s));
            assert!((glued - a).frob_norm() <= 1e-12);
            if d.abs() < DELTA / 2.0 {
                assert!((s - plain).abs() <= 1e-14);
            }
        }
    }
}

#[test]
fn the_interface_carries_the_midpoint() {
    let g = circle();
    for k in 0..12 {
        let a = k as f64 * 0.5;
        let x = [0.3 * a.cos(), 0.3 * a.sin()];
        assert!((interpolation_profile(&x, EPS, &g, DELTA).unwrap() - 0.5).abs() < 1e-12);
    }
}

#[test]
fn potential_matches_its_quasi_version_at_every_node() {
    for kind in kinds() {
        let f = build(kind, 160);
        for i in 0..f.grid.num_nodes() {
            let a = f.at(i);
            assert!((potential_f(&a) - quasi_potential(&a).unwrap()).abs() <= 1e-10);
        }
    }
}

#[test]
fn singular_values_stay_in_the_unit_ball() {
    for kind in kinds() {
        let f = build(kind, 128);
        for i in 0..f.grid.num_nodes() {
            let s = svd(&f.at(i)).unwrap();
            assert!(s.sigma[0] <= 1.0 + 1e-12);
        }
        assert!(f.max_singular_value() <= 1.0 + 1e-12);
    }
}

#[test]
fn bulk_pairs_are_minimal_and_on_the_right_components() {
    let g = circle();
    for kind in kinds() {
        let spec = ScenarioSpec::with_angle(kind, 2, ANGLE, DELTA);
        for k in 0..20 {
            let a = k as f64 * 0.33;
            for r in [0.1, 0.3, 0.7] {
                let x = [r * a.cos(), r * a.sin()];
                let (m, p) = spec.bulk_maps(&g, &x);
                let (em, ep, _) = bulk(kind, x);
                assert!((m - em).frob_norm() < 1e-14 && (p - ep).frob_norm() < 1e-14);
                assert!(((p - m).frob_norm() - 2.0).abs() < 1e-12);
                assert!((m.det() + 1.0).abs() < 1e-12 && (p.det() - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn invalid_scenarios_are_rejected() {
    let g = circle();
    let wide = ScenarioSpec::with_angle(ScenarioKind::Constant, 2, ANGLE, 0.2);
    assert!(matches!(wide.validate(&g), Err(InitError::LayerTooWide { .. })));
    let flat = SphereInterface::flat(2, 0.22).unwrap();
    let rotating = ScenarioSpec::with_angle(ScenarioKind::RotatingAxis { winding: 1 }, 2, ANGLE, DELTA);
    assert!(matches!(rotating.validate(&flat), Err(InitError::Invalid(_))));
    let mut bad = ScenarioSpec::with_angle(ScenarioKind::Constant, 2, ANGLE, DELTA);
    bad.a_minus_base = Mat::identity(2);
    assert!(matches!(bad.validate(&g), Err(InitError::Invalid(_))));
}
