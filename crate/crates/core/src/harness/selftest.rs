//! Invariant suite behind `mvac selftest`. Each check compares an
//! implementation against an independent computation or a proven bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::commands::diagnostics_csv;
use super::config::{RunConfig, ScenarioChoice};
use super::run::{run_experiment, Experiment};
use crate::matgeo::{
    commutator, potential_f, quasi_distance_grad, quasi_potential, surface_tension_closed_form, svd, Mat,
    QuasiDistParams, Rho,
};
use crate::profile1d::{
    equipartition_deviation, minimal_orbit, orbit_energy, uniform_grid, Curve1D, OrbitSpec, ORBIT_HALF_WIDTH,
};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &'static str, value: f64, limit: f64) -> Check {
        Check { name, value, limit, passed: value <= limit }
    }
}

pub const CSV_HEADER: &str = "check,value,limit,passed";

pub fn csv(checks: &[Check]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for c in checks {
        s.push_str(&format!("{},{:.16e},{:.16e},{}\n", c.name, c.value, c.limit, c.passed));
    }
    s
}

fn random_mat(rng: &mut ChaCha8Rng, n: usize, amp: f64) -> Mat {
    let e: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-amp..amp)).collect();
    Mat::from_row_major(n, &e)
}

/// Distance from `a` to `O(2)^sign` by a dense angle scan refined with golden sections.
fn scan_o2(a: &Mat, sign: f64) -> f64 {
    let dist = |t: f64| {
        let (s, c) = t.sin_cos();
        (*a - Mat::from_rows([[c, -sign * s], [s, sign * c]])).frob_norm()
    };
    let m = 2000;
    let step = std::f64::consts::TAU / m as f64;
    let best = (0..m).min_by(|&i, &j| dist(i as f64 * step).total_cmp(&dist(j as f64 * step))).unwrap_or(0);
    let (mut lo, mut hi) = ((best as f64 - 1.0) * step, (best as f64 + 1.0) * step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let (x1, x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if dist(x1) < dist(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    dist(0.5 * (lo + hi))
}

pub fn run_selftest(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let samples: Vec<Mat> = (0..2000).map(|i| random_mat(&mut rng, 2 + i % 2, 2.0)).collect();

    let p = QuasiDistParams::new(0.04, 5).expect("valid parameters");
    let mut comm: f64 = 0.0;
    let mut prof: f64 = f64::NEG_INFINITY;
    let mut recon: f64 = 0.0;
    for a in &samples {
        let d = quasi_distance_grad(a, &p).unwrap_or_else(|_| Mat::zeros(a.n()));
        let c = commutator(&d, a).map(|c| c.frob_norm()).unwrap_or(f64::INFINITY);
        comm = comm.max(c / (1.0 + a.frob_norm_sq()));
        let f = potential_f(a);
        if let (Ok(r), Ok(ft)) = (Rho::of(a), quasi_potential(a)) {
            let rho = r.min();
            prof = prof.max(0.25 * (2.0 - rho).powi(2) * rho * rho - f).max(ft - f);
        }
        recon = recon.max(svd(a).map(|s| (s.reconstruct() - *a).frob_norm()).unwrap_or(f64::INFINITY));
    }
    checks.push(Check::at_most("commutator_law", comm, 1e-8));
    checks.push(Check::at_most("quasi_profile_inequality", prof, 1e-10));
    checks.push(Check::at_most("svd_reconstruction", recon, 1e-12));

    let mut diff: f64 = f64::NEG_INFINITY;
    for eps in [0.08, 0.04, 0.02] {
        let p = QuasiDistParams::new(eps, 5).expect("valid parameters");
        for _ in 0..1000 {
            let mut a = random_mat(&mut rng, 3, 2.0);
            if a.frob_norm() > 3.0 {
                a = a * (3.0 / a.frob_norm());
            }
            if let Ok(d) = quasi_distance_grad(&a, &p) {
                diff = diff.max(d.frob_norm() - (2.0 * potential_f(&a) + eps.powi(4)).sqrt());
            }
        }
    }
    checks.push(Check::at_most("differential_inequality", diff, 1e-9));

    let mut oracle: f64 = 0.0;
    for _ in 0..200 {
        let a = random_mat(&mut rng, 2, 2.0);
        if let Ok(r) = Rho::of(&a) {
            oracle = oracle.max((r.plus - scan_o2(&a, 1.0)).abs()).max((r.minus - scan_o2(&a, -1.0)).abs());
        }
    }
    checks.push(Check::at_most("rho_brute_force", oracle, 1e-6));

    let ct = surface_tension_closed_form();
    checks.push(Check::at_most("surface_tension", (ct - 2.0 * 2f64.sqrt() / 3.0).abs(), 1e-9));
    let spec = OrbitSpec::standard(3);
    let z = ORBIT_HALF_WIDTH;
    let curve = Curve1D::sample(|x| minimal_orbit(&spec, x), -z, z, 40_001).expect("uniform grid");
    checks.push(Check::at_most("orbit_energy", (orbit_energy(&curve) - ct).abs(), 1e-6));
    checks.push(Check::at_most("equipartition", equipartition_deviation(&spec, &uniform_grid(-z, z, 4001)), 1e-10));

    checks.extend(flow_checks());
    checks
}

/// A short coarse run checking the per-snapshot invariants and determinism.
fn flow_checks() -> Vec<Check> {
    let cfg = RunConfig {
        eps: 0.08,
        cells: 64,
        t_final: 0.004,
        snapshots: 4,
        scenario: ScenarioChoice::Rotating { winding: 1 },
        probe_delta: 0.2,
        ..RunConfig::default()
    };
    let run = || Experiment::new(&cfg).and_then(|e| run_experiment(&e, None));
    let (a, b) = match (run(), run()) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return vec![Check { name: "coarse_run", value: f64::NAN, limit: 0.0, passed: false }],
    };
    let mut neg: f64 = f64::NEG_INFINITY;
    let mut coerc: f64 = f64::NEG_INFINITY;
    let mut orth: f64 = 0.0;
    for r in &a.reports {
        neg = neg.max(-r.modulated_energy / (1.0 + r.terms.potential));
        coerc = coerc.max((r.terms.coercivity_lhs2 - 2.0 * r.modulated_energy) / r.scale());
        orth = orth.max(r.terms.orthogonality_defect() / (1.0 + r.terms.max_grad_sq));
    }
    let same = diagnostics_csv(&a) == diagnostics_csv(&b);
    vec![
        Check::at_most("energy_nonnegative", neg, 1e-8),
        Check::at_most("coercivity_constant_two", coerc, 1e-6),
        Check::at_most("orthogonality_identities", orth, 1e-10),
        Check { name: "determinism", value: if same { 0.0 } else { 1.0 }, limit: 0.0, passed: same },
    ]
}
