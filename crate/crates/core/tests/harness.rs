use std::fs;
use std::path::Path;

use mvac::harness::{
    cmd_orbit, cmd_simulate, cmd_sweep, cmd_verify_geometry, load_config, parse_config, ConfigError, InterfaceShape,
    RunConfig, RunError, ScenarioChoice, SUMMARY_HEADER,
};
use mvac::solver::{read_field, Boundary, Scheme};

fn coarse(dir: &Path) -> RunConfig {
    RunConfig {
        eps: 0.08,
        cells: 64,
        t_final: 0.002,
        snapshots: 2,
        probe_delta: 0.2,
        scenario: ScenarioChoice::Rotating { winding: 1 },
        out_dir: dir.to_path_buf(),
        ..RunConfig::default()
    }
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path).unwrap().lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.ini");
    fs::write(
        &path,
        "# sphere with a winding axis\n\
         n = 3\neps = 0.05\n\
         [solver]\ncells = 96\nboundary = periodic\nscheme = heun\nt_final = 0.01\ntimes = 0.005, 0.01\n\
         [interface]\ncenter = 0.1, -0.1\nr0 = 0.35\n\
         [scenario]\nkind = rotating\nwinding = 2\n\
         [output]\ndir = results\ndumps = no\n",
    )
    .unwrap();
    let c = load_config(&path).unwrap();
    assert_eq!(c.n, 3);
    assert_eq!(c.eps, 0.05);
    assert_eq!(c.resolved_cells(), 96);
    assert_eq!(c.boundary, Boundary::Periodic);
    assert_eq!(c.scheme, Scheme::Heun);
    assert_eq!(c.snapshot_times(), vec![0.005, 0.01]);
    assert_eq!(c.shape, InterfaceShape::Sphere { center: [0.1, -0.1], r0: 0.35 });
    assert_eq!(c.scenario, ScenarioChoice::Rotating { winding: 2 });
    assert_eq!(c.resolved_probe_delta(), 3.0 * 0.05);
    assert!(!c.dumps);
}

#[test]
fn config_errors_name_the_problem() {
    match parse_config("eps = 0.04\n[solver]\nbogus = 1\n") {
        Err(ConfigError::Parse { line, msg }) => {
            assert_eq!(line, 3);
            assert!(msg.contains("solver.bogus"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_config("eps = -1\n"), Err(ConfigError::Invalid { .. })));
    assert!(matches!(parse_config("[nowhere]\n"), Err(ConfigError::Parse { line: 1, .. })));
    assert!(matches!(load_config(Path::new("/nonexistent/run.ini")), Err(ConfigError::Io { .. })));
    let err: RunError = parse_config("eps = zero\n").unwrap_err().into();
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn zero_horizon_simulation_reports_the_initial_state_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig { t_final: 0.0, snapshots: 0, ..coarse(dir.path()) };
    let outcome = cmd_simulate(&cfg).unwrap();
    assert_eq!(outcome.reports.len(), 1);
    assert_eq!(outcome.reports[0].t, 0.0);
    let rows = csv_rows(&dir.path().join("diagnostics.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].len(), rows[1].len());
    assert_eq!(rows[0][0], "t");
    let dump = read_field(fs::File::open(dir.path().join("fields/field_0000.bin")).unwrap()).unwrap();
    assert_eq!(dump.t, 0.0);
    assert_eq!(dump.nodes, vec![65, 65]);
    assert_eq!(dump.data.len(), 65 * 65 * 4);
}

#[test]
fn simulation_writes_one_row_and_dump_per_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = cmd_simulate(&coarse(dir.path())).unwrap();
    assert_eq!(outcome.reports.len(), 3);
    assert_eq!(csv_rows(&dir.path().join("diagnostics.csv")).len(), 4);
    assert!(csv_rows(&dir.path().join("steps.csv")).len() >= 2);
    for k in 0..3 {
        assert!(dir.path().join(format!("fields/field_{k:04}.bin")).exists());
    }
    let last = read_field(fs::File::open(dir.path().join("fields/field_0002.bin")).unwrap()).unwrap();
    assert!((last.t - 0.002).abs() < 1e-15);
}

#[test]
fn repeated_simulations_are_bitwise_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    cmd_simulate(&coarse(a.path())).unwrap();
    cmd_simulate(&coarse(b.path())).unwrap();
    for file in ["diagnostics.csv", "steps.csv", "fields/field_0002.bin"] {
        assert_eq!(fs::read(a.path().join(file)).unwrap(), fs::read(b.path().join(file)).unwrap(), "{file}");
    }
}

#[test]
fn sweep_writes_one_summary_row_per_eps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig { dumps: false, ..coarse(dir.path()) };
    let eps = [0.08, 0.07, 0.06];
    let outcomes = cmd_sweep(&cfg, &eps).unwrap();
    assert_eq!(outcomes.len(), 3);
    let rows = csv_rows(&dir.path().join("sweep_summary.csv"));
    assert_eq!(rows[0].join(","), SUMMARY_HEADER);
    assert_eq!(rows.len(), 4);
    for (row, e) in rows[1..].iter().zip(eps) {
        assert_eq!(row[0].parse::<f64>().unwrap(), e);
    }
    assert_eq!(csv_rows(&dir.path().join("sweep_detail.csv")).len(), 1 + 3 * 3);
    assert!(dir.path().join("plot_sweep.py").exists());
    assert!(dir.path().join("steps_eps_0.07.csv").exists());
    assert!(cmd_sweep(&cfg, &[]).is_err());
}

#[test]
fn orbit_table_has_the_closed_form_tension() {
    let mut out = Vec::new();
    cmd_orbit(&RunConfig::default(), &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let rows: Vec<Vec<f64>> =
        text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 4);
    let exact = 2.0 * 2f64.sqrt() / 3.0;
    for r in &rows {
        assert!((r[2] - exact).abs() < 1e-12);
        assert!(r[4] <= 1e-10);
    }
    assert!((rows[2][0] - 1e-3).abs() < 1e-12);
    assert!((rows[2][1] - exact).abs() <= 1e-6);
    let ratio = rows[0][3] / rows[1][3];
    assert!((3.5..=4.5).contains(&ratio), "{ratio}");
}

#[test]
fn geometry_table_has_a_row_per_time() {
    let mut out = Vec::new();
    cmd_verify_geometry(&RunConfig::default(), &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,divergence,transport,length_transport,bound"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 21);
    for r in rows {
        assert!(r.iter().all(|v| v.is_finite()));
        assert!(r[2] < 5.0 && r[3] < 5.0, "{r:?}");
    }
}

#[test]
fn impossible_geometry_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    // The circle shrinks to a point before t_final.
    let cfg = RunConfig { t_final: 0.05, ..coarse(dir.path()) };
    let err = cmd_simulate(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 1, "{err}");
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut count = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "ini") {
            let cfg = load_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            mvac::harness::Experiment::new(&cfg).unwrap();
            count += 1;
        }
    }
    assert_eq!(count, 3);
}
