use std::f64::consts::PI;
use std::process::Command;

use clap::Parser;
use dpg_cli::*;
use dpg_core::assembly::SolutionLayout;
use dpg_core::mesh::MeshPair;

fn config(args: &[&str]) -> RunConfig {
    RunConfig::try_parse_from(std::iter::once("dpg").chain(args.iter().copied())).unwrap()
}

fn row(level: u32) -> ReportRow {
    ReportRow {
        level,
        h: 0.5f64.powi(level as i32),
        ndof: 177,
        l2_error: 0.015807196488814138,
        eta: 0.03188310002855583,
        efficiency: 2.01699903275813,
        iterations: 72,
        seconds: 0.0,
        converged: true,
        cache_hit_rate: 0.9375,
    }
}

#[test]
fn defaults_are_the_benchmark() {
    let c = RunConfig::default();
    assert_eq!(c.levels, Levels(vec![2, 3, 4, 5, 6]));
    assert_eq!((c.test_refine, c.degree, c.enrich), (1, 2, 5));
    assert_eq!(c.beta_angle, PI / 8.0);
    assert_eq!((c.reaction, c.rhs_const, c.tol), (0.0, 1.0, 1e-12));
    assert_eq!((c.solver.as_str(), c.cache.as_str()), ("cg", "keyed"));
    assert!(c.validate().is_ok());
}

#[test]
fn flags_round_trip_through_canonical_form() {
    let cases: [&[&str]; 4] = [
        &[],
        &[
            "--levels",
            "1,3,4",
            "--degree",
            "3",
            "--beta-angle",
            "-0.25",
            "--csv",
            "out.csv",
        ],
        &[
            "--levels",
            "0:2",
            "--test-refine",
            "2",
            "--reaction",
            "0.5",
            "--rhs-const",
            "-2",
            "--timing",
        ],
        &[
            "--levels",
            "4",
            "--enrich",
            "4",
            "--tol",
            "1e-9",
            "--solver",
            "dense-cholesky",
            "--cache",
            "off",
            "--max-iter",
            "50",
            "--vtk",
            "x.vtk",
        ],
    ];
    for args in cases {
        let c = config(args);
        let canon = c.to_args();
        let again =
            RunConfig::try_parse_from(std::iter::once("dpg".to_string()).chain(canon.clone()))
                .unwrap();
        assert_eq!(again, c);
        assert_eq!(again.to_args(), canon);
    }
}

#[test]
fn level_lists() {
    assert_eq!(parse_levels("2:6").unwrap(), Levels(vec![2, 3, 4, 5, 6]));
    assert_eq!(parse_levels("5,2,2").unwrap(), Levels(vec![2, 5]));
    assert_eq!(parse_levels("3").unwrap().to_string(), "3");
    assert_eq!(parse_levels("1,3").unwrap().to_string(), "1,3");
    assert!(parse_levels("6:2").is_err());
    assert!(parse_levels("a").is_err());
}

#[test]
fn invalid_configs_are_rejected() {
    for args in [
        &["--degree", "0"][..],
        &["--degree", "5"],
        &["--test-refine", "4"],
        &["--enrich", "0"],
        &["--enrich", "6"],
        &["--tol", "0"],
        &["--solver", "gmres"],
        &["--cache", "lru"],
        &["--levels", "13"],
    ] {
        let c = config(args);
        let err = c.validate().unwrap_err();
        assert_eq!(err.exit_code(), 1, "{args:?}");
        assert!(run_convergence_study(&c).is_err());
    }
}

#[test]
fn csv_layout() {
    let empty = csv_string(&ErrorReport::default());
    assert_eq!(empty, format!("{CSV_HEADER}\n"));
    let report = ErrorReport { rows: vec![row(2)] };
    let s = csv_string(&report);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "level,H,ndof,l2_error,eta,efficiency,iterations,seconds"
    );
    assert_eq!(
        lines[1],
        "2,0.25,177,0.015807196488814138,0.03188310002855583,2.01699903275813,72,0"
    );
    assert!(s.ends_with('\n') && !s.contains("\r"));
    assert!(s.lines().all(|l| l.trim_end() == l));
    // Shortest round-trip formatting.
    let back: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert_eq!(back, report.rows[0].l2_error);
}

#[test]
fn csv_reexport_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let report = ErrorReport {
        rows: vec![row(2), row(3)],
    };
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    export_csv(&report, &a).unwrap();
    export_csv(&report, &b).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let err = export_csv(&report, &dir.path().join("missing/x.csv")).unwrap_err();
    assert!(err.to_string().contains("missing"));
}

#[test]
fn vtk_of_two_cells() {
    let pair = MeshPair::uniform(0, 0);
    let layout = SolutionLayout::transport(&pair, 2).unwrap();
    let phi = vec![1.0; layout.map(0).n_dofs()];
    let theta: Vec<f64> = layout
        .map(1)
        .node_points
        .iter()
        .map(|p| p[0] + 2.0 * p[1])
        .collect();
    let s = vtk_string(&phi, &theta, &pair, &layout).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "# vtk DataFile Version 2.0");
    assert!(lines.contains(&"DATASET UNSTRUCTURED_GRID"));
    assert!(lines.contains(&"POINTS 6 double"));
    assert!(lines.contains(&"CELLS 2 8"));
    assert!(lines.contains(&"CELL_TYPES 2"));
    assert!(lines.contains(&"POINT_DATA 6"));
    let block = |name: &str| -> Vec<f64> {
        let at = lines
            .iter()
            .position(|l| *l == format!("SCALARS {name} double 1"))
            .unwrap();
        lines[at + 2..at + 8]
            .iter()
            .map(|v| v.parse().unwrap())
            .collect()
    };
    assert!(block("phi").iter().all(|&v| v == 1.0));
    // theta is sampled at each duplicated point's coordinates.
    let pts: Vec<Vec<f64>> = lines[5..11]
        .iter()
        .map(|l| l.split(' ').map(|v| v.parse().unwrap()).collect())
        .collect();
    for (p, t) in pts.iter().zip(block("theta")) {
        assert!((t - (p[0] + 2.0 * p[1])).abs() < 1e-14);
    }
    assert!(vtk_string(&phi[1..], &theta, &pair, &layout).is_err());
}

#[test]
fn zero_data_gives_zero_errors() {
    let c = config(&["--levels", "0:3", "--rhs-const", "0"]);
    let study = run_convergence_study(&c).unwrap();
    for r in &study.report.rows {
        assert!(r.l2_error <= 1e-10 && r.eta <= 1e-10, "{r:?}");
    }
}

#[test]
fn report_rows_follow_the_levels() {
    let c = config(&["--levels", "3,1"]);
    let rows = run_convergence_study(&c).unwrap().report.rows;
    assert_eq!(rows.iter().map(|r| r.level).collect::<Vec<_>>(), [1, 3]);
    assert_eq!(rows.iter().map(|r| r.h).collect::<Vec<_>>(), [0.5, 0.125]);
    assert!(rows.iter().all(|r| r.converged && r.seconds == 0.0));
}

#[test]
fn non_convergence_is_flagged_and_the_sweep_continues() {
    let c = config(&["--levels", "1:2", "--max-iter", "2"]);
    let report = run_convergence_study(&c).unwrap().report;
    assert_eq!(report.rows.len(), 2);
    assert_eq!(report.failed_levels(), [1, 2]);
}

fn dpg(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dpg"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let vtk = dir.path().join("r.vtk");
    let ok = dpg(&[
        "--levels",
        "1:2",
        "--csv",
        csv.to_str().unwrap(),
        "--vtk",
        vtk.to_str().unwrap(),
    ]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 3);
    assert!(std::fs::read_to_string(&vtk)
        .unwrap()
        .contains("POINTS 96 double"));
    assert_eq!(dpg(&["--degree", "0"]).status.code(), Some(1));
    assert_eq!(dpg(&["--bogus"]).status.code(), Some(1));
    assert_eq!(
        dpg(&["--levels", "1", "--max-iter", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(dpg(&["--help"]).status.code(), Some(0));
    let stdout = dpg(&["--levels", "1"]);
    assert!(String::from_utf8_lossy(&stdout.stdout).starts_with(CSV_HEADER));
}
