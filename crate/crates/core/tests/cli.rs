use std::f64::consts::PI;
use std::process::{Command, Output};

use gravscatter::amplitude::Coupling;
use gravscatter::cli::{
    format_field, run_angle_scan, run_limit_compare, selftest_exit_code, ScanRequest, CSV_COLUMNS,
    EXIT_SELFTEST_FAILED, EXIT_SUCCESS,
};
use gravscatter::kinematics::build_state;
use gravscatter::selftest::{SelfTestReport, SuiteOutcome};
use gravscatter::{dsigma_energy_form_state, AngularGrid, Spacing, GEV2_TO_MILLIBARN};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gravscatter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|f| f.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

const SCAN: [&str; 11] = [
    "angle-scan",
    "--m-gev",
    "1",
    "--M-gev",
    "10",
    "--E-gev",
    "5",
    "--theta-min",
    "0.1",
    "--n",
    "37",
];

#[test]
fn two_nodes_give_two_rows() {
    let out = run(&[
        "angle-scan",
        "--m-gev",
        "1",
        "--M-gev",
        "10",
        "--E-gev",
        "5",
        "--theta-min",
        &format!("{}", PI / 2.0),
        "--theta-max",
        &format!("{}", PI),
        "--n",
        "2",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, CSV_COLUMNS);
    assert_eq!(rows[0][0], PI / 2.0);
    assert_eq!(rows[1][0], PI);
}

#[test]
fn full_column_is_bit_identical_to_library() {
    let out = run(&SCAN);
    let (_, rows) = parse_csv(&String::from_utf8(out.stdout).unwrap());
    let grid = AngularGrid::new(0.1, PI, 37, Spacing::UniformTheta).unwrap();
    let c = Coupling::new(gravscatter::cli::NEWTON_G).unwrap();
    for (row, theta) in rows.iter().zip(grid.nodes()) {
        let s = build_state(5.0, 1.0, 10.0, theta, 0.0).unwrap();
        assert_eq!(row[0].to_bits(), theta.to_bits());
        assert_eq!(row[1].to_bits(), s.scattered_energy.to_bits());
        assert_eq!(
            row[3].to_bits(),
            dsigma_energy_form_state(&s, &c).unwrap().value.to_bits()
        );
    }
}

#[test]
fn identical_flags_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let paths = ["a.csv", "b.csv"].map(|n| dir.path().join(n));
    for p in &paths {
        let mut args = SCAN.to_vec();
        let path = p.to_str().unwrap();
        args.extend(["--out", path]);
        let out = run(&args);
        assert!(out.status.success());
        assert!(String::from_utf8(out.stdout).unwrap().contains("37 rows"));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
}

#[test]
fn fields_round_trip() {
    let text = String::from_utf8(run(&SCAN).stdout).unwrap();
    for line in text.lines().skip(1) {
        for field in line.split(',') {
            let x: f64 = field.parse().unwrap();
            assert_eq!(format_field(x), field);
            assert!(!field.contains(' '));
        }
    }
}

#[test]
fn millibarn_applies_to_cross_sections_only() {
    let gev = parse_csv(&String::from_utf8(run(&SCAN).stdout).unwrap()).1;
    let mut args = SCAN.to_vec();
    args.extend(["--units", "millibarn"]);
    let mb = parse_csv(&String::from_utf8(run(&args).stdout).unwrap()).1;
    for (a, b) in gev.iter().zip(&mb) {
        for k in [0, 1, 2, 7] {
            assert_eq!(a[k], b[k]);
        }
        for k in 3..7 {
            assert_eq!(b[k], a[k] * GEV2_TO_MILLIBARN);
        }
    }
}

#[test]
fn heavy_scatterer_scan_tracks_mott_like_limit() {
    let big_m = 10.0_f64;
    let e = 1e-5 * big_m;
    let m = e * (1.0_f64 - 0.25).sqrt();
    let req = ScanRequest::parse_from([
        "gravscatter",
        "angle-scan",
        "--m-gev",
        &m.to_string(),
        "--M-gev",
        "10",
        "--E-gev",
        &e.to_string(),
        "--theta-min",
        "0.05",
        "--n",
        "64",
    ])
    .unwrap();
    let (_, rows) = parse_csv(&run_angle_scan(&req).unwrap().body);
    assert_eq!(rows.len(), 64);
    for r in rows {
        let ratio = r[3] / r[4];
        assert!((0.999..=1.001).contains(&ratio), "{}", ratio);
    }
}

#[test]
fn energy_scan_rows() {
    let out = run(&[
        "energy-scan",
        "--m-gev",
        "1",
        "--M-gev",
        "10",
        "--E-lo",
        "1.5",
        "--E-hi",
        "150",
        "--n",
        "5",
        "--theta",
        "1",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header[0], "E_gev");
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0], 1.5);
    assert_eq!(rows[4][0], 150.0);
}

#[test]
fn limit_table_marks_undefined_ratio_at_backscatter() {
    let req = ScanRequest::parse_from(["gravscatter", "limit-compare"]).unwrap();
    let table = run_limit_compare(&req).unwrap().body;
    let row = table
        .lines()
        .find(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            f.len() >= 7 && f[1] == "1.0000000000" && f[2].starts_with("3.14159")
        })
        .expect("beta = 1, theta = pi row");
    let f: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(f[3].parse::<f64>().unwrap(), 0.0);
    assert_eq!(f[4], "undefined");
}

#[test]
fn limit_ratios_do_not_depend_on_units() {
    let strip = |units: &str| {
        let req =
            ScanRequest::parse_from(["gravscatter", "limit-compare", "--units", units]).unwrap();
        run_limit_compare(&req)
            .unwrap()
            .body
            .lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split_whitespace().collect();
                f[4..].join(" ")
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(strip("gev"), strip("millibarn"));
}

#[test]
fn limit_ratios_approach_one_in_corners() {
    let req = ScanRequest::parse_from(["gravscatter", "limit-compare"]).unwrap();
    let rows = gravscatter::cli::limit_rows(&req).unwrap();
    for r in rows.iter().filter(|r| r.theta < 3.0) {
        let flags = r.flags(1e-3);
        assert!(!flags.iter().any(|f| *f), "{:?}", r);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["angle-scan", "--m-gev", "1"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    let mut bad = SCAN.to_vec();
    bad[2] = "-1";
    let out = run(&bad);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("--m-gev"));
    let mut zero = SCAN.to_vec();
    zero[8] = "0";
    assert_eq!(run(&zero).status.code(), Some(1));
    let mut unwritable = SCAN.to_vec();
    unwritable.extend(["--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(run(&unwritable).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let beyond = run(&[
        "angle-scan",
        "--m-gev",
        "2",
        "--M-gev",
        "1",
        "--E-gev",
        "5",
        "--theta-min",
        "0.1",
    ]);
    assert_eq!(beyond.status.code(), Some(1));
}

#[test]
fn selftest_is_deterministic_and_passes() {
    let a = run(&["selftest"]);
    let b = run(&["selftest"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    for name in [
        "clifford",
        "trace vs spinor sum",
        "recoil vs energy form",
        "boost invariance",
    ] {
        assert!(text.contains(name));
    }
    assert!(text.contains("e-"));
    let c = run(&["selftest", "--seed", "99"]);
    assert_eq!(c.status.code(), Some(0));
    assert_ne!(c.stdout, text.as_bytes());
}

#[test]
fn failed_suite_maps_to_exit_two() {
    let mut report = SelfTestReport {
        seed: 1,
        suites: vec![SuiteOutcome {
            name: "x",
            samples: 1,
            max_deviation: 0.0,
            tolerance: 1.0,
        }],
    };
    assert_eq!(selftest_exit_code(&report), EXIT_SUCCESS);
    report.suites[0].max_deviation = 2.0;
    assert_eq!(selftest_exit_code(&report), EXIT_SELFTEST_FAILED);
}
