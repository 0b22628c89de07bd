use std::f64::consts::LN_2;
use std::process::Command;

use onebit_cli::Table;

fn onebit(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_onebit"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn ergodic_example_row() {
    let (code, out, _) = onebit(&[
        "ergodic", "--k", "16", "--snr-db", "20", "--rho", "0.9", "--alpha", "optimal",
    ]);
    assert_eq!(code, 0);
    let t = Table::parse_csv(&out).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.meta_value("command"), Some("ergodic"));
    let alpha = t.column("alpha", "gain").unwrap()[0];
    assert!(alpha > 0.0 && alpha < (16f64).ln() + 6.0);
    for col in t.columns.iter().filter(|c| c.unit == "bits") {
        let bits = t.column(&col.name, "bits").unwrap()[0];
        let nats = t.column(&col.name, "nats").unwrap()[0];
        assert!((nats / LN_2 - bits).abs() <= 1e-12 * bits, "{}", col.name);
    }
}

#[test]
fn outage_golden_row() {
    let (code, out, _) = onebit(&[
        "outage",
        "--k",
        "1",
        "--snr-db",
        "20",
        "--rate-nats",
        "2",
        "--power-mode",
        "long-term",
    ]);
    assert_eq!(code, 0);
    let eps = Table::parse_csv(&out)
        .unwrap()
        .column("eps", "prob")
        .unwrap()[0];
    assert!((eps - 0.01521).abs() < 5e-6, "{eps}");
}

#[test]
fn dmt_outdated_has_eleven_rows() {
    let (code, out, _) = onebit(&["dmt", "--scheme", "outdated", "--k", "16"]);
    assert_eq!(code, 0);
    let t = Table::parse_csv(&out).unwrap();
    assert_eq!(t.rows.len(), 11);
    let r = t.column("r", "1").unwrap();
    let d = t.column("d", "1").unwrap();
    assert!(r.iter().zip(&d).all(|(r, d)| (d - (1.0 - r)).abs() < 1e-12));
}

#[test]
fn sweep_rows_come_in_order() {
    let (code, out, _) = onebit(&[
        "outage",
        "--k",
        "8",
        "--rho",
        "0.9",
        "--sweep",
        "snr_db=0:30:7",
    ]);
    assert_eq!(code, 0);
    let t = Table::parse_csv(&out).unwrap();
    assert_eq!(
        t.column("snr", "dB").unwrap(),
        vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
    );
    assert_eq!(t.meta_value("sweep"), Some("snr_db=0:30:7"));
}

#[test]
fn files_round_trip_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("e.csv");
    let json = dir.path().join("e.json");
    let base = [
        "ergodic",
        "--k",
        "4",
        "--sweep",
        "rho=0:1:5",
        "--sweep",
        "snr_db=0:20:3",
    ];
    let mut a: Vec<&str> = base.to_vec();
    a.extend(["--out", csv.to_str().unwrap()]);
    assert_eq!(onebit(&a).0, 0);
    let mut b: Vec<&str> = base.to_vec();
    b.extend(["--out", json.to_str().unwrap(), "--format", "json"]);
    assert_eq!(onebit(&b).0, 0);

    let from_csv = Table::parse_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    let from_json = Table::parse_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(from_csv.rows.len(), 15);
    assert_eq!(from_csv.columns, from_json.columns);
    assert_eq!(from_csv.rows, from_json.rows);
}

#[test]
fn simulation_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let code = onebit(&[
            "simulate",
            "--quantity",
            "outage",
            "--k",
            "8",
            "--rho",
            "0.9",
            "--snr-db",
            "10",
            "--n-blocks",
            "100000",
            "--seed",
            "42",
            "--sweep",
            "k=1:8:3",
            "--out",
            path.to_str().unwrap(),
        ])
        .0;
        assert_eq!(code, 0);
        std::fs::read(path).unwrap()
    };
    let first = run("a.csv");
    assert_eq!(first, run("b.csv"));
    let t = Table::parse_csv(std::str::from_utf8(&first).unwrap()).unwrap();
    for z in t.column("z", "se").unwrap() {
        assert!(z < 4.0, "{z}");
    }
}

#[test]
fn figure_writes_one_file_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f5");
    let (code, _, _) = onebit(&[
        "figure",
        "fig5",
        "--out",
        out.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let mut names: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "full_csi.json",
            "longterm_1bit.json",
            "no_csi.json",
            "outdated_1bit.json",
            "p2p_1bit.json",
            "shortterm_1bit.json"
        ]
    );
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["ergodic", "--rho", "1.5"],
        vec!["ergodic", "--alpha", "best"],
        vec!["outage", "--rate-bits", "1", "--rate-nats", "1"],
        vec![
            "ergodic",
            "--rho",
            "0.5",
            "--doppler-hz",
            "10",
            "--delay-s",
            "0.01",
        ],
        vec!["dmt"],
        vec!["ergodic", "--k", "0"],
        vec!["ergodic", "--sweep", "k=1:4"],
    ] {
        let (code, _, err) = onebit(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn jakes_parameters_set_rho() {
    let (code, out, _) = onebit(&[
        "ergodic",
        "--k",
        "4",
        "--doppler-hz",
        "10",
        "--delay-s",
        "0.01",
        "--alpha",
        "1",
    ]);
    assert_eq!(code, 0);
    let rho = Table::parse_csv(&out).unwrap().column("rho", "1").unwrap()[0];
    // J0(x) = sum_m (-x²/4)^m / (m!)², x = 2 pi * 10 * 0.01
    let y = -(0.2 * std::f64::consts::PI).powi(2) / 4.0;
    let (mut term, mut j0) = (1.0, 1.0);
    for m in 1..20 {
        term *= y / (m * m) as f64;
        j0 += term;
    }
    assert!((rho - j0).abs() < 1e-12, "{rho} vs {j0}");
}
