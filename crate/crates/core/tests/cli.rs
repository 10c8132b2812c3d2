use std::fs;
use std::path::Path;
use std::process::Command;

use clap::Parser;
use levinson::cli::{execute, Cli, EXIT_CONFIG, EXIT_OK};

const BIN: &str = env!("CARGO_BIN_EXE_levinson-lab");

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn run(args: &[&str]) -> i32 {
    let mut full = vec!["levinson-lab"];
    full.extend_from_slice(args);
    execute(&Cli::try_parse_from(full).unwrap())
}

#[test]
fn free_curves_are_zero_and_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "free.toml",
        "mode = \"curves\"\ndimension = 3\nfamily = \"free\"\npoints_per_decade = 10\n",
    );
    let out1 = tmp.path().join("a");
    let out2 = tmp.path().join("b");
    assert_eq!(
        run(&["curves", "--config", &cfg, "--out", out1.to_str().unwrap()]),
        EXIT_OK
    );
    assert_eq!(
        run(&["curves", "--config", &cfg, "--out", out2.to_str().unwrap()]),
        EXIT_OK
    );
    let csv = fs::read_to_string(out1.join("curves.csv")).unwrap();
    assert_eq!(csv, fs::read_to_string(out2.join("curves.csv")).unwrap());
    let lines: Vec<&str> = csv.lines().collect();
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out1.join("curves.json")).unwrap()).unwrap();
    assert_eq!(lines.len() - 1, manifest["rows"].as_u64().unwrap() as usize);
    assert!(lines[0].starts_with("lambda,"));
    for row in &lines[1..] {
        for v in row.split(',').skip(1) {
            assert_eq!(v.parse::<f64>().unwrap(), 0.0, "{row}");
        }
    }
}

#[test]
fn curves_row_count_matches_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "well.toml",
        "dimension = 1\nfamily = \"well\"\ndepth = 2.0\npoints_per_decade = 20\n",
    );
    let out = tmp.path().join("o");
    assert_eq!(
        run(&["curves", "--config", &cfg, "--out", out.to_str().unwrap()]),
        EXIT_OK
    );
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("curves.json")).unwrap()).unwrap();
    let csv = fs::read_to_string(out.join("curves.csv")).unwrap();
    assert_eq!(csv.lines().count() - 1, manifest["rows"].as_u64().unwrap() as usize);
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert_eq!(header, ["lambda", "delta_even", "delta_odd", "xi", "im_tr", "abs_pn"]);
}

#[test]
fn levinson_and_scan_through_the_binary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "lev.toml",
        "mode = \"levinson\"\ndimension = 1\nfamily = \"bump\"\ndepth = 3.0\n",
    );
    let out = tmp.path().join("o");
    let status = Command::new(BIN)
        .args([
            "levinson",
            "--config",
            &cfg,
            "--out",
            out.to_str().unwrap(),
            "--threads",
            "1",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("levinson.json")).unwrap()).unwrap();
    assert_eq!(report["N"], 1);
    assert!(report["residual"].as_f64().unwrap() < 0.05);

    let scan = write_config(
        tmp.path(),
        "scan.toml",
        "dimension = 3\nfamily = \"well\"\nscan_l = 0\nscan_lo = 1.0\nscan_hi = 4.0\nscan_samples = 16\n",
    );
    let status = Command::new(BIN)
        .args(["resonance-scan", "--config", &scan, "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("resonance_scan.json")).unwrap()).unwrap();
    let t = r["thresholds"].as_array().unwrap();
    assert_eq!(t.len(), 1);
    assert!((t[0].as_f64().unwrap() - std::f64::consts::PI.powi(2) / 4.0).abs() < 1e-9);
}

#[test]
fn configuration_errors_exit_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let bad = write_config(tmp.path(), "bad.toml", "dimension = 7\nfamily = \"well\"\n");
    let mismatch = write_config(
        tmp.path(),
        "mm.toml",
        "mode = \"curves\"\ndimension = 1\nfamily = \"free\"\n",
    );
    let missing_table = write_config(
        tmp.path(),
        "t.toml",
        "dimension = 1\nfamily = \"table\"\ntable = \"nope.txt\"\ndepth = 1.0\n",
    );
    for args in [
        vec!["levinson", "--config", bad.as_str()],
        vec!["levinson", "--config", mismatch.as_str()],
        vec!["levinson", "--config", missing_table.as_str()],
        vec!["levinson", "--config", "/nonexistent/config.toml"],
        vec!["levinson"],
        vec!["no-such-subcommand"],
    ] {
        let status = Command::new(BIN).args(&args).arg("--out").arg(&out).status().unwrap();
        assert_eq!(status.code(), Some(EXIT_CONFIG), "{args:?}");
    }
}

#[test]
fn flow_suite_is_seeded() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "flow.toml",
        "dimension = 3\nfamily = \"well\"\ndepth = 4.0\npaths = 12\n",
    );
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    assert_eq!(
        run(&[
            "flow-suite",
            "--config",
            &cfg,
            "--out",
            a.to_str().unwrap(),
            "--seed",
            "5"
        ]),
        EXIT_OK
    );
    assert_eq!(
        run(&[
            "flow-suite",
            "--config",
            &cfg,
            "--out",
            b.to_str().unwrap(),
            "--seed",
            "5"
        ]),
        EXIT_OK
    );
    assert_eq!(
        run(&[
            "flow-suite",
            "--config",
            &cfg,
            "--out",
            c.to_str().unwrap(),
            "--seed",
            "6"
        ]),
        EXIT_OK
    );
    let read = |d: &Path| fs::read_to_string(d.join("flow_suite.json")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    let r: serde_json::Value = serde_json::from_str(&read(&a)).unwrap();
    assert_eq!(r["passed"], 12);
    assert_eq!(r["records"][0]["seed"], 5);
}

#[test]
fn table_potential_relative_path() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("t.txt"), "# r T\n0 -1\n0.5 -1\n1 0\n").unwrap();
    let cfg = write_config(
        tmp.path(),
        "bk.toml",
        "mode = \"bk_check\"\ndimension = 1\nfamily = \"table\"\ntable = \"t.txt\"\ndepth = 3.0\nbox_length = 20.0\nbox_points = 2000\n",
    );
    let out = tmp.path().join("o");
    assert_eq!(
        run(&["bk-check", "--config", &cfg, "--out", out.to_str().unwrap()]),
        EXIT_OK
    );
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("bk_check.json")).unwrap()).unwrap();
    assert_eq!(r["passed"], true);
}
