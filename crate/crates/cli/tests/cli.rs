use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semicubic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn builtin_tables() -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/tables.txt")).unwrap()
}

#[test]
fn verify_passes_on_shipped_tables() {
    let o = run(&["verify", "--only", "c-table"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1/1 passed"));
}

#[test]
fn bumped_coefficient_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tables.txt");
    let text = builtin_tables().replacen("c = -73892007", "c = -73892006", 1);
    fs::write(&path, text).unwrap();
    let o = run(&["--tables", path.to_str().unwrap(), "verify", "--only", "c-table"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("c-table") && out.contains("FAIL"), "{out}");
    assert!(out.contains("discrepancy"), "{out}");
}

#[test]
fn malformed_tables_are_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tables.txt");
    fs::write(&path, "zeta[0] = x ^^ 2\n").unwrap();
    let o = run(&["--tables", path.to_str().unwrap(), "verify"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--only", "no-such-check"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--h", "abc", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["--tables", "/nonexistent/tables.txt", "verify"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn classify_reports_membership() {
    let inside = stdout(&run(&["classify", "--h", "0.01", "--k", "0.02"]));
    let outside = stdout(&run(&["classify", "--h", "0.01", "--k", "0.05"]));
    assert!(inside.to_lowercase().contains("inside"), "{inside}");
    assert!(outside.to_lowercase().contains("outside"), "{outside}");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small run\nsamples = 3\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = stdout(&run(&["--config", cfg, "trace"]));
    assert_eq!(from_file.lines().count(), 1 + 3);
    let from_flag = stdout(&run(&["--config", cfg, "trace", "--samples", "5"]));
    assert_eq!(from_flag.lines().count(), 1 + 5);

    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "trace"]).status.code(), Some(2));
}

#[test]
fn trace_csv_is_deterministic() {
    let a = run(&["trace", "--samples", "7"]);
    let b = run(&["trace", "--samples", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,h_lo,h_hi,k,slope,curvature"));
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 6);
        assert!(cols[1] <= cols[2] && cols[5] > 0.0, "{line}");
    }
}

#[test]
fn compare_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cmp.csv");
    let o = run(&[
        "compare", "--k-min", "0.01", "--k-max", "0.03", "--k-steps", "2", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,m2_verdict,m3_verdict,worst_min_eig_m2,worst_min_eig_m3"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    // Both points are well inside, so neither power finds a violation.
    for r in rows {
        assert!(r.contains(",no_violation,no_violation,"), "{r}");
    }
}

fn attr(line: &str, name: &str) -> f64 {
    let key = format!("{name}=\"");
    let start = line.find(&key).unwrap() + key.len();
    line[start..].split('"').next().unwrap().parse().unwrap()
}

#[test]
fn plot_layers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("region.svg");
    let o = run(&[
        "plot", "--out", out.to_str().unwrap(), "--annotate", "extrema", "--segment", "0.01", "--shade", "6", "--samples",
        "64",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(out).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));

    let ticks: Vec<(String, f64)> = svg
        .lines()
        .filter(|l| l.contains("class=\"tick\""))
        .map(|l| {
            let name = l.split("data-name=\"").nth(1).unwrap().split('"').next().unwrap().to_string();
            (name, attr(l, "data-k"))
        })
        .collect();
    let names: Vec<&str> = ticks.iter().map(|t| t.0.as_str()).collect();
    assert_eq!(names, ["beta1", "alpha1", "beta2", "alpha2"]);
    assert!(ticks.windows(2).all(|w| w[0].1 < w[1].1));

    let bound = svg.lines().find(|l| l.contains("id=\"h-bound\"")).unwrap();
    let h_max = svg.lines().find(|l| l.contains("id=\"h-max\"")).unwrap();
    assert!(attr(h_max, "cx") < attr(bound, "x1"));

    let path = svg.lines().find(|l| l.contains("id=\"boundary\"")).unwrap();
    let d = path.split(" d=\"").nth(1).unwrap().split('"').next().unwrap();
    assert!(d.starts_with("M 60.000 580.000") && d.trim_end().ends_with('Z'), "{d}");
}

#[test]
fn report_has_headline_keys() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["report", "--out", out.to_str().unwrap(), "--oracle-points", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    for key in ["h_M", "k_M", "epsilon6", "boundary_roots_h_0_01", "certificates", "oracle_agreement"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let h_m = v["h_M"]["value"]["lo"].as_f64().unwrap();
    assert!((h_m - 0.125129725642).abs() < 1e-9);
    assert_eq!(v["oracle_agreement"]["inside"], 2);
}
