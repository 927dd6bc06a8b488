use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.fcidump"))
        .canonicalize()
        .expect("fixture exists")
}

fn ceo_adapt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ceo-adapt"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Writes a config into `dir` and runs it; the run's output goes to `dir/<out>`.
fn run(dir: &Path, out: &str, body: &str) -> Output {
    let path = dir.join(format!("{out}.toml"));
    std::fs::write(&path, format!("output_dir = \"{out}\"\n{body}")).unwrap();
    ceo_adapt(&["run", path.to_str().unwrap()])
}

fn rows(dir: &Path) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_path(dir.join("iterations.csv")).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "iteration",
            "energy_hartree",
            "error_hartree",
            "n_params",
            "cnot_count",
            "cnot_depth",
            "measurement_units"
        ]
    );
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn fixture_line(name: &str) -> String {
    format!("fixture = {:?}\n", fixture(name).display().to_string())
}

#[test]
fn h2_dvg_run_reaches_fci() {
    let tmp = tempfile::tempdir().unwrap();
    let body = fixture_line("h2_0.74") + "geometry = \"0.74\"\n[adapt]\npool = \"ceo-dvg\"\n";
    let out = run(tmp.path(), "h2", &body);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let dir = tmp.path().join("h2");
    let table = rows(&dir);
    let final_error: f64 = table.last().unwrap()[2].parse().unwrap();
    assert!(final_error.abs() < 1e-9, "{final_error}");
    let s = summary(&dir);
    assert!((s["fci_energy"].as_f64().unwrap() - (-1.137283834)).abs() < 1e-6);
    assert_eq!(s["termination"], "gradient-norm");
    assert_eq!(s["chemical_accuracy"]["reached"], true);
}

#[test]
fn zero_iterations_gives_the_reference_row_only() {
    let tmp = tempfile::tempdir().unwrap();
    let body = fixture_line("h4_1.00") + "[adapt]\nmax_iterations = 0\n";
    let out = run(tmp.path(), "hf", &body);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = rows(&tmp.path().join("hf"));
    assert_eq!(table.len(), 1);
    assert_eq!(table[0][0], "0");
    assert_eq!(table[0][3], "0");
    assert_eq!(
        summary(&tmp.path().join("hf"))["termination"],
        "max-iterations"
    );
}

#[test]
fn identical_configs_give_byte_identical_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let body =
        fixture_line("h4_1.00") + "[adapt]\npool = \"qeb\"\ntetris = true\nmax_iterations = 4\n";
    for out in ["a", "b"] {
        assert!(run(tmp.path(), out, &body).status.success());
    }
    let a = std::fs::read(tmp.path().join("a/iterations.csv")).unwrap();
    let b = std::fs::read(tmp.path().join("b/iterations.csv")).unwrap();
    assert_eq!(a, b);

    let cmp = ceo_adapt(&[
        "compare",
        tmp.path().join("a").to_str().unwrap(),
        tmp.path().join("b").to_str().unwrap(),
    ]);
    assert!(cmp.status.success());
    let text = String::from_utf8(cmp.stdout).unwrap();
    let strip = |l: &str| {
        l.trim_start()
            .split_once(' ')
            .map(|(_, rest)| rest.to_owned())
            .unwrap()
    };
    let body: Vec<&str> = text.lines().skip(1).take_while(|l| !l.is_empty()).collect();
    let n = body.len() / 2;
    for k in 0..n {
        assert_eq!(strip(body[k]), strip(body[k + n]));
    }
}

#[test]
fn summary_totals_match_the_last_row() {
    let tmp = tempfile::tempdir().unwrap();
    let body = fixture_line("h4_1.00") + "format = \"json\"\n[adapt]\npool = \"ceo-dvg\"\ntetris = true\nhessian_recycling = true\ngradient_cost_mode = \"ogm\"\n";
    let out = run(tmp.path(), "star", &body);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let dir = tmp.path().join("star");
    let last = rows(&dir).pop().unwrap();
    let totals = &summary(&dir)["totals"];
    let keys = [
        "iteration",
        "energy_hartree",
        "error_hartree",
        "n_params",
        "cnot_count",
        "cnot_depth",
        "measurement_units",
    ];
    for (key, cell) in keys.iter().zip(&last) {
        let parsed: f64 = cell.parse().unwrap();
        assert_eq!(totals[key].as_f64().unwrap(), parsed, "{key}");
    }
    let detail: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("iterations.json")).unwrap())
            .unwrap();
    assert_eq!(detail.as_array().unwrap().len(), rows(&dir).len());
}

#[test]
fn uccsd_method_writes_two_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let body = fixture_line("h2_0.74") + "method = \"uccsd-trotterized\"\n";
    let out = run(tmp.path(), "ucc", &body);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = rows(&tmp.path().join("ucc"));
    assert_eq!(table.len(), 2);
    assert!(table[1][2].parse::<f64>().unwrap().abs() < 1e-9);
    assert!(table[1][4].parse::<usize>().unwrap() > 0);
}

#[test]
fn error_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();

    let bad = run(
        tmp.path(),
        "bad",
        "fixture = \"x.fcidump\"\n[adapt]\npool = \"nope\"\n",
    );
    assert_eq!(bad.status.code(), Some(1));

    let missing = run(tmp.path(), "missing", "fixture = \"absent.fcidump\"\n");
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("absent.fcidump"));

    let garbage = tmp.path().join("garbage.fcidump");
    std::fs::write(&garbage, "not an integral file\n").unwrap();
    let corrupt = run(
        tmp.path(),
        "corrupt",
        &format!("fixture = {:?}\n", garbage.display().to_string()),
    );
    assert_eq!(corrupt.status.code(), Some(2));

    let empty = tmp.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    let cmp = ceo_adapt(&["compare", empty.to_str().unwrap()]);
    assert_eq!(cmp.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&cmp.stderr).contains("schema mismatch"));
}

#[test]
fn verify_circuits_and_grouping_report() {
    let tmp = tempfile::tempdir().unwrap();
    let out = ceo_adapt(&[
        "verify-circuits",
        "--qasm-dir",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ovp-ceo+,9,7,9,7"));
    assert!(text.contains("mvp-ceo,13,13,13,13"));
    assert_eq!(std::fs::read_dir(tmp.path()).unwrap().count(), 3);

    let out = ceo_adapt(&[
        "grouping",
        fixture("h2_0.74").to_str().unwrap(),
        "--k",
        "0",
        "--k",
        "4",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,collections,r_hat");
    assert!(lines[1].starts_with("0,14,1.0"), "{}", lines[1]);
}
