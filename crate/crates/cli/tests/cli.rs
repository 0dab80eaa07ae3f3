use std::path::Path;
use std::process::{Command, Output};

fn frw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frw"))
        .args(args)
        .env_remove("FRW_DEFAULT_TOL")
        .output()
        .expect("spawn frw")
}

fn frw_env(args: &[&str], tol: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frw"))
        .args(args)
        .env("FRW_DEFAULT_TOL", tol)
        .output()
        .expect("spawn frw")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn last_row(csv: &str) -> Vec<f64> {
    csv.lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect()
}

#[test]
fn classify_examples() {
    let o = frw(&["classify", "--gamma-bar", "1", "--kappa", "1", "--lambda", "0.75", "--c", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["family"], "RadiationLambdaCritical");
    assert_eq!(v["discriminant"], 0.0);
    let o = frw(&["classify", "--gamma-bar", "-1", "--kappa", "0", "--lambda", "0"]);
    assert_eq!(json(&o)["family"], "ZeroLambdaDeSitterFlat");
    let o = frw(&["classify", "--gamma-bar", "0.3333333333333333", "--kappa", "1"]);
    let v = json(&o);
    assert_eq!(v["family"], "LogarithmicDegenerate");
    assert_eq!(v["degenerate_n"], 1);
}

#[test]
fn hyp2f1_examples() {
    assert_eq!(stdout(&frw(&["hyp2f1", "0", "-0.5", "0.25", "0.3"])).trim(), "1.000000000000000");
    assert_eq!(stdout(&frw(&["hyp2f1", "1", "1", "1.5", "0.5"])).trim(), "1.570796326794897");
    let o = frw(&["hyp2f1", "1", "2", "0", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonpositive integer"));
}

#[test]
fn solve_flat_dust_last_row() {
    let o = frw(&[
        "solve", "--gamma-bar", "0.5", "--kappa", "0", "--t-start", "0", "--t-end", "2", "--n", "101",
        "--method", "closed",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "t,a,adot,hubble,rho,p,friedmann_residual");
    assert_eq!(text.lines().count(), 102);
    let row = last_row(&text);
    assert_eq!(row[0], 2.0);
    // (1 + 3/2 · 2)^(2/3) = 4^(2/3)
    assert!((row[1] - 4f64.powf(2.0 / 3.0)).abs() < 1e-12);
    assert!((row[1] - 2.51984).abs() < 1e-5);
}

#[test]
fn solve_all_methods_agree_for_flat_radiation() {
    let o = frw(&[
        "solve", "--gamma-bar", "1", "--kappa", "0", "--lambda", "3", "--c", "1", "--t-start", "0.1",
        "--t-end", "2", "--n", "41", "--method", "all", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["metadata"]["max_deviation"].as_f64().unwrap() < 1e-7);
    let blocks = v["blocks"].as_array().unwrap();
    let names: Vec<&str> = blocks.iter().map(|b| b["method"].as_str().unwrap()).collect();
    assert_eq!(names, ["closed_form", "ode", "quadrature"]);
    for b in blocks {
        assert_eq!(b["records"].as_array().unwrap().len(), 41);
    }
}

#[test]
fn solve_all_csv_has_deviation_columns() {
    let o = frw(&[
        "solve", "--gamma-bar", "0.5", "--kappa", "0", "--t-start", "0.5", "--t-end", "2", "--n", "5",
        "--method", "all",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "method,t,a,adot,hubble,rho,p,friedmann_residual,dev_closed,dev_ode,dev_quadrature"
    );
    assert_eq!(lines.count(), 15);
}

#[test]
fn vacuum_closed_is_symmetric_cosh() {
    let o = frw(&[
        "solve", "--gamma-bar", "-1", "--kappa", "1", "--a0", "2", "--t0", "1", "--t-start", "-1",
        "--t-end", "3", "--n", "41",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<f64>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let mid = &rows[20];
    assert_eq!(mid[0], 1.0);
    assert!((mid[1] - 2.0).abs() < 1e-15);
    for i in 0..20 {
        let (l, r) = (&rows[i], &rows[40 - i]);
        assert!((l[1] - r[1]).abs() < 1e-12);
        assert!((l[1] - 2.0 * ((l[0] - 1.0) / 2.0).cosh()).abs() < 1e-12);
    }
}

#[test]
fn rows_outside_the_domain_are_omitted() {
    // closed radiation with Λ = 0 lives on [0, 2a₀]
    let o = frw(&[
        "solve", "--gamma-bar", "1", "--kappa", "1", "--t-start", "-1", "--t-end", "3", "--n", "9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 5);
    assert!(String::from_utf8_lossy(&o.stderr).contains("omitted"));
}

#[test]
fn method_regime_mismatch_is_a_usage_error() {
    let o = frw(&["solve", "--gamma-bar", "2", "--kappa", "1", "--lambda", "1", "--t-end", "1", "--method", "closed"]);
    assert_eq!(o.status.code(), Some(2));
    let o = frw(&["solve", "--gamma-bar", "1", "--kappa", "0", "--lambda", "1", "--t-end", "1", "--method", "hypergeometric"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hypergeometric_family_solves_with_all_methods() {
    let o = frw(&[
        "solve", "--gamma-bar", "1.5", "--kappa", "1", "--t-start", "-0.3", "--t-end", "0.3", "--n", "13",
        "--method", "all", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["metadata"]["max_deviation"].as_f64().unwrap() < 1e-6);
}

#[test]
fn exit_statuses() {
    assert_eq!(frw(&["--help"]).status.code(), Some(0));
    assert_eq!(frw(&["--version"]).status.code(), Some(0));
    assert_eq!(frw(&[]).status.code(), Some(2));
    assert_eq!(frw(&["nope"]).status.code(), Some(2));
    assert_eq!(frw(&["classify", "--kappa", "1"]).status.code(), Some(2));
    assert_eq!(frw(&["classify", "--gamma-bar", "1", "--kappa", "2"]).status.code(), Some(2));
    assert_eq!(frw(&["classify", "--gamma-bar", "0", "--kappa", "1"]).status.code(), Some(2));
    assert_eq!(frw(&["classify", "--gamma-bar", "1", "--kappa", "1", "--c", "-1"]).status.code(), Some(2));
    assert_eq!(frw(&["solve", "--gamma-bar", "1", "--kappa", "0", "--t-start", "2", "--t-end", "1"]).status.code(), Some(2));
    assert_eq!(frw(&["solve", "--gamma-bar", "1", "--kappa", "0", "--t-end", "1", "--n", "1"]).status.code(), Some(2));
    assert_eq!(frw(&["validate", "--subset", "nonsense"]).status.code(), Some(2));
    assert_eq!(frw(&["validate", "--subset", "classify"]).status.code(), Some(0));
    assert_eq!(frw(&["validate", "--subset", "dust", "--tol", "1e-20"]).status.code(), Some(1));
    assert_eq!(frw_env(&["hyp2f1", "1", "1", "2", "0.5"], "abc").status.code(), Some(2));
    assert_eq!(frw_env(&["hyp2f1", "1", "1", "2", "0.5"], "-1").status.code(), Some(2));
}

#[test]
fn env_tolerance_sets_solve_threshold() {
    let args = [
        "solve", "--gamma-bar", "1", "--kappa", "0", "--lambda", "3", "--c", "1", "--t-start", "0.1",
        "--t-end", "2", "--n", "21", "--method", "all",
    ];
    assert_eq!(frw_env(&args, "1e-6").status.code(), Some(0));
    assert_eq!(frw_env(&args, "1e-300").status.code(), Some(1));
}

#[test]
fn validate_subset_and_forced_failure() {
    let o = frw(&["validate", "--subset", "ermakov"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.contains("[ermakov]")));
    assert!(text.lines().count() > 0);
    let o = frw(&["validate", "--subset", "ermakov", "--tol", "1e-20"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("ermakov/ode_drift"), "{err}");
}

#[test]
fn validate_env_tolerance_overrides() {
    assert_eq!(frw_env(&["validate", "--subset", "dust"], "1e-20").status.code(), Some(1));
}

#[test]
fn validate_parallel_matches_serial() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let subset = "hyp2f1,dust,limits";
    assert!(frw(&["validate", "--subset", subset, "--out", a.to_str().unwrap()]).status.success());
    assert!(frw(&["validate", "--subset", subset, "--jobs", "3", "--out", b.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

fn table_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn table_file_sets() {
    let dir = tempfile::tempdir().unwrap();
    let run = |table: &str, extra: &[&str], sub: &str| {
        let out = dir.path().join(sub);
        let mut args = vec!["table", "--table", table, "--n", "21", "--out", out.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert!(frw(&args).status.success());
        table_files(&out)
    };
    assert_eq!(
        run("zero-lambda-closed", &[], "zlc"),
        [
            "plot.gp",
            "zero-lambda-closed_dust.csv",
            "zero-lambda-closed_radiation.csv",
            "zero-lambda-closed_vacuum.csv"
        ]
    );
    let curved = run("radiation-curved", &["--kappa", "1"], "rc");
    assert_eq!(curved.iter().filter(|f| f.ends_with(".csv")).count(), 4);
    let flat = run("flat-radiation", &[], "fr");
    assert_eq!(flat.iter().filter(|f| f.ends_with(".csv")).count(), 2);
    let script = std::fs::read_to_string(dir.path().join("rc/plot.gp")).unwrap();
    for f in curved.iter().filter(|f| f.ends_with(".csv")) {
        assert!(script.contains(f.as_str()));
    }
}

#[test]
fn table_output_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one");
    let four = dir.path().join("four");
    assert!(frw(&["table", "--n", "31", "--out", one.to_str().unwrap()]).status.success());
    assert!(frw(&["table", "--n", "31", "--jobs", "4", "--out", four.to_str().unwrap()]).status.success());
    let names = table_files(&one);
    assert_eq!(names, table_files(&four));
    for n in names {
        assert_eq!(std::fs::read(one.join(&n)).unwrap(), std::fs::read(four.join(&n)).unwrap(), "{n}");
    }
}

#[test]
fn config_files() {
    let dir = tempfile::tempdir().unwrap();
    let toml = dir.path().join("run.toml");
    std::fs::write(&toml, "gamma_bar = 0.5\nkappa = 0\nt_start = 0.0\nt_end = 2.0\nn = 101\nmethod = \"closed\"\n").unwrap();
    let o = frw(&["solve", toml.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!((last_row(&stdout(&o))[1] - 2.51984).abs() < 1e-5);
    // flags win over the file
    let o = frw(&["solve", toml.to_str().unwrap(), "--t-end", "1"]);
    assert_eq!(last_row(&stdout(&o))[0], 1.0);
    let js = dir.path().join("run.json");
    std::fs::write(&js, r#"{"gamma_bar": 1, "kappa": 1, "lambda": 0.75, "c": 1}"#).unwrap();
    let o = frw(&["classify", js.to_str().unwrap()]);
    assert_eq!(json(&o)["family"], "RadiationLambdaCritical");
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "gamma_bar = 1\nunknown_key = 3\n").unwrap();
    assert_eq!(frw(&["classify", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(frw(&["classify", "/nonexistent/run.toml"]).status.code(), Some(2));
}

#[test]
fn solve_output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let args = |p: &Path| {
        vec![
            "solve".to_string(), "--gamma-bar".into(), "0.5".into(), "--kappa".into(), "1".into(),
            "--t-start".into(), "-1".into(), "--t-end".into(), "1".into(), "--n".into(), "33".into(),
            "--method".into(), "all".into(), "--out".into(), p.to_str().unwrap().into(),
        ]
    };
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = Command::new(env!("CARGO_BIN_EXE_frw")).args(args(p)).output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.ends_with('\n'));
    assert!(text.lines().skip(1).all(|l| l.split(',').skip(1).all(|f| f.is_empty() || f.contains('e'))));
}
