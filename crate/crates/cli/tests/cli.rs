use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jost-forge")).args(args).env_remove("JOSTFORGE_TOL").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn kovacic_at_exceptional_k() {
    let o = run(&["kovacic", "--potential", &fixture("two_pole.json"), "--k2", "4/3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["verdict"], "SolvableCaseB");
    assert!(stdout(&o).contains("\"P\": \"x - 1/4\""));
    // the same potential typed as an expression
    let e = run(&["kovacic", "--potential", &fixture("two_pole_expr.json"), "--k2", "4/3"]);
    assert_eq!(stdout(&e), stdout(&o));
}

#[test]
fn kovacic_scan_and_rejections() {
    let o = run(&["kovacic", "--potential", &fixture("coulomb.json"), "--k-grid", "0.5:1.5:11"]);
    assert_eq!(code(&o), 0);
    assert!(!stdout(&o).contains("SolvableCaseB"));
    let exp = run(&["kovacic", "--potential", &fixture("sech2.json"), "--k2", "1"]);
    assert_eq!(code(&exp), 2);
    assert!(String::from_utf8_lossy(&exp.stderr).contains("exponential"));
    let syntax = run(&["kovacic", "--expr", "1/(x - ", "--k2", "1"]);
    assert_eq!(code(&syntax), 2);
    assert!(String::from_utf8_lossy(&syntax.stderr).contains("1:8"));
    assert_eq!(code(&run(&["kovacic", "--potential", &fixture("two_pole.json")])), 2);
}

#[test]
fn synth_text_is_canonical_and_parses_back() {
    let o = run(&["synth", "--spectral", &fixture("double_zero.json"), "--emit", "text"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let stored: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(fixture("double_zero_u.json")).unwrap()).unwrap();
    assert_eq!(text.trim(), stored["expression"].as_str().unwrap());
    let latex = run(&["synth", "--spectral", &fixture("double_zero.json"), "--emit", "latex"]);
    assert!(stdout(&latex).starts_with("\\frac{"));
    let psi = run(&["synth", "--spectral", &fixture("double_zero.json"), "--field", "psi"]);
    assert!(stdout(&psi).trim_end().ends_with("*exp(i*k*x)"));
}

#[test]
fn synth_csv_samples() {
    let o = run(&["synth", "--spectral", &fixture("one_soliton.json"), "--emit", "csv", "--samples", "-1:1:5"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x,re_u,im_u,pole_flag"));
    for l in lines {
        let f: Vec<&str> = l.split(',').collect();
        let x: f64 = f[0].parse().unwrap();
        let u: f64 = f[1].parse().unwrap();
        assert!((u - 2.0 / x.cosh().powi(2)).abs() < 1e-12);
        assert_eq!(f[3], "0");
    }
}

#[test]
fn scatter_free_potential() {
    let o = run(&["scatter", "--potential", &fixture("zero.json"), "--k-grid", "0.5:3:6"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("k,re_a,im_a,re_b,im_b"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|t| t.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 6);
    for r in rows {
        assert_eq!(&r[1..], &[1.0, 0.0, 0.0, 0.0]);
    }
}

#[test]
fn scatter_json_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rec.json");
    let o = run(&[
        "scatter",
        "--potential",
        &fixture("sech2.json"),
        "--k-grid",
        "0.5:2:4",
        "--emit",
        "json",
        "--bound-states",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["verdict"], "reflectionless");
    assert_eq!(v["bound_states"].as_array().unwrap().len(), 1);
    assert_eq!(v["bound_states"][0]["multiplicity"], 1);
}

#[test]
fn scatter_input_errors() {
    assert_eq!(code(&run(&["scatter", "--potential", &fixture("zero.json"), "--k-grid", "-1:1:3"])), 2);
    assert_eq!(code(&run(&["scatter", "--potential", &fixture("zero.json"), "--k-grid", "1:2"])), 2);
    assert_eq!(code(&run(&["scatter", "--potential", &fixture("coulomb.json"), "--k-grid", "1:2:2"])), 2);
    // a path too low to clear the real pole
    let low = run(&["scatter", "--potential", &fixture("double_zero_u.json"), "--k-grid", "1:2:2", "--contour-height", "0.01"]);
    assert_eq!(code(&low), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"expression\": 1").unwrap();
    assert_eq!(code(&run(&["scatter", "--potential", bad.to_str().unwrap(), "--k-grid", "1:2:2"])), 2);
    assert_eq!(code(&run(&["scatter", "--potential", "/nonexistent.json", "--k-grid", "1:2:2"])), 2);
    assert_eq!(code(&run(&["scatter", "--bogus"])), 2);
}

#[test]
fn verify_exit_status_and_tolerance_env() {
    let o = run(&["verify", "--suite", "quadrature", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    let bad = Command::new(env!("CARGO_BIN_EXE_jost-forge"))
        .args(["verify", "--suite", "identities"])
        .env("JOSTFORGE_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
    assert_eq!(code(&run(&["verify", "--suite", "nope"])), 2);
}

#[test]
fn tolerance_env_reaches_the_solver() {
    let coarse = Command::new(env!("CARGO_BIN_EXE_jost-forge"))
        .args(["scatter", "--potential", &fixture("gaussian.json"), "--k-grid", "1:1:1"])
        .env("JOSTFORGE_TOL", "1e-3")
        .output()
        .unwrap();
    let fine = run(&["scatter", "--potential", &fixture("gaussian.json"), "--k-grid", "1:1:1"]);
    assert_eq!(code(&coarse), 0);
    assert_ne!(stdout(&coarse), stdout(&fine));
    let flag = Command::new(env!("CARGO_BIN_EXE_jost-forge"))
        .args(["scatter", "--potential", &fixture("gaussian.json"), "--k-grid", "1:1:1", "--tol", "1e-10"])
        .env("JOSTFORGE_TOL", "1e-3")
        .output()
        .unwrap();
    assert_eq!(stdout(&flag), stdout(&fine));
}
