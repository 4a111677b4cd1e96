use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_autoconv"));
    c.env("RUST_LOG", "warn").env_remove("SOURCE_DATE_EPOCH");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("autoconv-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("spawn autoconv")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn solve(dir: &Path, t: usize, r: usize, name: &str, extra: &[&str]) -> (PathBuf, Output) {
    let out = dir.join(name);
    let o = run(bin()
        .args(["solve", "--T", &t.to_string(), "--R", &r.to_string(), "--out"])
        .arg(&out)
        .args(["--timestamp", "2001-02-03T04:05:06Z"])
        .args(extra));
    (out, o)
}

fn report_body(path: &Path) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    v["body"].clone()
}

#[test]
fn trivial_solve_and_certify() {
    let dir = scratch("trivial");
    let (sol, o) = solve(&dir, 0, 1000, "t0.sol", &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&sol).unwrap();
    assert!(text.starts_with("AUTOCONV-SOLUTION v1\n"));
    assert!(text.contains("T=0\n"));

    let report = dir.join("cert.json");
    let o = run(bin().args(["certify", "--solution"]).arg(&sol).args(["--N", "1000", "--report"]).arg(&report));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let body = report_body(&report);
    let upper = body["upper"]["value"].as_f64().unwrap();
    let lower = body["lower"]["value"].as_f64().unwrap();
    assert!((upper - 2.0 / 3.0).abs() < 1e-6, "{upper}");
    assert!((lower - 0.537).abs() < 1e-3, "{lower}");
    assert_eq!(body["sandwich_ok"], serde_json::Value::Bool(true));
}

#[test]
fn solution_round_trip_is_byte_identical() {
    let dir = scratch("roundtrip");
    let (first, o) = solve(&dir, 12, 500, "a.sol", &[]);
    assert_eq!(code(&o), 0);
    // warm start from the file at the same degree reproduces the coefficients
    let (second, o) = solve(&dir, 12, 500, "b.sol", &["--warm-start", first.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let coeff_lines = |p: &Path| -> Vec<String> {
        fs::read_to_string(p).unwrap().lines().filter(|l| l.starts_with(char::is_numeric)).map(String::from).collect()
    };
    assert_eq!(coeff_lines(&first).len(), 12);
    let a = autoconv::io::SolutionFile::load(&first).unwrap();
    assert_eq!(a.to_text(), fs::read_to_string(&first).unwrap());
    let b = autoconv::io::SolutionFile::load(&second).unwrap();
    for (x, y) in a.coeffs.values().iter().zip(b.coeffs.values()) {
        assert!((x - y).abs() < 1e-6);
    }
}

#[test]
fn warm_start_uses_fewer_iterations() {
    let dir = scratch("warm");
    let (t20, _) = solve(&dir, 20, 4000, "t20.sol", &[]);
    let iterations = |o: &Output| -> usize {
        let s = stdout(o);
        let field = s.split_whitespace().find(|w| w.starts_with("iterations=")).unwrap().to_string();
        field["iterations=".len()..].parse().unwrap()
    };
    let (_, cold) = solve(&dir, 50, 4000, "cold.sol", &[]);
    let (_, warm) = solve(&dir, 50, 4000, "warm.sol", &["--warm-start", t20.to_str().unwrap()]);
    assert!(iterations(&warm) < iterations(&cold));
}

#[test]
fn reports_do_not_depend_on_time_or_threads() {
    let dir = scratch("repro");
    let mut bodies = Vec::new();
    let mut files = Vec::new();
    for (i, threads) in ["1", "4", "1"].into_iter().enumerate() {
        let sol = dir.join(format!("s{i}.sol"));
        let rep = dir.join(format!("s{i}.json"));
        let cert = dir.join(format!("c{i}.json"));
        let stamp = format!("2020-01-0{}T00:00:00Z", i + 1);
        let o = run(bin()
            .env("AUTOCONV_THREADS", threads)
            .args(["solve", "--T", "30", "--R", "2000", "--timestamp", &stamp, "--out"])
            .arg(&sol)
            .arg("--report")
            .arg(&rep));
        assert_eq!(code(&o), 0);
        let o = run(bin()
            .env("AUTOCONV_THREADS", threads)
            .args(["certify", "--N", "20000", "--timestamp", &stamp, "--solution"])
            .arg(&sol)
            .arg("--report")
            .arg(&cert));
        assert_eq!(code(&o), 0);
        bodies.push((report_body(&rep).to_string(), report_body(&cert).to_string()));
        let text = fs::read_to_string(&sol).unwrap();
        files.push(text.replace(&stamp, ""));
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
    assert!(files.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn exit_codes() {
    let dir = scratch("codes");
    let o = run(bin().args(["certify", "--solution"]).arg(dir.join("missing.sol")));
    assert_eq!(code(&o), 4);
    for args in [
        vec!["solve", "--T", "3", "--R", "10", "--bogus"],
        vec!["certify", "--nope"],
        vec!["family", "--what", "1"],
        vec!["plot-data", "--x"],
        vec!["energy", "--N", "3", "--extra"],
    ] {
        let o = run(bin().args(&args));
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    }
    let (sol, _) = solve(&dir, 10, 100, "t10.sol", &[]);
    let o = run(bin().args(["certify", "--N", "10", "--solution"]).arg(&sol));
    assert_eq!(code(&o), 5);
    let (_, o) = solve(&dir, 40, 4000, "capped.sol", &["--max-iter", "2"]);
    assert_eq!(code(&o), 3);
    let o = run(bin().env("AUTOCONV_THREADS", "zero").args(["energy", "--N", "2", "--trials", "1"]));
    assert_ne!(code(&o), 0);
}

#[test]
fn energy_command() {
    let o = run(bin().args(["energy", "--N", "3", "--trials", "1", "--weights", "uniform"]));
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("0,3,19,")), "{s}");
    let o = run(bin().args(["energy", "--N", "1", "--trials", "2"]));
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l.starts_with("1,1,1,")));
    let a = run(bin().args(["energy", "--N", "64", "--trials", "100", "--seed", "7", "--mu2-lower", "0.574635728"]));
    let b = run(bin().args(["energy", "--N", "64", "--trials", "100", "--seed", "7", "--mu2-lower", "0.574635728"]));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    // an absurd constant must trip the check
    let o = run(bin().args(["energy", "--N", "64", "--trials", "3", "--mu2-lower", "5"]));
    assert_eq!(code(&o), 6);
}

#[test]
fn family_command() {
    let dir = scratch("family");
    let csv = dir.join("f.csv");
    let o = run(bin()
        .args(["family", "--c-min", "0.3", "--c-max", "0.3", "--steps", "1", "--K", "1000", "--out-csv"])
        .arg(&csv));
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("c,value,tail\n"));
    let o = run(bin().args(["family", "--c-min", "0.0", "--c-max", "0.01", "--steps", "3", "--K", "20000"]));
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("value=0.66"), "{}", stdout(&o));
    let o = run(bin().args(["family", "--c-min", "0.8", "--c-max", "0.9"]));
    assert_eq!(code(&o), 5);
}

#[test]
fn plot_data_command() {
    let dir = scratch("plot");
    let (sol, _) = solve(&dir, 0, 100, "box.sol", &[]);
    let csv = dir.join("p.csv");
    let svg = dir.join("p.svg");
    let o = run(bin()
        .args(["plot-data", "--grid-points", "2", "--solution"])
        .arg(&sol)
        .arg("--out-csv")
        .arg(&csv)
        .arg("--out-svg")
        .arg(&svg));
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows, ["x,f,autoconvolution", "-1,0,0", "1,0,0"]);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let o = run(bin().args(["plot-data", "--grid-points", "5", "--solution"]).arg(&sol));
    let s = stdout(&o);
    assert!(s.contains("0,1,1\n"), "{s}");
    assert!(s.contains("-0.5,1,0.5\n"), "{s}");
}
