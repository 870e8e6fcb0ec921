use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inner-fourier"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

fn coeffs_json(args: &[&str]) -> Value {
    let o = run(&[&["coeffs"], args].concat());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

/// Parsed reconstruct CSV rows: theta, rho, value, conjugate, converged.
fn csv_rows(text: &str) -> Vec<(f64, f64, f64, f64, bool)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,rho,value,conjugate,converged"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
                f[4] == "true",
            )
        })
        .collect()
}

fn write_coeffs(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let o = run(&[&["coeffs"], args, &["--out", &p]].concat());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    p
}

#[test]
fn square_wave_coefficients_follow_the_odd_harmonic_pattern() {
    let v = coeffs_json(&["--fn", "square", "--K", "64", "--exact"]);
    let beta = floats(&v["fourier"]["beta"]);
    assert_eq!(beta.len(), 64);
    for (i, b) in beta.iter().enumerate() {
        let k = (i + 1) as f64;
        let want = if (i + 1) % 2 == 1 {
            4.0 / (PI * k)
        } else {
            0.0
        };
        assert!((b - want).abs() < 1e-15, "k = {k}: {b}");
    }
    // Quadrature with the mean value at the jumps converges as O(h^2).
    let q = coeffs_json(&["--fn", "square", "--K", "64", "--M", "4096"]);
    let qb = floats(&q["fourier"]["beta"]);
    for (got, want) in qb.iter().zip(&beta) {
        assert!((got - want).abs() < 1e-3);
    }
    assert!(floats(&q["fourier"]["alpha"])
        .iter()
        .all(|a| a.abs() < 1e-12));
    assert_eq!(q["M"], 4096);
}

#[test]
fn delta_coefficients_at_the_origin() {
    let v = coeffs_json(&["--fn", "delta", "--theta1", "0", "--K", "8"]);
    assert_eq!(v["source"], "delta");
    assert!(v["M"].is_null());
    for a in floats(&v["fourier"]["alpha"]) {
        assert!((a - 1.0 / PI).abs() < 1e-15);
    }
    assert!((v["fourier"]["alpha0"].as_f64().unwrap() - 1.0 / PI).abs() < 1e-15);
    let c_re = floats(&v["taylor"]["c_re"]);
    assert!((c_re[0] - 0.5 / PI).abs() < 1e-15);
    assert!((c_re[1] - 1.0 / PI).abs() < 1e-15);
}

#[test]
fn zero_function_gives_zero_coefficients() {
    let v = coeffs_json(&["--fn", "zero", "--K", "4"]);
    assert_eq!(v["fourier"]["K"], 4);
    assert_eq!(v["taylor"]["K"], 4);
    for key in ["alpha", "beta"] {
        assert!(floats(&v["fourier"][key]).iter().all(|&x| x == 0.0));
    }
    assert!(floats(&v["taylor"]["c_re"]).iter().all(|&x| x == 0.0));
    assert!(stdout(&run(&["coeffs", "--fn", "zero", "--K", "4"])).contains("0.0000000000000000e0"));
}

#[test]
fn csv_samples_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let m = 64;
    let mut text = String::from("theta,value\n");
    for i in 0..m {
        let t = (2 * i as i64 - m as i64) as f64 * PI / m as f64;
        text.push_str(&format!(
            "{t},{}\n",
            3.0 * (2.0 * t).cos() - (5.0 * t).sin()
        ));
    }
    std::fs::write(&path, text).unwrap();
    let v = coeffs_json(&["--csv", path.to_str().unwrap(), "--K", "8"]);
    let (alpha, beta) = (
        floats(&v["fourier"]["alpha"]),
        floats(&v["fourier"]["beta"]),
    );
    assert!((alpha[1] - 3.0).abs() < 1e-13);
    assert!((beta[4] + 1.0).abs() < 1e-13);
    assert_eq!(v["M"], 64);
}

#[test]
fn usage_and_io_errors_map_to_exit_codes() {
    assert_eq!(
        run(&["coeffs", "--fn", "bogus", "--K", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["coeffs", "--fn", "poisson", "--r", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["coeffs", "--fn", "square", "--K", "64", "--M", "8"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["coeffs"]).status.code(), Some(2));
    assert_eq!(
        run(&["coeffs", "--csv", "/nonexistent/f.csv"])
            .status
            .code(),
        Some(3)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "theta,value\n0.0,abc\n").unwrap();
    let o = run(&["coeffs", "--csv", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.csv"));

    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"nothing\": 1}").unwrap();
    assert_eq!(
        run(&[
            "reconstruct",
            "--coeffs",
            junk.to_str().unwrap(),
            "--rho",
            "0.5"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn reconstruct_square_wave_along_the_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_coeffs(
        dir.path(),
        "sq.json",
        &["--fn", "square", "--K", "2000", "--exact"],
    );
    let o = run(&[
        "reconstruct",
        "--coeffs",
        &f,
        "--theta",
        "-3pi/4,-pi/2,-pi/4,pi/4,pi/2,3pi/4",
        "--schedule",
        "1..14",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 6);
    for (theta, rho, value, _, _) in rows {
        assert_eq!(rho, 1.0 - 2f64.powi(-14));
        assert!(
            (value - theta.signum()).abs() <= 0.02,
            "theta = {theta}: {value}"
        );
    }
}

#[test]
fn reconstruct_sweep_lists_every_radius() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_coeffs(dir.path(), "c.json", &["--fn", "cos_1", "--K", "4"]);
    let o = run(&[
        "reconstruct",
        "--coeffs",
        &f,
        "--theta",
        "0",
        "--schedule",
        "1..3",
        "--sweep",
    ]);
    let rows = csv_rows(&stdout(&o));
    let rhos: Vec<f64> = rows.iter().map(|r| r.1).collect();
    assert_eq!(rhos, vec![0.5, 0.75, 0.875]);
    for (_, rho, value, conj, _) in rows {
        // cos theta continues to rho cos theta, its conjugate to rho sin theta.
        assert!((value - rho).abs() < 1e-15);
        assert!(conj.abs() < 1e-15);
    }
}

#[test]
fn reconstruct_delta_traces_the_poisson_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_coeffs(
        dir.path(),
        "d.json",
        &["--fn", "delta", "--theta1", "0.5", "--K", "5000"],
    );
    let out = dir.path().join("curve.csv");
    let o = run(&[
        "reconstruct",
        "--coeffs",
        &f,
        "--theta",
        "-pi:pi:41",
        "--rho",
        "0.99",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 41);
    for (theta, _, value, _, converged) in rows {
        let rho: f64 = 0.99;
        let want =
            (1.0 - rho * rho) / (2.0 * PI * (1.0 + rho * rho - 2.0 * rho * (theta - 0.5).cos()));
        assert!(
            (value - want).abs() < 1e-12,
            "theta = {theta}: {value} vs {want}"
        );
        assert!(converged);
    }
}

#[test]
fn reconstruct_zero_and_bare_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_coeffs(dir.path(), "z.json", &["--fn", "zero", "--K", "4"]);
    let o = run(&[
        "reconstruct",
        "--coeffs",
        &f,
        "--theta",
        "-1:1:5",
        "--rho",
        "0.7",
    ]);
    for (_, _, value, conj, converged) in csv_rows(&stdout(&o)) {
        assert_eq!((value, conj, converged), (0.0, 0.0, true));
    }

    let bare = dir.path().join("taylor.json");
    std::fs::write(&bare, r#"{"K": 1, "c_re": [0.0, 1.0], "c_im": [0.0, 0.0]}"#).unwrap();
    let o = run(&[
        "reconstruct",
        "--coeffs",
        bare.to_str().unwrap(),
        "--theta",
        "pi/2",
        "--rho",
        "0.5",
    ]);
    let rows = csv_rows(&stdout(&o));
    // w = z at z = 0.5i.
    assert!(rows[0].2.abs() < 1e-16 && (rows[0].3 - 0.5).abs() < 1e-16);

    let fourier = dir.path().join("fourier.json");
    std::fs::write(
        &fourier,
        r#"{"K": 1, "alpha0": 2.0, "alpha": [0.0], "beta": [1.0]}"#,
    )
    .unwrap();
    let o = run(&[
        "reconstruct",
        "--coeffs",
        fourier.to_str().unwrap(),
        "--theta",
        "pi/2",
        "--rho",
        "0.5",
    ]);
    assert!((csv_rows(&stdout(&o))[0].2 - 1.5).abs() < 1e-15);

    assert_eq!(
        run(&["reconstruct", "--coeffs", &f, "--rho", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["reconstruct", "--coeffs", &f, "--theta", "0:1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_coeffs(
        dir.path(),
        "p.json",
        &["--fn", "poisson", "--r", "0.3", "--K", "32"],
    );
    let args = [
        "reconstruct",
        "--coeffs",
        f.as_str(),
        "--theta",
        "-pi:pi:17",
    ];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    let c = Command::new(env!("CARGO_BIN_EXE_inner-fourier"))
        .args(args)
        .env("INNER_FOURIER_THREADS", "1")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(a, b);
    assert_eq!(a, c);
    let bad = Command::new(env!("CARGO_BIN_EXE_inner-fourier"))
        .args(args)
        .env("INNER_FOURIER_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let o = run(&["verify", "ortho", "--K", "32"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS gram.offdiag"));

    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("h.json");
    let o = run(&[
        "verify",
        "--suite",
        "hilbert",
        "--K",
        "16",
        "--rho0",
        "0.5",
        "--matrix",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["gram"]["taylor[rho0=0.5]"]["size"], 17);
    assert_eq!(
        report["gram"]["taylor[rho0=0.5]"]["matrix"]
            .as_array()
            .unwrap()
            .len(),
        17
    );

    let o = run(&["verify", "classify", "--family", "poly", "--p", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("bounded=true"));
    let o = run(&[
        "verify", "classify", "--family", "exp", "--b", "1.1", "--K", "1024",
    ]);
    assert!(stdout(&o).contains("bounded=false"));

    let sweep = dir.path().join("sweep.csv");
    let o = run(&["verify", "kernels", "--sweep", sweep.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&sweep).unwrap();
    assert!(text.starts_with("N,discrepancy\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn verify_failures_exit_one_and_name_the_check() {
    // A coarse grid aliases the probe kernel; the suite reports it rather
    // than erroring.
    let o = run(&["verify", "complete", "--rho", "0.99", "--M", "64"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL eigenrelation"));
    assert!(stdout(&o).contains("suite complete: FAIL (eigenrelation"));
}
