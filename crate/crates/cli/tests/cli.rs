use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectral-lab"))
        .args(args)
        .env_remove("SPECTRAL_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    stdout(out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn density_semicircle_three_points() {
    let out = run(&["density", "--N", "1", "--measure", "c", "--points", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "x,density\n-1,0\n0,0.636619772367581\n1,0\n");
}

#[test]
fn density_perturbed_is_a_probability_density() {
    let out = run(&["density", "--N", "2", "--measure", "c+p", "--points", "2001"]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2001);
    let values: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(values.iter().all(|&v| v >= 0.0));
    let h = 2.0 / 2000.0;
    let trapezoid = h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[2000]));
    assert!((trapezoid - 1.0).abs() < 1e-4, "{trapezoid}");
}

#[test]
fn density_rejects_bad_input() {
    assert_eq!(run(&["density", "--measure", "c"]).status.code(), Some(2));
    assert_eq!(run(&["density", "--N", "1", "--measure", "c", "--points", "1"]).status.code(), Some(2));
    assert_eq!(run(&["density", "--N", "0", "--measure", "c+p"]).status.code(), Some(2));
    assert_eq!(run(&["density", "--N", "1", "--measure", "q"]).status.code(), Some(2));
}

#[test]
fn density_json_is_one_object() {
    let out = run(&["density", "--N", "1", "--measure", "c", "--points", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "density");
    assert_eq!(v["parameters"]["N"], 1);
    assert_eq!(v["outputs"].as_array().unwrap().len(), 3);
    assert_eq!(v["outputs"][1]["density"].to_string(), "0.636619772367581");
}

#[test]
fn paths_counts_binary_tree() {
    let out = run(&["paths", "--N", "2", "--n", "4"]);
    assert!(out.status.success());
    let counts: Vec<String> = csv_rows(&out).into_iter().map(|r| r[1].clone()).collect();
    assert_eq!(counts, ["1", "1", "3", "5", "15"]);
}

#[test]
fn paths_stays_exact_past_u128() {
    let out = run(&["paths", "--N", "3", "--n", "80"]);
    assert!(out.status.success());
    let last = csv_rows(&out).pop().unwrap();
    assert!(last[1].len() > 39);
    assert!(last[1].bytes().all(|b| b.is_ascii_digit()));
}

#[test]
fn resistance_between_siblings() {
    let out = run(&["resistance", "--N", "2", "--x", "1", "--y", "2"]);
    assert!(out.status.success());
    let row = &csv_rows(&out)[0];
    assert_eq!(row[2], "2");
    assert_eq!(row[4], "2");
    assert_eq!(row[5], "2");
    assert_eq!(row[6], "0");
}

#[test]
fn resistance_rejects_out_of_alphabet_letters() {
    assert_eq!(run(&["resistance", "--N", "2", "--x", "13", "--y", "1"]).status.code(), Some(2));
    assert_eq!(run(&["resistance", "--N", "2", "--x", "1a", "--y", "1"]).status.code(), Some(2));
}

#[test]
fn eigvec_golden_period_ten() {
    for lambda in ["golden-", "golden+"] {
        let out = run(&["eigvec", "--lambda", lambda, "--len", "40"]);
        assert!(out.status.success());
        let rows = csv_rows(&out);
        assert_eq!(rows.len(), 41);
        assert!(rows.iter().all(|r| r[1] == "10"));
    }
    let out = run(&["eigvec", "--lambda", "0", "--len", "25"]);
    assert!(csv_rows(&out).iter().all(|r| r[1] == "1"));
    assert_eq!(run(&["eigvec", "--lambda", "golden", "--len", "25"]).status.code(), Some(2));
}

#[test]
fn jacobi_weights_sum_to_one() {
    for block in ["omega", "d", "semicircle"] {
        let out = run(&["jacobi", "--N", "3", "--M", "12", "--block", block]);
        assert!(out.status.success());
        let mass: f64 = csv_rows(&out).iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
        assert!((mass - 1.0).abs() < 1e-12, "{block}: {mass}");
    }
}

#[test]
fn lattice_ring_eigenvalues() {
    let out = run(&["lattice", "--d", "1", "--L", "4"]);
    let eig: Vec<f64> = csv_rows(&out).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(eig, [0.0, 2.0, 4.0, 2.0]);
}

#[test]
fn moments_three_routes_agree() {
    let out = run(&["moments", "--N", "3", "--max", "12"]);
    assert!(out.status.success());
    for row in csv_rows(&out) {
        let q: f64 = row[3].parse().unwrap();
        let j: f64 = row[4].parse().unwrap();
        let p: f64 = row[5].parse().unwrap();
        assert!((q - p).abs() <= 1e-9 * p.abs().max(1.0));
        assert!((j - p).abs() <= 1e-9 * p.abs().max(1.0));
    }
}

#[test]
fn verify_is_deterministic_and_seeded() {
    let args = ["verify", "walks", "--trials", "20000", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["passed"], true);
    assert!(!v["checks"].as_array().unwrap().is_empty());
}

#[test]
fn verify_is_independent_of_thread_count() {
    let run_with = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_spectral-lab"))
            .args(["verify", "walks", "--N", "1", "--trials", "200000", "--format", "csv"])
            .env("SPECTRAL_LAB_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run_with("1");
    let four = run_with("4");
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn verify_writes_report_file() {
    let path = std::env::temp_dir().join(format!("spectral-lab-eigen-{}.json", std::process::id()));
    let out = run(&["verify", "eigen", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let _ = std::fs::remove_file(&path);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"], "verify");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("checks passed"));
}

#[test]
fn invalid_thread_count_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_spectral-lab"))
        .args(["paths", "--N", "1", "--n", "2"])
        .env("SPECTRAL_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
}
