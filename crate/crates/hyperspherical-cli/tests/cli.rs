//! CLI-level acceptance: determinism (criterion 13), exit codes, and the
//! stability of machine-readable output.

use std::process::{Command, Output};
use std::time::Instant;

fn hsph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsph"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_13_determinism_and_full_suite() {
    let start = Instant::now();
    // repeated runs with a fixed seed are byte-identical on stdout
    let args = [
        "verify",
        "--suite",
        "symmetry",
        "--samples",
        "5",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let first = hsph(&args);
    let second = hsph(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "stdout must be byte-identical");

    let eval_args = [
        "eval", "--fn", "hyper_z", "--l", "3/2", "--m", "1/2", "--n", "-1/2", "--theta", "0.7",
        "--tau", "1.1", "--format", "json",
    ];
    let e1 = hsph(&eval_args);
    let e2 = hsph(&eval_args);
    assert_eq!(e1.stdout, e2.stdout);

    // the full verification suite exits 0
    let all = hsph(&["verify", "--suite", "all", "--samples", "10", "--seed", "7"]);
    assert!(
        all.status.success(),
        "verify --suite all failed:\n{}",
        String::from_utf8_lossy(&all.stdout)
    );
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 300.0, "suite must finish within 5 minutes");
    println!("criterion 13: PASS - byte-identical reruns, verify all exit 0 in {elapsed:.1}s");
}

#[test]
fn exit_codes() {
    // usage error -> 2 (clap default)
    let bad_flag = hsph(&["eval", "--no-such-flag"]);
    assert_eq!(bad_flag.status.code(), Some(2));

    // domain error -> 3
    let bad_fn = hsph(&["eval", "--fn", "nope"]);
    assert_eq!(bad_fn.status.code(), Some(3));
    let bad_index = hsph(&[
        "eval", "--fn", "hyper_z", "--l", "1/2", "--m", "3/2", "--n", "1/2",
    ]);
    assert_eq!(bad_index.status.code(), Some(3));

    // verification failure -> 4 (force with an impossible tolerance)
    let fail = hsph(&[
        "verify",
        "--suite",
        "symmetry",
        "--samples",
        "2",
        "--tol",
        "1e-30",
    ]);
    assert_eq!(fail.status.code(), Some(4));
}

#[test]
fn transform_files_round_trip() {
    let dir = std::env::temp_dir().join("hsph_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spectrum.json");
    let path_str = path.to_str().unwrap();
    let fwd = hsph(&[
        "transform",
        "--fn",
        "exp-decay",
        "--m",
        "0",
        "--n",
        "0",
        "--rho-max",
        "12",
        "--rho-n",
        "80",
        "--out",
        path_str,
    ]);
    assert!(fwd.status.success());
    let inv = hsph(&[
        "transform",
        "--spectrum",
        path_str,
        "--inverse",
        "--at",
        "1.5",
        "--format",
        "json",
    ]);
    assert!(inv.status.success());
    let text = String::from_utf8_lossy(&inv.stdout);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let raw = v["outputs"]["value"]["re"].as_f64().unwrap();
    // inverse carries the stated 1/4pi^2 normalization; the audited
    // constant is 4pi^2
    let chat = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    let expected = (1.0f64 - 1.5).exp();
    assert!(
        (raw * chat - expected).abs() / expected < 1e-2,
        "inverse at 1.5: raw {raw}, normalized {}",
        raw * chat
    );

    // zero test function gives an all-zero spectrum
    let zero = hsph(&[
        "transform",
        "--fn",
        "zero",
        "--m",
        "0",
        "--n",
        "0",
        "--rho-max",
        "5",
        "--rho-n",
        "10",
    ]);
    assert!(zero.status.success());
    let spec: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&zero.stdout)).unwrap();
    for a in spec["a_re"].as_array().unwrap() {
        assert!(a.as_f64().unwrap().abs() < 1e-14);
    }
}

#[test]
fn dirac_demo_csv_and_check() {
    let out = hsph(&["dirac-demo", "--l", "1/2", "--check"]);
    assert!(out.status.success(), "assembly check must pass");
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "r,theta,tau,psi1_re,psi1_im,psi2_re,psi2_im,psidot1_re,psidot1_im,psidot2_re,psidot2_im"
    );
    assert!(lines.count() >= 12, "expected a grid of rows");

    // zero amplitudes give all-zero components
    let zeros = hsph(&["dirac-demo", "--C1", "0", "--C2", "0"]);
    assert!(zeros.status.success());
    let text = String::from_utf8_lossy(&zeros.stdout);
    for line in text.lines().skip(1) {
        for field in line.split(',').skip(3) {
            assert!(field.parse::<f64>().unwrap().abs() < 1e-14);
        }
    }
}

#[test]
fn eval_matches_closed_form() {
    // spot check that the CLI-visible number is the in-process value
    let out = hsph(&[
        "eval", "--fn", "hyper_z", "--l", "1", "--m", "0", "--n", "0", "--theta", "0.4", "--tau",
        "0.9", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let re = v["outputs"]["re"].as_f64().unwrap();
    let im = v["outputs"]["im"].as_f64().unwrap();
    let expected_re = 0.4f64.cos() * 0.9f64.cosh();
    let expected_im = 0.4f64.sin() * 0.9f64.sinh();
    assert!((re - expected_re).abs() < 1e-14);
    assert!((im - expected_im).abs() < 1e-14);
}
