//! End-to-end tests of the `coha` binary: output bytes and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use shuffle_coha::{kappa, DimVector, Flavor, MPoly, Quiver, ShuffleElement};

fn coha(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coha"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("coha-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn quiver_file(name: &str, g: usize) -> PathBuf {
    let q = Quiver::loop_quiver(g);
    write_tmp(name, &q.to_json().to_string())
}

fn element_file(name: &str, el: &ShuffleElement) -> PathBuf {
    write_tmp(name, &el.to_json().to_string())
}

#[test]
fn mul_ones_gives_constant_two() {
    let qf = quiver_file("q0.json", 0);
    let q = Quiver::loop_quiver(0);
    let one = ShuffleElement::generator(q.clone(), "1", 0, Flavor::Cohomological).unwrap();
    let af = element_file("one_a.json", &one);
    let bf = element_file("one_b.json", &one);
    let out = coha(&[
        "mul",
        qf.to_str().unwrap(),
        af.to_str().unwrap(),
        bf.to_str().unwrap(),
        "--flavor",
        "coh",
    ]);
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let p = ShuffleElement::from_json(&v).unwrap();
    assert_eq!(
        p.poly().as_constant().map(|c| c.to_string()),
        Some("2".to_string())
    );
    assert_eq!(p.dim, DimVector::scaled_unit("1", 2));
}

#[test]
fn mul_by_identity_is_byte_identical() {
    let qf = quiver_file("q1.json", 1);
    let q = Quiver::loop_quiver(1);
    let unit = ShuffleElement::unit(q.clone(), Flavor::Cohomological).unwrap();
    let a = kappa(&q, "1", 2, 1).unwrap();
    let uf = element_file("unit.json", &unit);
    let af = element_file("a.json", &a);
    let out = coha(&[
        "mul",
        qf.to_str().unwrap(),
        uf.to_str().unwrap(),
        af.to_str().unwrap(),
        "--flavor",
        "coh",
    ]);
    assert!(out.status.success(), "{out:?}");
    let expected = format!("{}\n", a.to_json());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}

#[test]
fn mul_is_deterministic_across_runs() {
    let qf = quiver_file("q1d.json", 1);
    let q = Quiver::loop_quiver(1);
    let a = ShuffleElement::generator(q.clone(), "1", 2, Flavor::Cohomological).unwrap();
    let b = ShuffleElement::generator(q.clone(), "1", 1, Flavor::Cohomological).unwrap();
    let af = element_file("det_a.json", &a);
    let bf = element_file("det_b.json", &b);
    let args = [
        "mul",
        qf.to_str().unwrap(),
        af.to_str().unwrap(),
        bf.to_str().unwrap(),
        "--flavor",
        "coh",
    ];
    let first = coha(&args);
    let second = coha(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn malformed_json_exits_2() {
    let qf = quiver_file("q0m.json", 0);
    let bad = write_tmp("bad.json", "{ not json");
    let out = coha(&[
        "mul",
        qf.to_str().unwrap(),
        bad.to_str().unwrap(),
        bad.to_str().unwrap(),
        "--flavor",
        "coh",
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    assert!(!out.stderr.is_empty());
}

#[test]
fn flavor_mismatch_exits_3() {
    let qf = quiver_file("q0f.json", 0);
    let q = Quiver::loop_quiver(0);
    let k_one = ShuffleElement::generator(q.clone(), "1", 0, Flavor::KTheoretic).unwrap();
    let ef = element_file("k_one.json", &k_one);
    let out = coha(&[
        "mul",
        qf.to_str().unwrap(),
        ef.to_str().unwrap(),
        ef.to_str().unwrap(),
        "--flavor",
        "coh",
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn wheel_pass_on_kappa() {
    let qf = quiver_file("q1w.json", 1);
    let q = Quiver::loop_quiver(1);
    let k = kappa(&q, "1", 3, 1).unwrap();
    let ef = element_file("kappa131.json", &k);
    let out = coha(&[
        "wheel",
        qf.to_str().unwrap(),
        ef.to_str().unwrap(),
        "--flavor",
        "coh",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"));
}

#[test]
fn wheel_fail_lists_violations_and_exits_1() {
    let qf = quiver_file("q1wf.json", 1);
    let q = Quiver::loop_quiver(1);
    let dim = DimVector::scaled_unit("1", 3);
    let u = shuffle_coha::make_universe(&q, &dim, Flavor::Cohomological).unwrap();
    let one = ShuffleElement::new(q, dim, Flavor::Cohomological, MPoly::one(u)).unwrap();
    let ef = element_file("one_dim3.json", &one);
    let out = coha(&[
        "wheel",
        qf.to_str().unwrap(),
        ef.to_str().unwrap(),
        "--flavor",
        "coh",
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.starts_with("FAIL"));
    assert!(text.contains("violated: edge 1"));
}

#[test]
fn verify_theorem_reports_verified() {
    let out = coha(&["verify-theorem", "--g", "0", "--n", "2", "--d", "0"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verified"], serde_json::json!(true));
    assert_eq!(v["n"], serde_json::json!(2));
}

#[test]
fn verify_theorem_not_found_exits_4() {
    let out = coha(&[
        "verify-theorem",
        "--g",
        "2",
        "--n",
        "2",
        "--d",
        "1",
        "--widen-rounds",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(4), "{out:?}");
}

#[test]
fn census_row_format() {
    let qf = quiver_file("q1c.json", 1);
    let out = coha(&[
        "census",
        qf.to_str().unwrap(),
        "--n",
        "1",
        "--degree",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let row = String::from_utf8(out.stdout).unwrap();
    assert_eq!(row, format!("{},1,3,1,1,true\n", qf.to_str().unwrap()));
}

#[test]
fn census_resource_cap_exits_5() {
    let qf = quiver_file("q1cap.json", 1);
    let out = coha(&[
        "census",
        qf.to_str().unwrap(),
        "--n",
        "2",
        "--degree",
        "4",
        "--max-unknowns",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(5), "{out:?}");
}
