//! End-to-end tests of the command-line surface: exit codes, JSON shape,
//! and byte-for-byte determinism of seeded invocations.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn order_2b2_2_reports_20() {
    let out = run(&["order", "--type", "2B2", "--q", "2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "twistkit/1");
    assert_eq!(v["order"], 20);
    assert_eq!(v["expected_order"], 20);
    assert_eq!(v["verified_fixed_points"], true);
}

#[test]
fn order_with_exhaustive_cross_check() {
    let out = run(&["order", "--type", "2B2", "--q", "2", "--exhaustive"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["exhaustive_order"], 20);
}

#[test]
fn order_cap_exceeded_is_usage_error() {
    let out = run(&["order", "--type", "2G2", "--q", "27"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cap"), "stderr: {err}");
}

#[test]
fn unknown_type_and_malformed_field_are_usage_errors() {
    let out = run(&["order", "--type", "2F4", "--q", "8"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bruhat", "--type", "B2", "--field", "Q8"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["order", "--type", "2B2", "--q", "4"]);
    assert_eq!(out.status.code(), Some(2)); // even power: no Tits endomorphism
    let out = run(&["report", "--type", "A2"]);
    assert_eq!(out.status.code(), Some(2)); // single root length
}

#[test]
fn bruhat_roundtrip_over_function_field() {
    let out = run(&[
        "bruhat", "--type", "B2", "--field", "F2(t)", "--seed", "5", "--word-len", "4",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["roundtrip_exact"], true);
    assert_eq!(v["command"], "bruhat");
}

#[test]
fn verify_commands_exit_zero() {
    for args in [
        vec!["verify", "--prop", "alpha-squared", "--type", "B2", "--q", "8", "--samples", "25"],
        vec!["verify", "--prop", "chevalley", "--type", "G2", "--q", "27", "--samples", "10"],
        vec!["verify", "--prop", "bruhat", "--type", "B2", "--q", "8", "--samples", "25"],
        vec!["verify", "--prop", "mixed", "--type", "B2", "--field", "F2(t)", "--samples", "10"],
        vec!["verify", "--prop", "torus-image", "--type", "G2", "--samples", "20"],
        vec!["verify", "--prop", "category"],
        vec!["verify", "--prop", "descent"],
    ] {
        let out = run(&args);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = stdout_json(&out);
        assert_eq!(v["failed"], 0, "{args:?}");
    }
}

#[test]
fn verify_mixed_reports_both_directions() {
    let out = run(&[
        "verify", "--prop", "mixed", "--type", "B2", "--field", "F2(t)", "--samples", "12",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["details"]["forward"], "12/12");
    assert_eq!(v["details"]["converse"], "12/12");
    assert_eq!(v["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn descent_reports() {
    let out = run(&["descent", "--type", "B2", "--field", "F8"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["descends"], true);
    assert_eq!(v["twisted_field"]["twister"], "tits");

    let out = run(&["descent", "--type", "B3", "--field", "F2"]);
    let v = stdout_json(&out);
    assert_eq!(v["descends"], false);

    let out = run(&["descent", "--type", "B2", "--field", "F2(t)"]);
    let v = stdout_json(&out);
    assert_eq!(v["descends"], false);
    assert!(v["reason"].as_str().unwrap().contains("not surjective"));
}

#[test]
fn report_dumps_duality_table() {
    let out = run(&["report", "--type", "G2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["system"]["num_roots"], 12);
    assert_eq!(v["weyl_order"], 12);
    assert_eq!(v["long_root_divisibility"], true);
    assert_eq!(v["duality"].as_array().unwrap().len(), 12);
}

#[test]
fn seeded_invocations_are_byte_identical() {
    for args in [
        vec!["order", "--type", "2B2", "--q", "2", "--seed", "9"],
        vec![
            "bruhat", "--type", "G2", "--field", "F27", "--seed", "9", "--word-len", "6",
        ],
        vec![
            "verify", "--prop", "mixed", "--type", "B2", "--field", "F2(t)", "--samples", "8",
            "--seed", "9",
        ],
        vec!["report", "--type", "F4"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "byte-identical output for {args:?}");
    }
}

#[test]
fn bruhat_matrix_file_roundtrip() {
    let out = run(&["bruhat", "--type", "B2", "--field", "F8", "--seed", "2"]);
    assert!(out.status.success());
    let element = stdout_json(&out)["element"].clone();
    let dir = std::env::temp_dir().join("twistkit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("element.json");
    std::fs::write(&path, serde_json::to_string(&element).unwrap()).unwrap();
    let again = run(&["bruhat", "--type", "B2", "--field", "F8", "--matrix-file",
        path.to_str().unwrap()]);
    assert!(again.status.success());
    let v = stdout_json(&again);
    assert_eq!(v["element"], element);
    assert_eq!(v["roundtrip_exact"], true);
}

#[test]
fn serial_and_parallel_orders_agree() {
    let par = run(&["order", "--type", "2B2", "--q", "2"]);
    let ser = run(&["order", "--type", "2B2", "--q", "2", "--serial"]);
    assert!(par.status.success() && ser.status.success());
    assert_eq!(stdout_json(&par)["order"], stdout_json(&ser)["order"]);
}
