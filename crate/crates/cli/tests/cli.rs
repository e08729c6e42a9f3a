use std::process::{Command, Output};

fn acris(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acris")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn spectral_json_is_the_fixture() {
    let o = acris(&["spectral", "--figure", "e3-crystalline", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), acris_core::group_cohomology::figure_fixture(5).unwrap());
}

#[test]
fn bad_parameters_exit_two() {
    assert_eq!(code(&acris(&["--p", "6", "witt"])), 2);
    assert_eq!(code(&acris(&["spectral", "--figure", "e9-nowhere"])), 2);
    assert_eq!(code(&acris(&["acris", "--conucleo", "2", "4"])), 2);
    assert_eq!(code(&acris(&["crystal", "--datum", "no-such-datum"])), 2);
}

#[test]
fn json_reports_are_reproducible() {
    let args = ["--json", "--seed", "7", "acris", "--samples", "10"];
    let (a, b) = (acris(&args), acris(&args));
    assert_eq!(code(&a), 0);
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("elapsed_ms");
        }
        v
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a)["schema"], "reported-schema/1");
}

#[test]
fn verify_paper_without_timing_is_byte_stable() {
    let args = ["--json", "verify-paper", "--no-timing"];
    let (a, b) = (acris(&args), acris(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn paper_form_has_no_singular_points() {
    let o = acris(&["--json", "hw", "--paper-f", "4", "--scan-m", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let scan = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "singular-scan").unwrap();
    assert_eq!(scan["witness"]["points"], serde_json::json!([]));
}

#[test]
fn tiny_budget_is_not_a_pass() {
    let o = acris(&["--budget-ms", "1", "witt", "--samples", "100000"]);
    assert_ne!(code(&o), 0);
}

#[test]
fn crystal_list_names_the_library() {
    let o = acris(&["crystal", "--list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 11);
}
