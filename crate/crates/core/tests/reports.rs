use acris_core::group_cohomology::{figure_fixture, FIGURES};
use acris_core::report::{RunConfig, Status, SCHEMA};
use acris_core::verify::{run_check, verify_paper, CHECKS};

fn config(seed: u64) -> RunConfig {
    RunConfig { seed, ..RunConfig::default() }
}

#[test]
fn same_seed_same_bytes() {
    let a = verify_paper(&config(5)).without_timing().to_json();
    let b = verify_paper(&config(5)).without_timing().to_json();
    assert_eq!(a, b);
    assert!(a.contains(SCHEMA));
    assert!(!a.contains("elapsed_ms"));
}

#[test]
fn verdicts_do_not_depend_on_seed() {
    let one = verify_paper(&config(1));
    let two = verify_paper(&config(2));
    let verdicts = |r: &acris_core::report::Report| r.checks.iter().map(|c| (c.id, c.status)).collect::<Vec<_>>();
    assert_eq!(verdicts(&one), verdicts(&two));
    assert_eq!(one.exit_code(), 0);
}

#[test]
fn tampered_fixture_fails_with_witness() {
    let dir = std::env::temp_dir().join(format!("acris-fixtures-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for n in FIGURES {
        let mut s = figure_fixture(n).unwrap().to_string();
        if n == 5 {
            s = s.replacen("\"rank\": 2", "\"rank\": 3", 1);
        }
        std::fs::write(dir.join(format!("figure{n}.json")), s).unwrap();
    }
    let cfg = RunConfig { fixtures_dir: Some(dir.clone()), ..RunConfig::default() };
    let r = run_check(&CHECKS[4], &cfg, None);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(r.status, Status::Fail);
    assert!(r.detail.contains("figure 5"), "{}", r.detail);
    assert_eq!(r.witness.unwrap()["figure"], 5);
}

#[test]
fn exhausted_budget_is_never_a_pass() {
    let r = run_check(&CHECKS[5], &RunConfig::default(), Some(std::time::Duration::from_millis(1)));
    assert_eq!(r.status, Status::Inconclusive, "{}", r.detail);
    let mut report = acris_core::report::Report::new("t", &RunConfig::default());
    report.push(r);
    assert_eq!(report.exit_code(), 3);
}
