use anafun::suites::{run_suite, SuiteConfig, SUITES};

fn small() -> SuiteConfig {
    SuiteConfig {
        probe_bound: 3,
        size_cap: 5,
        qc_cases: 18,
        generic_species: 12,
        ..SuiteConfig::default()
    }
}

#[test]
fn every_suite_passes_at_small_bounds() {
    let cfg = small();
    for name in SUITES {
        let reports = run_suite(name, &cfg).unwrap();
        assert_eq!(reports.len(), 1);
        let r = &reports[0];
        assert!(r.passed, "{r}");
        assert!(!r.checks.is_empty());
    }
}

#[test]
fn reports_are_deterministic() {
    let cfg = small();
    for name in ["qc-groupoid", "generic-char", "taylor-coend"] {
        assert_eq!(run_suite(name, &cfg).unwrap(), run_suite(name, &cfg).unwrap());
    }
}

#[test]
fn seed_is_reported_and_changes_cases() {
    let a = small();
    let b = SuiteConfig { seed: a.seed + 1, ..small() };
    let (ra, rb) = (run_suite("generic-char", &a).unwrap(), run_suite("generic-char", &b).unwrap());
    assert_eq!(ra[0].seed, a.seed);
    assert_eq!(rb[0].seed, b.seed);
    assert_ne!(ra[0].checks, rb[0].checks);
}

#[test]
fn unknown_suite_is_an_error() {
    assert!(run_suite("prop5", &small()).is_err());

}
