use std::collections::BTreeSet;

use mfl_core::label::ONE;
use mfl_core::verify::{
    run_suite, scenario_cuntz_states, scenario_with_phases, summarize, CatalogChoice, CheckReport,
    Status, SuiteConfig,
};

fn config(grid: &[usize], depth: usize) -> SuiteConfig {
    SuiteConfig {
        grid: grid.to_vec(),
        depth,
        ..SuiteConfig::default()
    }
}

fn keys(reports: &[CheckReport]) -> BTreeSet<(String, String)> {
    reports
        .iter()
        .map(|r| (r.name.clone(), r.subject.clone()))
        .collect()
}

#[test]
fn repeated_runs_are_identical() {
    let c = config(&[2, 3], 3);
    let a = run_suite(&c).unwrap();
    let b = run_suite(&c).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn smaller_grid_gives_a_strict_subset_that_passes() {
    let small = run_suite(&config(&[2, 3], 3)).unwrap();
    let large = run_suite(&config(&[2, 3, 4], 3)).unwrap();
    let (small_keys, large_keys) = (keys(&small), keys(&large));
    assert!(
        small_keys.is_subset(&large_keys),
        "{:?}",
        small_keys.difference(&large_keys).collect::<Vec<_>>()
    );
    assert!(small_keys.len() < large_keys.len());
    assert!(
        small.iter().all(|r| r.status == Status::Pass),
        "{:?}",
        small.iter().find(|r| r.status != Status::Pass)
    );
}

#[test]
fn every_failure_carries_a_counterexample_and_findings_are_the_f43_displays() {
    let reports = run_suite(&config(&[2, 3, 4], 3)).unwrap();
    for r in &reports {
        if r.status == Status::Fail {
            assert!(r.counterexample.is_some(), "{r}");
        }
    }
    let findings: Vec<&str> = reports
        .iter()
        .filter(|r| r.status == Status::Finding)
        .map(|r| r.subject.as_str())
        .collect();
    assert_eq!(findings.len(), 2, "{findings:?}");
    assert!(findings.iter().all(|s| s.contains("F43")), "{findings:?}");
    assert_eq!(summarize(&reports).fail, 0);
}

#[test]
fn empty_catalog_reports_are_vacuous() {
    let c = SuiteConfig {
        catalog: CatalogChoice::Empty,
        suite: "functor".into(),
        ..config(&[2, 3], 3)
    };
    let reports = run_suite(&c).unwrap();
    assert!(!reports.is_empty());
    let vacuous: BTreeSet<&str> = reports
        .iter()
        .filter(|r| r.status == Status::Vacuous)
        .map(|r| r.name.as_str())
        .collect();
    for name in [
        "functor.cuntz_closure",
        "functor.composition",
        "functor.inverse",
        "functor.morphisms",
    ] {
        assert!(vacuous.contains(name), "{name} not vacuous");
    }
    assert!(reports.iter().all(|r| r.status != Status::Fail));
}

#[test]
fn suite_selection_by_prefix_and_name() {
    let c = SuiteConfig {
        suite: "series".into(),
        ..config(&[2], 2)
    };
    let reports = run_suite(&c).unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r.name.starts_with("series.")));

    let c = SuiteConfig {
        suite: "series.r_oracle".into(),
        ..config(&[2], 2)
    };
    assert!(run_suite(&c)
        .unwrap()
        .iter()
        .all(|r| r.name == "series.r_oracle"));
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(run_suite(&config(&[2], 0)).is_err());
    assert!(run_suite(&config(&[1, 2], 2)).is_err());
    let c = SuiteConfig {
        tolerance: 0.0,
        ..config(&[2], 2)
    };
    assert!(run_suite(&c).is_err());
}

#[test]
fn cuntz_state_scenarios() {
    for n in [2, 3, 4] {
        let r = scenario_cuntz_states(n);
        assert_eq!(r.status, Status::Pass, "{r}");
        assert!(r.samples > 0);
    }
    // Identical sources: still passes, and the report says so.
    let control = scenario_with_phases(2, ONE, ONE, &SuiteConfig::default());
    assert_eq!(control.status, Status::Pass, "{control}");
    assert!(control.detail.contains("degenerate"), "{}", control.detail);
}
