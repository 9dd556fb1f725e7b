use std::collections::BTreeSet;

use lsc_harness::config::ExperimentConfig;
use lsc_harness::verify::{run_verify, run_verify_with, suite_names, CorruptedDecoder, MANIFEST};
use lsc_harness::HarnessError;

fn small(extra: &str) -> ExperimentConfig {
    let text = format!(
        "[field]\nq = 2\nm = 4\nmodulus = \"1,1,0,0,1\"\n[code]\nlayers = [[3, 1], [4, 1]]\n\
         [run]\ntrials = 10\nseed = 9\n[verify]\ntrials = 500\ndecode_trials = 60\n{extra}"
    );
    ExperimentConfig::parse(&text).unwrap()
}

#[test]
fn every_suite_passes_on_a_correct_implementation() {
    let report = run_verify(&small("")).unwrap();
    assert!(report.passed(), "{}", report.render());
    assert_eq!(report.suites.len(), suite_names().len());
    assert!(report.suites.iter().all(|s| s.tally.checks > 0));
}

#[test]
fn every_suite_passes_over_an_odd_field() {
    let text = "[field]\nq = 3\nm = 3\n[code]\nlayers = [[2, 1], [3, 1]]\n[run]\ntrials = 5\n\
                [verify]\ntrials = 200\ndecode_trials = 20\n";
    let report = run_verify(&ExperimentConfig::parse(text).unwrap()).unwrap();
    assert!(report.passed(), "{}", report.render());
}

#[test]
fn a_corrupted_decoder_breaks_recovery_but_not_the_distance_bound() {
    let c = small("");
    let only = ["layered.layer_distance", "layered.guaranteed"];
    let report = run_verify_with(&c, &CorruptedDecoder, Some(&only)).unwrap();
    assert_eq!(report.suites.len(), 2);
    assert_eq!(report.suite("layered.layer_distance").unwrap().tally.violations, 0);
    let broken = &report.suite("layered.guaranteed").unwrap().tally;
    assert!(broken.violations > 0);
    assert!(broken.first_violation.as_deref().unwrap().contains("did not recover V"));
    assert!(!report.passed());
    assert!(report.render().contains("FAIL  layered.guaranteed"));
}

#[test]
fn the_manifest_covers_every_suite_and_module() {
    let registered: BTreeSet<&str> = suite_names().into_iter().collect();
    let mapped: BTreeSet<&str> = MANIFEST.iter().map(|i| i.suite).collect();
    assert_eq!(registered, mapped);
    let modules: BTreeSet<&str> = MANIFEST.iter().map(|i| i.module).collect();
    let expected = [
        "finite_field",
        "subspace_linalg",
        "gabidulin",
        "lifted_code",
        "layered_code",
        "operator_channel",
        "cli_harness",
    ];
    assert_eq!(modules, expected.into_iter().collect());
}

#[test]
fn exhaustive_suites_name_themselves_when_over_the_cap() {
    let err = run_verify_with(&small("cap = 10\n"), &lsc_core::BoundedDistanceDecoder, Some(&["gabidulin.decode_exhaustive"]))
        .unwrap_err();
    match err {
        HarnessError::Capacity { suite, cap, .. } => {
            assert_eq!(suite, "gabidulin.decode_exhaustive");
            assert_eq!(cap, 10);
        }
        other => panic!("unexpected {other}"),
    }
    assert!(err_text(&small("cap = 10\n")).starts_with("field.coordinates:"));
}

fn err_text(c: &ExperimentConfig) -> String {
    run_verify(c).unwrap_err().to_string()
}

#[test]
fn reports_are_reproducible_across_worker_counts() {
    let only = ["subspace.metric", "layered.monotone_chain", "gabidulin.oracle"];
    let a = run_verify_with(&small("").with_overrides(None, None, Some(1)), &lsc_core::BoundedDistanceDecoder, Some(&only));
    let b = run_verify_with(&small("").with_overrides(None, None, Some(3)), &lsc_core::BoundedDistanceDecoder, Some(&only));
    assert_eq!(a.unwrap(), b.unwrap());
}
