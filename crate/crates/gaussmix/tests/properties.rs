//! Randomized property battery: every suite must report zero violations.
//!
//! The suites draw their cases from fixed-seed ChaCha streams, so this test
//! examines the identical case list on every run. Each suite's one-line
//! report is printed so a failure names the property and its worst margin.

use gaussmix::checks::{
    conditioning_free_preservation_suite, standard_suites, tensor_max_suite,
    variance_monotonicity_suite,
};

#[test]
fn standard_property_battery_is_clean() {
    let reports = standard_suites().expect("property battery must run to completion");
    for report in &reports {
        println!("{report}");
        assert!(
            report.is_clean(),
            "property violated: {report}",
        );
    }
    assert_eq!(reports.len(), 10, "battery must cover all ten properties");
}

#[test]
fn battery_results_do_not_depend_on_the_run() {
    let first = standard_suites().unwrap();
    let second = standard_suites().unwrap();
    assert_eq!(first, second, "identical seeds must reproduce identical reports");
}

#[test]
fn cleanliness_is_not_an_artifact_of_the_pinned_seeds() {
    // Re-run a slice of the battery under different seeds; the invariants are
    // universal, so any clean seed choice stays clean.
    for seed in [1u64, 42, 0xDEAD_BEEF] {
        let cond = conditioning_free_preservation_suite(seed, 50).unwrap();
        assert!(cond.is_clean(), "conditioning suite violated at seed {seed}: {cond}");
        let tensor = tensor_max_suite(seed, 30).unwrap();
        assert!(tensor.is_clean(), "tensor-max suite violated at seed {seed}: {tensor}");
        let var = variance_monotonicity_suite(seed, 50).unwrap();
        assert!(var.is_clean(), "variance suite violated at seed {seed}: {var}");
    }
}
