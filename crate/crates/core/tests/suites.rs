use std::time::Instant;

use ncx_core::suite;

#[test]
fn invariant_suites_pass() {
    let cat = suite::catalog(suite::SUITE_SEED, suite::SUITE_SIZE);
    assert!(cat.len() >= 100);
    let start = Instant::now();
    let results = suite::run_all();
    let report = suite::report(&results);
    eprintln!("{report}elapsed {:?}", start.elapsed());
    assert!(results.iter().all(|r| r.passed()), "{report}");
}
