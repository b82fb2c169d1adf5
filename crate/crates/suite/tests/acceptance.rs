use std::io::Write;

use hf_frege_suite::acceptance::{run_criterion, CRITERIA, DEFAULT_SEED};

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let report = run_criterion(id, DEFAULT_SEED);
        // Straight to the stream so the lines show without --nocapture.
        writeln!(std::io::stderr(), "{report}").expect("stderr is writable");
        if !report.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
