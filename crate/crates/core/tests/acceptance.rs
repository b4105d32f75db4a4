use std::io::Write;

use honeycomb::verify::{run_criterion, NUM_CRITERIA};

#[test]
fn acceptance_suite() {
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for id in 1..=NUM_CRITERIA {
        let r = run_criterion(id, 2);
        writeln!(out, "{r}").unwrap();
        if !r.passed {
            failed.push(id);
        }
    }
    writeln!(
        out,
        "acceptance: {}/{} passed",
        NUM_CRITERIA - failed.len(),
        NUM_CRITERIA
    )
    .unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
