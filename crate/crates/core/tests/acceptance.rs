//! Acceptance criteria: one line per criterion, then a single assertion.

use std::io::Write;
use std::time::Instant;

use covwit_core::selftest::{run, Level};

const TOTAL_BUDGET_SECS: f64 = 300.0;

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let mut results = run(Level::Full, 20_240_601);
    let total = start.elapsed().as_secs_f64();
    let mut lines: Vec<String> = results.iter().map(|r| r.to_string()).collect();
    let budget_ok = total < TOTAL_BUDGET_SECS;
    lines.push(format!(
        "[{}] 13. full self test within {TOTAL_BUDGET_SECS} s: {total:.2} s",
        if budget_ok { "PASS" } else { "FAIL" }
    ));
    let mut err = std::io::stderr().lock();
    for line in &lines {
        writeln!(err, "{line}").unwrap();
    }
    results.retain(|r| !r.passed);
    let failed: Vec<u8> = results.iter().map(|r| r.id).collect();
    assert!(failed.is_empty() && budget_ok, "failed criteria: {failed:?}, total {total:.2} s");
}
