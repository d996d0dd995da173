//! Runs every acceptance criterion and prints one line per criterion.
//! Exits nonzero when a criterion outside KNOWN_FAILURES fails, or when a
//! known failure passes or fails for a different reason.

use std::process::ExitCode;

use conserv::suite::{verify_paper, Check, Status, SuiteOptions, CRITERIA};

/// Criteria whose stated value the implementation cannot reproduce, with the
/// diagnostic that shows the measured value.
const KNOWN_FAILURES: &[(u8, &str)] = &[(5, "W(2)/F2 dim M: expected 40, got 52")];

fn unexpected(c: &Check) -> Option<String> {
    match KNOWN_FAILURES.iter().find(|(n, _)| *n == c.criterion) {
        Some((_, diagnostic)) => {
            let failing: Vec<&String> = c.diagnostics.iter().filter(|d| d.starts_with("FAIL")).collect();
            if c.status != Status::Fail {
                Some(format!("{} now passes; drop it from KNOWN_FAILURES", c.name))
            } else if failing.len() != 1 || !failing[0].contains(diagnostic) {
                Some(format!("{} fails differently: {failing:?}", c.name))
            } else {
                None
            }
        }
        None if c.status == Status::Pass => None,
        None => Some(format!("{}: {:?}", c.name, c.diagnostics)),
    }
}

fn main() -> ExitCode {
    let report = verify_paper(&SuiteOptions::default());
    let mut problems = Vec::new();
    if report.checks.len() != CRITERIA as usize {
        problems.push(format!("expected {CRITERIA} checks, got {}", report.checks.len()));
    }
    for c in &report.checks {
        let status = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let known = KNOWN_FAILURES.iter().any(|(n, _)| *n == c.criterion);
        let tag = if known && c.status == Status::Fail { " (known)" } else { "" };
        println!("{}: {status}{tag} ({} ms)", c.name, c.runtime_ms);
        if c.status == Status::Fail {
            for d in c.diagnostics.iter().filter(|d| d.starts_with("FAIL")) {
                println!("    {d}");
            }
        }
        problems.extend(unexpected(c));
    }
    if problems.is_empty() {
        println!("acceptance: ok ({} known failure)", KNOWN_FAILURES.len());
        ExitCode::SUCCESS
    } else {
        for p in &problems {
            eprintln!("unexpected: {p}");
        }
        ExitCode::FAILURE
    }
}
