//! Runs the eleven acceptance criteria and prints one line per criterion.

use std::process::ExitCode;

use qhankel::report::CheckStatus;
use qhankel::suite::{run_all, SuiteOptions};

fn main() -> ExitCode {
    let results = run_all(&SuiteOptions::default());
    let mut ok = true;
    for c in &results {
        let in_time = c.runtime_limit_seconds.is_none_or(|limit| c.seconds < limit);
        let status = c.status();
        let pass = status == CheckStatus::Pass && in_time;
        ok &= pass;
        println!(
            "criterion {:>2}: {} - {} ({} checks, {:.2}s{})",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            c.records.len(),
            c.seconds,
            c.runtime_limit_seconds.map(|l| format!(" of {l:.0}s")).unwrap_or_default(),
        );
        for r in c.records.iter().filter(|r| !r.passed()) {
            println!(
                "    {} {:?}: measured {:e}, tolerance {:e} {:?}",
                r.name, r.status, r.measured, r.tolerance, r.inputs
            );
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        results.iter().filter(|c| c.status() == CheckStatus::Pass).count(),
        results.len()
    );
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
