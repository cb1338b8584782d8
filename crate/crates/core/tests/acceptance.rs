//! Runs without the libtest harness so the per-check lines are always shown.

use std::process::ExitCode;

use endoscopy::acceptance::run_all;

fn main() -> ExitCode {
    let results = run_all(0);
    for c in &results {
        println!(
            "[{}] {:>2} {:<24} {:>7.2}s  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.elapsed.as_secs_f64(),
            c.detail
        );
    }
    let failed: Vec<u32> = results.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    println!("acceptance: {} of {} passed", results.len() - failed.len(), results.len());
    if results.len() == 12 && failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
