//! Runs every acceptance criterion and prints one PASS/FAIL line for each.
//! Exits nonzero if any criterion fails.

use std::process::ExitCode;

use coarse_menger::acceptance::{self, CriterionReport};

fn main() -> ExitCode {
    let criteria: [fn() -> CriterionReport; 8] = [
        acceptance::criterion_1,
        acceptance::criterion_2,
        acceptance::criterion_3,
        acceptance::criterion_4,
        acceptance::criterion_5,
        acceptance::criterion_6,
        acceptance::criterion_7,
        acceptance::criterion_8,
    ];
    let mut failed = Vec::new();
    for run in criteria {
        let report = run();
        println!("{report}");
        if !report.passed {
            failed.push(report.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 8 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
