//! Acceptance suite runner: one PASS, FAIL or WARN line per criterion, then
//! its checks. Exits nonzero when any criterion fails; WARN does not fail.

use std::process::ExitCode;

use expmarkov::verify::{self, Status, VerifyOptions};

fn main() -> ExitCode {
    let options = VerifyOptions::default();
    let mut failed = Vec::new();
    for criterion in verify::CRITERIA {
        let report = criterion(&options);
        print!("{report}");
        if report.status == Status::Fail {
            failed.push(report.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
