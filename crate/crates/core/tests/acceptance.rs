//! Acceptance criteria: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed, passing or not.
//! Exits non-zero if any criterion fails. Tolerances are the named constants in
//! `gk_secrecy::validation`.

use std::process::ExitCode;

use gk_secrecy::validation::{run_check, ValidateOptions, CHECK_NAMES};

fn main() -> ExitCode {
    let opts = ValidateOptions::default();
    let mut failed = 0;
    for (i, name) in CHECK_NAMES.iter().enumerate() {
        let id = i + 1;
        match run_check(id, &opts) {
            Ok(outcome) => {
                println!("{outcome}");
                failed += usize::from(!outcome.pass);
            }
            Err(e) => {
                println!("[FAIL] {id:>2} {name:<28} error: {e}");
                failed += 1;
            }
        }
    }
    println!("acceptance: {} criteria, {} passed, {} failed", CHECK_NAMES.len(), CHECK_NAMES.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
