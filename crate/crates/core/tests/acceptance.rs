//! Acceptance criteria 1-10 with a plain harness: one PASS/FAIL line per
//! criterion (plus any failing checks), nonzero exit if any criterion fails.
//! Numeric arguments restrict the run, e.g. `cargo test --test acceptance -- 4 6`.

use std::process::ExitCode;

use ssblab::experiments::{run_criterion, AcceptanceConfig, CRITERIA};

fn main() -> ExitCode {
    let picked: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let cfg = AcceptanceConfig::default();
    let mut failed = Vec::new();
    for (id, _, _) in CRITERIA {
        if !picked.is_empty() && !picked.contains(&id) {
            continue;
        }
        let result = run_criterion(id, &cfg);
        println!("{}", result.summary());
        if !result.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all selected criteria PASS");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAIL for criteria {failed:?}");
        ExitCode::FAILURE
    }
}
