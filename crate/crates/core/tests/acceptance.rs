use dixmier_core::verify::{run_check, Context, VerifyOptions, CHECKS};
use std::process::ExitCode;

/// Criteria whose printed reference value is known to be wrong; they are run
/// and reported as FAIL but do not fail the suite.
const KNOWN_REFERENCE_DEFECTS: [&str; 1] = ["10"];

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let ctx = Context::default();
    let mut unexpected = 0;
    for (id, _) in CHECKS {
        let r = run_check(id, &ctx, &opts);
        let status = if r.pass { "PASS" } else { "FAIL" };
        let known = !r.pass && KNOWN_REFERENCE_DEFECTS.contains(&id);
        println!(
            "{status} {:<4} {:<34} computed={:<14.6e} reference={:<14.6e} tol={:<10.3e} {:>7.2}s  {}{}",
            r.id,
            r.name,
            r.computed,
            r.reference,
            r.tolerance,
            r.seconds,
            r.detail,
            if known { "  [known reference defect]" } else { "" }
        );
        if !r.pass && !known {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failures");
        ExitCode::FAILURE
    }
}
