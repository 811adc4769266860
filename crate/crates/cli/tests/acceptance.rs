//! One pass/fail line per acceptance criterion; exits nonzero if any fails.
//!
//! Runs the full tier unless `QUARTIC_VERIFY_TIER=quick`.

use quartic_cli::verify::{run_suite, Tier};

fn main() {
    let tier = match std::env::var("QUARTIC_VERIFY_TIER").as_deref() {
        Ok("quick") => Tier::Quick,
        _ => Tier::Full,
    };
    let report = run_suite(tier, 0, |c| println!("{}", c.line()));
    println!("{}", report.table().lines().last().unwrap_or_default());
    if !report.passed {
        std::process::exit(1);
    }
}
