//! Runs the quick invariant suites with reduced limits.

use std::fmt::Write;

use permclass::verify::{run, Suite, VerifyConfig};

pub fn run_example() -> String {
    let cfg = VerifyConfig {
        order: 10,
        n_count: 7,
        n_bivariate: 7,
        structural_n: 7,
        ..VerifyConfig::default()
    };
    let mut out = String::new();
    for report in run(Suite::All, &cfg) {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "{:8} {} checks, {failed} failed", report.suite, report.checks.len());
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
