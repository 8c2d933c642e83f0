//! An off-by-one in one building block and where each check first notices it.

use std::fmt::Write;

use permclass::class_f::{solve, FOptions, Fault};
use permclass::oracle::cross_validate;

pub fn run_example() -> String {
    let mut out = String::new();
    let opts = FOptions {
        order: 10,
        strict: false,
        fault: Some(Fault::SourceBOffByOne),
    };
    let sol = solve(&opts).unwrap();
    for c in sol.checks.iter().filter(|c| !c.passed) {
        let _ = writeln!(out, "failed: {} at z^{:?}", c.name, c.first_difference);
    }
    let report = cross_validate(7, 7, Some(Fault::SourceBOffByOne)).unwrap();
    if let Some((row, m)) = report.first_failure() {
        let _ = writeln!(out, "oracle: {} first differs at n={}", row.name, m.n);
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
