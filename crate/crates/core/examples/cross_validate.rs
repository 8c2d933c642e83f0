//! Brute-force histograms against the series pipelines.

use permclass::oracle::cross_validate;

pub fn run_example() -> String {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(7);
    let report = cross_validate(n, n, None).unwrap();
    report.to_text()
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
