//! Solves the coupled E/P system for Av(1243,2314) and certifies the cubic.

use std::fmt::Write;

use permclass::class_e::{cubic_branch, solve, EOptions};

pub fn run_example() -> String {
    let mut out = String::new();
    let sol = solve(&EOptions { order: 14, strict: true }).unwrap();
    let seq: Vec<String> = sol.sequence().iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "|E_n| = {}", seq.join(", "));
    let _ = writeln!(out, "P(1) = {}", sol.p_1);
    let _ = writeln!(
        out,
        "cubic residual is zero: {}, Newton branch agrees: {}",
        sol.cubic_residual.is_zero(),
        sol.cubic.newton_agrees
    );
    let newton = cubic_branch(14).unwrap();
    let _ = writeln!(out, "branch from z + 2z^2: {newton}");
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
