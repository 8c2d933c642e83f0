//! Solves the three catalytic equations for Av(1234,2341) and prints every check.

use std::fmt::Write;

use permclass::class_f::{solve, u_polynomial, FOptions};

pub fn run_example() -> String {
    let mut out = String::new();
    let sol = solve(&FOptions::with_order(12)).unwrap();
    let seq: Vec<String> = sol.sequence().iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "|F_n| = {}", seq.join(", "));
    for n in 1..=5 {
        let show = |s| {
            u_polynomial(s, n)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(
            out,
            "n={n}  A: [{}]  B: [{}]  C: [{}]",
            show(&sol.a_u),
            show(&sol.b_u),
            show(&sol.c_u)
        );
    }
    for c in &sol.checks {
        let _ = writeln!(out, "{} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
    }
    let _ = writeln!(out, "{} exact divisions", sol.exact_divisions);
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
