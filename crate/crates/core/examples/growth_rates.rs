//! Growth rates of both classes from their least singularities.

use std::fmt::Write;

use permclass::class_e::{cubic_branch, growth_rate_e};
use permclass::class_f::growth_rate_f;

pub fn run_example() -> String {
    let mut out = String::new();
    let f = growth_rate_f(1e-9);
    let _ = writeln!(
        out,
        "F: singularities {:?}, growth rate {}",
        f.singularities,
        f.growth_rate_exact.as_deref().unwrap_or("?")
    );
    let e = growth_rate_e(1e-9, Some(&cubic_branch(16).unwrap()));
    let _ = writeln!(out, "E: quintic roots {:?}", e.roots);
    let _ = writeln!(out, "E: growth rate {:.6}", e.growth_rate);
    if let Some((n, r)) = e.empirical_ratio {
        let _ = writeln!(out, "E: |E_{n}|/|E_{}| = {r:.4}", n - 1);
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
