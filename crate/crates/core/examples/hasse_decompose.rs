//! Source-graph decomposition of a permutation, drawn as a grid.

use std::fmt::Write;

use permclass::hasse::{build_hasse, catalytic_statistics, render_grid, Class};
use permclass::perm::perm;

pub fn run_example() -> String {
    let mut out = String::new();
    let p = perm("15 17 11 4 16 1 14 8 6 3 2 13 12 10 9 7 5");
    let g = build_hasse(&p);
    let _ = writeln!(out, "{p}: {} cover edges", g.edges.len());
    out.push_str(&render_grid(&p));

    for (s, class) in [("3 1 4 2 5", Class::F), ("3 5 4 1 2", Class::E)] {
        let q = perm(s);
        let _ = writeln!(out, "\n{q} in {}:", class.name());
        out.push_str(&render_grid(&q));
        let _ = writeln!(out, "{:?}", catalytic_statistics(&q, class).unwrap());
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
