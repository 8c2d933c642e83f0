//! Containment, bases, and counting small classes by generation.

use std::fmt::Write;

use permclass::oracle::catalan;
use permclass::perm::{contains, enumerate_class, perm, Basis, Mode};

pub fn run_example() -> String {
    let mut out = String::new();
    let host = perm("1573462");
    for pattern in ["3241", "3214", "123"] {
        let _ = writeln!(out, "{host} contains {pattern}: {}", contains(&perm(pattern), &host));
    }

    // Av(132) is counted by the Catalan numbers.
    let av132 = Basis::parse(&["132"]).unwrap();
    for n in 1..=8 {
        let c = enumerate_class(&av132, n, Mode::Count).unwrap().count;
        let _ = writeln!(out, "|Av(132)_{n}| = {c} (Catalan {})", catalan(n));
    }

    for basis in [Basis::class_f(), Basis::class_e()] {
        let counts: Vec<u64> = (1..=8)
            .map(|n| enumerate_class(&basis, n, Mode::Count).unwrap().count)
            .collect();
        let _ = writeln!(out, "Av{basis}: {counts:?}");
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
