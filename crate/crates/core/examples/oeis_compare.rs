//! Compares the bundled b-files with the computed sequences.

use std::fmt::Write;

use permclass::class_e::cubic_branch;
use permclass::class_f::total_closed;
use permclass::oeis::{compare, oeis_fetch, FetchOptions, Provenance, SequenceRecord};
use permclass::oracle::univariate_counts;

pub fn run_example() -> String {
    let mut out = String::new();
    let opts = FetchOptions::default();
    for (id, series) in [("A165540", total_closed(12).unwrap()), ("A165539", cubic_branch(12).unwrap())] {
        let (fixture, _) = oeis_fetch(id, 12, &opts).unwrap();
        let ours = SequenceRecord::from_values(id, &univariate_counts(&series)[1..], Provenance::ClosedForm);
        let c = compare(&fixture, &ours);
        let _ = writeln!(out, "{id}: {} terms compared, first mismatch {:?}", c.compared, c.first_mismatch);
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
