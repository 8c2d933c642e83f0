//! Truncated series with exact coefficients: division, square roots, slice quotients.

use std::fmt::Write;

use permclass::series::{MultiSeries, SliceForm, Var};

pub fn run_example() -> String {
    let mut out = String::new();
    let n = 10;
    let root = MultiSeries::polynomial("1 - 4z", n + 1).unwrap().sqrt().unwrap();
    let catalan = (&MultiSeries::one(n + 1) - &root).shift_div(1).unwrap();
    let _ = writeln!(out, "(1 - sqrt(1-4z))/z = {catalan}");

    let f = MultiSeries::rational_series("z", "1 - z*u", 6).unwrap();
    let _ = writeln!(out, "z/(1-zu) = {f}");
    for form in [SliceForm::Inclusive, SliceForm::Exclusive] {
        let g = f.slice_quotient(Var::U, form).unwrap();
        let _ = writeln!(out, "{form:?} slice: {g}");
    }
    let _ = writeln!(out, "at u = 1: {}", f.at_one(Var::U).unwrap());

    let bad = MultiSeries::polynomial("z*u + 2z^2", 4).unwrap();
    let _ = writeln!(out, "divide_by_one_minus(zu + 2z^2): {:?}", bad.divide_by_one_minus(Var::U));
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
