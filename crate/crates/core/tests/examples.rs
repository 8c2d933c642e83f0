// Each example runs headless and prints something sensible.

macro_rules! example {
    ($name:ident, $path:literal, $($needle:expr),+) => {
        #[allow(dead_code)]
        #[path = $path]
        mod $name;

        #[test]
        fn $name() {
            let out = $name::run_example();
            $(assert!(out.contains($needle), "{}: missing {:?} in\n{out}", stringify!($name), $needle);)+
        }
    };
}

example!(pattern_avoidance, "../examples/pattern_avoidance.rs", "contains 3241: true", "|Av(132)_8| = 1430");
example!(hasse_decompose, "../examples/hasse_decompose.rs", "label: B", "u_trees: 1");
example!(series_arithmetic, "../examples/series_arithmetic.rs", "z^10: 33592", "Exclusive slice");
example!(class_f_pipeline, "../examples/class_f_pipeline.rs", "518971, 2155145", "n=5  A: [14 14 9 4 1]");
example!(class_e_cubic, "../examples/class_e_cubic.rs", "625573, 2881230", "cubic residual is zero: true");
example!(growth_rates, "../examples/growth_rates.rs", "growth rate 4", "5.1955");
example!(cross_validate, "../examples/cross_validate.rs", "PASS");
example!(oeis_compare, "../examples/oeis_compare.rs", "A165540: 12 terms compared, first mismatch None");
example!(fault_injection, "../examples/fault_injection.rs", "B(1) closed form at z^Some(3)", "first differs at n=3");
example!(verify_suites, "../examples/verify_suites.rs", "oracle   10 checks, 0 failed");
