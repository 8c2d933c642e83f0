//! Generating functions for Av(1234, 2341), split into the sets A (avoiding 123),
//! B (containing 123 but avoiding 13524 and 14523) and C (the rest).
//!
//! Each functional equation is solved z-adically by fixed-point iteration and
//! then certified against the known closed form. The kernel check substitutes
//! the closed-form `X(1)` back into the equation, recovers `X(u)` by exact
//! division by the kernel, and requires a zero residual.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use serde_json::json;

use crate::check::{Check, CheckLog, SolveError};
use crate::series::{
    exact_division_count, fixed_point_solve, real_roots, MultiSeries, Poly, RealPolynomial,
    SeriesError, SliceForm, Var, VarSet, DEFAULT_ORDER,
};

use SliceForm::{Exclusive, Inclusive};
use Var::{U, V, Y};

/// Deliberate corruptions, used to confirm that the cross-checks notice them.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Fault {
    /// Adds 1 to the `z^3 u^2` coefficient of the B source-graph series.
    SourceBOffByOne,
}

#[derive(Clone, Debug)]
pub struct FOptions {
    pub order: usize,
    /// Abort on the first failed check instead of recording it.
    pub strict: bool,
    pub fault: Option<Fault>,
}

impl Default for FOptions {
    fn default() -> Self {
        FOptions {
            order: DEFAULT_ORDER,
            strict: true,
            fault: None,
        }
    }
}

impl FOptions {
    pub fn with_order(order: usize) -> FOptions {
        FOptions {
            order,
            ..FOptions::default()
        }
    }
}

pub(crate) fn lit(expr: &str, order: usize) -> MultiSeries {
    MultiSeries::polynomial(expr, order).expect("well-formed literal")
}

/// `num / (d_1 d_2 ...)` with each denominator given as a polynomial literal.
pub(crate) fn over(num: MultiSeries, dens: &[&str]) -> Result<MultiSeries, SeriesError> {
    let order = num.order();
    dens.iter().try_fold(num, |acc, d| acc.div(&lit(d, order)))
}

fn zero_in(vars: &[Var], order: usize) -> MultiSeries {
    MultiSeries::zero(order).with_vars(VarSet::of(vars))
}

pub fn sqrt_one_minus_4z(order: usize) -> MultiSeries {
    lit("1 - 4z", order).sqrt().expect("constant term 1")
}

/// `z / (1 - zu)`: fans, one vertex per power of `u` beyond the root.
pub fn a_source(order: usize) -> MultiSeries {
    over(lit("z", order), &["1 - z*u"]).expect("unit denominator")
}

/// `z^3 u^2 / ((1 - z)(1 - zu)(1 - z - zu))`.
pub fn b_source(order: usize) -> MultiSeries {
    over(lit("z^3*u^2", order), &["1 - z", "1 - z*u", "1 - z - z*u"]).expect("unit denominator")
}

/// Adds a source tree to an A-permutation: `A_S(u) (f(1) - u f(u)) / (1 - u)`.
pub fn slice_a(f: &MultiSeries) -> Result<MultiSeries, SeriesError> {
    Ok(&a_source(f.order()) * &f.slice_quotient(U, Inclusive)?)
}

/// Adds one vertex to a partial source graph: `z y^2 (f(1) - f(y)) / (1 - y)`.
pub fn lukasiewicz(f: &MultiSeries) -> Result<MultiSeries, SeriesError> {
    Ok(&lit("z*y^2", f.order()) * &f.slice_quotient(Y, Exclusive)?)
}

pub fn a1_closed(order: usize) -> MultiSeries {
    let s = sqrt_one_minus_4z(order + 1);
    let catalan = (&MultiSeries::one(order + 1) - &s)
        .shift_div(1)
        .expect("valuation 1")
        .scale(&BigRational::new(1.into(), 2.into()));
    &catalan - &MultiSeries::one(order)
}

pub fn a_closed(order: usize) -> Result<MultiSeries, SeriesError> {
    let num = &lit("1 - 2z*u", order) - &sqrt_one_minus_4z(order);
    num.div(&lit("2 - 2u + 2z*u^2", order))
}

pub fn b1_closed(order: usize) -> Result<MultiSeries, SeriesError> {
    let n = order + 3;
    let s = sqrt_one_minus_4z(n);
    let num = &lit("-1 + 8z - 19z^2 + 12z^3", n) + &(&lit("1 - 6z + 9z^2 - 2z^3", n) * &s);
    over(num.shift_div(3)?, &["2 - 8z"])
}

pub fn c1_closed(order: usize) -> Result<MultiSeries, SeriesError> {
    let n = order + 3;
    let s = sqrt_one_minus_4z(n);
    let num = &lit("-1 + 10z - 35z^2 + 52z^3 - 35z^4 + 12z^5", n)
        + &(&lit("1 - 8z + 21z^2 - 22z^3 + 11z^4 - 2z^5", n) * &s);
    over(num.shift_div(3)?, &["2 - 8z", "1 - 3z + z^2"])
}

/// The closed form for the whole class.
pub fn total_closed(order: usize) -> Result<MultiSeries, SeriesError> {
    let s = sqrt_one_minus_4z(order);
    let num = &lit("2 - 10z + 9z^2 + 7z^3 - 4z^4", order) - &(&lit("2 - 8z + 9z^2 - 3z^3", order) * &s);
    let den = &lit("1 - 3z + z^2", order) * &(&lit("1 - 5z + 4z^2", order) + &(&lit("1 - 3z", order) * &s));
    num.div(&den)
}

fn degree_check(log: &mut CheckLog, name: &str, s: &MultiSeries) -> Result<(), SolveError> {
    let r = s.check_degree_bound(|n| n);
    log.push(Check {
        name: format!("{name} degree bound"),
        passed: r.is_ok(),
        first_difference: match &r {
            Err(SeriesError::DegreeBound { z_degree, .. }) => Some(*z_degree),
            _ => None,
        },
        detail: r.err().map_or("catalytic degrees within z-degree".into(), |e| e.to_string()),
    })
}

#[derive(Clone, Debug)]
pub struct SolvedA {
    pub a_s: MultiSeries,
    pub a_u: MultiSeries,
    pub a_1: MultiSeries,
    /// `A'(1)`, the derivative in `u` at `u = 1`.
    pub a_prime_1: MultiSeries,
    pub checks: CheckLog,
}

pub fn solve_a(opts: &FOptions) -> Result<SolvedA, SolveError> {
    let n = opts.order;
    let mut log = CheckLog::new(opts.strict);
    let a_s = a_source(n);
    let phi = |a: &MultiSeries| Ok(&a_s + &slice_a(a)?);
    let a_u = fixed_point_solve(phi, zero_in(&[U], n), n)?;
    let a_1 = a_u.at_one(U)?;
    let a_prime_1 = a_u.derivative(U)?.at_one(U)?;

    log.agree("A(1) closed form", &a_1, &a1_closed(n), n)?;
    if let Some(closed) = log.attempt("A(u) closed form division", a_closed(n))? {
        log.agree("A(u) closed form", &a_u, &closed, n)?;
    }
    log.agree("A idempotent", &phi(&a_u)?, &a_u, n)?;
    // (1 - u + z u^2) A(u) = z (1 - u + A(1))
    let num = &lit("z - z*u", n) + &(&lit("z", n) * &a1_closed(n));
    if let Some(kernel) = log.attempt("A kernel division", num.div(&lit("1 - u + z*u^2", n)))? {
        log.vanishes("A kernel residual", &(&phi(&kernel)? - &kernel))?;
    }
    degree_check(&mut log, "A(u)", &a_u)?;
    Ok(SolvedA {
        a_s,
        a_u,
        a_1,
        a_prime_1,
        checks: log,
    })
}

#[derive(Clone, Debug)]
pub struct SolvedB {
    pub b_s: MultiSeries,
    pub b_ab1: MultiSeries,
    pub b_ab2: MultiSeries,
    pub b_u: MultiSeries,
    pub b_1: MultiSeries,
    pub checks: CheckLog,
}

pub fn solve_b(a: &SolvedA, opts: &FOptions) -> Result<SolvedB, SolveError> {
    let n = opts.order;
    let mut log = CheckLog::new(opts.strict);
    let mut b_s = b_source(n);
    if opts.fault == Some(Fault::SourceBOffByOne) {
        let mut c = b_s.coeff(3).clone();
        c.add_term([2, 0, 0], BigRational::one());
        b_s.set_coeff(3, c);
    }
    let b_ab1 = &b_s * &a.a_u.slice_quotient(U, Inclusive)?;
    let u = MultiSeries::var(U, n);
    let two_positions = (&a.a_prime_1 - &(&u * &a.a_u.slice_quotient(U, Exclusive)?)).divide_by_one_minus(U)?;
    let b_ab2 = &(&b_s + &over(lit("z^2*u^2", n), &["1 - z", "1 - z*u"])?) * &two_positions;
    let fixed = &(&b_s + &b_ab1) + &b_ab2;
    let fan_left = over(lit("z*u", n), &["1 - z*u"])?;
    let phi = |b: &MultiSeries| Ok(&fixed + &(&fan_left * &b.slice_quotient(U, Exclusive)?));
    let b_u = fixed_point_solve(phi, zero_in(&[U], n), n)?;
    let b_1 = b_u.at_one(U)?;

    let closed = b1_closed(n)?;
    log.agree("B(1) closed form", &b_1, &closed, n)?;
    log.agree("B idempotent", &phi(&b_u)?, &b_u, n)?;
    // (1 - u + z u^2) B(u) = (1 - u)(1 - zu) R(u) + z u B(1)
    let num = &(&lit("1 - u - z*u + z*u^2", n) * &fixed) + &(&lit("z*u", n) * &closed);
    if let Some(kernel) = log.attempt("B kernel division", num.div(&lit("1 - u + z*u^2", n)))? {
        log.agree("B kernel solution", &kernel, &b_u, n)?;
        log.vanishes("B kernel residual", &(&phi(&kernel)? - &kernel))?;
    }
    degree_check(&mut log, "B(u)", &b_u)?;
    Ok(SolvedB {
        b_s,
        b_ab1,
        b_ab2,
        b_u,
        b_1,
        checks: log,
    })
}

#[derive(Clone, Debug)]
pub struct SolvedC {
    pub b_s0: MultiSeries,
    pub d_s: MultiSeries,
    pub c_s: MultiSeries,
    pub c_ac1: MultiSeries,
    pub d_1: MultiSeries,
    pub d_2: MultiSeries,
    pub d_3: MultiSeries,
    pub d_4: MultiSeries,
    pub c_ac2: MultiSeries,
    pub c_u: MultiSeries,
    pub c_1: MultiSeries,
    pub checks: CheckLog,
}

pub fn solve_c(a: &SolvedA, b: &SolvedB, opts: &FOptions) -> Result<SolvedC, SolveError> {
    let n = opts.order;
    let mut log = CheckLog::new(opts.strict);

    // Source graphs containing 123, grown vertex by vertex from those with
    // nothing right of the spike.
    let b_s0 = over(lit("z^3*u^2*y^2", n), &["1 - z*u", "1 - z*u*y"])?;
    let d_s = fixed_point_solve(
        |d: &MultiSeries| Ok(&b_s0 + &lukasiewicz(d)?),
        zero_in(&[U, Y], n),
        n,
    )?;
    let c_s = &d_s.at_one(Y)? - &b.b_s;
    let c_ac1 = &c_s * &a.a_u.slice_quotient(U, Inclusive)?;

    // A-permutation extended so that its bottom tree supplies the spike.
    let d_1 = &lit("z*u", n) * &a.a_u.slice_quotient(U, Exclusive)?;
    let d_2 = &over(lit("z*y^2*u^2", n), &["1 - z*y*u"])? * &d_1.divided_difference(U, V)?;
    let d_3 = fixed_point_solve(
        |d: &MultiSeries| Ok(&d_2 + &(&lit("z*y*v", n) * &d.slice_quotient(V, Exclusive)?)),
        zero_in(&[U, V, Y], n),
        n,
    )?;
    let d_3_1 = d_3.at_one(V)?;
    let d_4 = fixed_point_solve(
        |d: &MultiSeries| Ok(&d_3_1 + &lukasiewicz(d)?),
        zero_in(&[U, Y], n),
        n,
    )?;
    let c_ac2 = &d_4.at_one(Y)? - &b.b_ab2;

    let fixed = &(&c_s + &c_ac1) + &c_ac2;
    let phi = |c: &MultiSeries| Ok(&fixed + &(&lit("z*u", n) * &c.slice_quotient(U, Exclusive)?));
    let c_u = fixed_point_solve(phi, zero_in(&[U], n), n)?;
    let c_1 = c_u.at_one(U)?;

    let closed = c1_closed(n)?;
    log.agree("C(1) closed form", &c_1, &closed, n)?;
    log.agree("C idempotent", &phi(&c_u)?, &c_u, n)?;
    // (1 - u + z u) C(u) = (1 - u) R(u) + z u C(1)
    let num = &(&lit("1 - u", n) * &fixed) + &(&lit("z*u", n) * &closed);
    if let Some(kernel) = log.attempt("C kernel division", num.div(&lit("1 - u + z*u", n)))? {
        log.agree("C kernel solution", &kernel, &c_u, n)?;
        log.vanishes("C kernel residual", &(&phi(&kernel)? - &kernel))?;
    }
    degree_check(&mut log, "C(u)", &c_u)?;
    for (name, s) in [("D_S", &d_s), ("D_2", &d_2), ("D_3", &d_3), ("D_4", &d_4)] {
        degree_check(&mut log, name, s)?;
    }
    Ok(SolvedC {
        b_s0,
        d_s,
        c_s,
        c_ac1,
        d_1,
        d_2,
        d_3,
        d_4,
        c_ac2,
        c_u,
        c_1,
        checks: log,
    })
}

/// Singularity candidates of the closed form and the resulting growth rate.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub singularities: Vec<f64>,
    pub least: f64,
    /// Exact value of the least singularity, when rational.
    pub least_exact: Option<String>,
    pub growth_rate: f64,
    pub growth_rate_exact: Option<String>,
}

/// Roots of `1 - 4z` and `1 - 3z + z^2`; the growth rate is the reciprocal of the least.
pub fn growth_rate_f(tolerance: f64) -> GrowthReport {
    let mut roots = Vec::new();
    for coeffs in [&[1, -4][..], &[1, -3, 1][..]] {
        let p = RealPolynomial::from_integers(coeffs).expect("nonzero");
        roots.extend(real_roots(&p, 0.0, 10.0, tolerance));
    }
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    let least = roots.first().expect("1 - 4z has a root").clone();
    let exact = least.exact.clone();
    GrowthReport {
        singularities: roots.iter().map(|r| r.value).collect(),
        least: least.value,
        least_exact: exact.as_ref().map(|q| q.to_string()),
        growth_rate: exact
            .as_ref()
            .map_or(1.0 / least.value, |q| q.recip().to_f64().unwrap_or(f64::NAN)),
        growth_rate_exact: exact.map(|q| q.recip().to_string()),
    }
}

#[derive(Clone, Debug)]
pub struct ClassFSolution {
    pub order: usize,
    pub a_u: MultiSeries,
    pub b_u: MultiSeries,
    pub c_u: MultiSeries,
    pub a_1: MultiSeries,
    pub b_1: MultiSeries,
    pub c_1: MultiSeries,
    pub f_total: MultiSeries,
    pub closed_total: MultiSeries,
    pub intermediates: BTreeMap<&'static str, MultiSeries>,
    pub checks: Vec<Check>,
    /// Exact divisions (slice quotients, divided differences) performed.
    pub exact_divisions: u64,
    pub growth: GrowthReport,
}

impl ClassFSolution {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `|F_1|, |F_2|, ...` up to the truncation order.
    pub fn sequence(&self) -> Vec<num_bigint::BigInt> {
        integer_terms(&self.f_total)
    }
}

pub(crate) fn integer_terms(s: &MultiSeries) -> Vec<num_bigint::BigInt> {
    s.integer_coeffs().expect("integer counting series")[1..].to_vec()
}

/// Solves A, B and C, then compares their sum with the closed form for the class.
pub fn solve(opts: &FOptions) -> Result<ClassFSolution, SolveError> {
    let before = exact_division_count();
    let a = solve_a(opts)?;
    let b = solve_b(&a, opts)?;
    let c = solve_c(&a, &b, opts)?;
    let n = opts.order;
    let f_total = &(&a.a_1 + &b.b_1) + &c.c_1;
    let closed_total = total_closed(n)?;
    let mut log = CheckLog::new(opts.strict);
    log.agree("total closed form", &f_total, &closed_total, n)?;
    let sum_closed = &(&a1_closed(n) + &b1_closed(n)?) + &c1_closed(n)?;
    log.agree("closed forms A(1)+B(1)+C(1)", &sum_closed, &closed_total, n)?;
    let nonneg = [&a.a_1, &b.b_1, &c.c_1]
        .iter()
        .all(|s| s.integer_coeffs().is_some_and(|v| v.iter().all(|x| x.sign() != num_bigint::Sign::Minus)));
    log.push(Check {
        name: "A(1), B(1), C(1) non-negative integers".into(),
        passed: nonneg,
        first_difference: None,
        detail: String::new(),
    })?;
    let exact_divisions = exact_division_count() - before;

    let mut intermediates = BTreeMap::new();
    intermediates.insert("A_S", a.a_s.clone());
    intermediates.insert("B_S", b.b_s.clone());
    intermediates.insert("B_AB1", b.b_ab1.clone());
    intermediates.insert("B_AB2", b.b_ab2.clone());
    intermediates.insert("B_S0", c.b_s0.clone());
    intermediates.insert("D_S", c.d_s.clone());
    intermediates.insert("C_S", c.c_s.clone());
    intermediates.insert("C_AC1", c.c_ac1.clone());
    intermediates.insert("D_1", c.d_1.clone());
    intermediates.insert("D_2", c.d_2.clone());
    intermediates.insert("D_3", c.d_3.clone());
    intermediates.insert("D_4", c.d_4.clone());
    intermediates.insert("C_AC2", c.c_ac2.clone());

    let mut checks = a.checks.into_checks();
    checks.extend(b.checks.into_checks());
    checks.extend(c.checks.into_checks());
    checks.extend(log.into_checks());
    Ok(ClassFSolution {
        order: n,
        a_u: a.a_u,
        b_u: b.b_u,
        c_u: c.c_u,
        a_1: a.a_1,
        b_1: b.b_1,
        c_1: c.c_1,
        f_total,
        closed_total,
        intermediates,
        checks,
        exact_divisions,
        growth: growth_rate_f(1e-9),
    })
}

/// Leading coefficients `z^0 ..= z^k` rendered as polynomials.
pub(crate) fn head(s: &MultiSeries, k: usize) -> Vec<String> {
    (0..=k.min(s.order())).map(|n| s.coeff(n).to_string()).collect()
}

pub(crate) fn ints_json(s: &MultiSeries) -> serde_json::Value {
    json!(integer_terms(s).iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

pub fn report_json(sol: &ClassFSolution) -> serde_json::Value {
    let intermediates: serde_json::Map<String, serde_json::Value> = sol
        .intermediates
        .iter()
        .map(|(k, s)| {
            (
                k.to_string(),
                json!({ "valuation": s.valuation(), "head": head(s, 6) }),
            )
        })
        .collect();
    json!({
        "schema": 1,
        "class": "F",
        "order": sol.order,
        "sequence": ints_json(&sol.f_total),
        "A(1)": ints_json(&sol.a_1),
        "B(1)": ints_json(&sol.b_1),
        "C(1)": ints_json(&sol.c_1),
        "intermediates": intermediates,
        "checks": sol.checks,
        "exact_divisions": sol.exact_divisions,
        "growth": sol.growth,
    })
}

/// Coefficient of `z^n` as a list indexed by the power of `u`.
pub fn u_polynomial(s: &MultiSeries, n: usize) -> Vec<BigRational> {
    let p: &Poly = s.coeff(n);
    p.univariate_coeffs(U).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ints(s: &MultiSeries) -> Vec<i64> {
        s.integer_coeffs()
            .unwrap()
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect()
    }

    #[test]
    fn a_is_catalan() {
        let a = solve_a(&FOptions::with_order(10)).unwrap();
        assert_eq!(ints(&a.a_1), vec![0, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]);
        assert_eq!(a.a_u.coeff(1), &Poly::one());
        assert_eq!(a.a_u.coeff(2), &lit("1 + u", 2).coeff(0).clone());
        assert!(a.checks.all_passed());
        // Total bottom-fan leaves over the five 123-avoiders of length 3.
        assert_eq!(ints(&a.a_prime_1)[3], 4);
    }

    #[test]
    fn b_and_c_pipelines() {
        let opts = FOptions::with_order(9);
        let a = solve_a(&opts).unwrap();
        let b = solve_b(&a, &opts).unwrap();
        let c = solve_c(&a, &b, &opts).unwrap();
        assert_eq!(ints(&b.b_1), vec![0, 0, 0, 1, 8, 45, 220, 1001, 4368, 18564]);
        assert_eq!(ints(&c.c_1), vec![0, 0, 0, 0, 0, 2, 24, 181, 1103, 5949]);
        assert!(b.b_u.eval(U, &BigRational::from_integer(0.into())).unwrap().is_zero());
        assert_eq!(ints(&c.d_s.at_one(Y).unwrap().at_one(U).unwrap())[3], 1);
        assert!(lukasiewicz(&zero_in(&[Y], 6)).unwrap().is_zero());
    }

    #[test]
    fn full_solution_matches_sequence() {
        let sol = solve(&FOptions::with_order(12)).unwrap();
        let expected = [1, 2, 6, 22, 89, 376, 1611, 6901, 29375, 123996, 518971, 2155145];
        let seq: Vec<BigInt> = expected.iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(sol.sequence(), seq);
        assert!(sol.all_passed(), "{:?}", sol.checks.iter().find(|c| !c.passed));
        assert!(sol.exact_divisions > 0);
    }

    #[test]
    fn closed_forms_agree_with_oracle_terms() {
        // Independent expansion of the closed forms.
        assert_eq!(ints(&b1_closed(8).unwrap()), vec![0, 0, 0, 1, 8, 45, 220, 1001, 4368]);
        assert_eq!(ints(&c1_closed(8).unwrap()), vec![0, 0, 0, 0, 0, 2, 24, 181, 1103]);
        assert_eq!(ints(&total_closed(6).unwrap()), vec![0, 1, 2, 6, 22, 89, 376]);
    }

    #[test]
    fn fault_is_reported_not_fatal_in_lenient_mode() {
        let opts = FOptions {
            order: 8,
            strict: false,
            fault: Some(Fault::SourceBOffByOne),
        };
        let sol = solve(&opts).unwrap();
        let bad = sol.checks.iter().find(|c| c.name == "B(1) closed form").unwrap();
        assert!(!bad.passed);
        assert_eq!(bad.first_difference, Some(3));
        let strict = FOptions {
            strict: true,
            ..opts
        };
        assert!(solve(&strict).is_err());
    }

    #[test]
    fn growth_rate_is_four() {
        let g = growth_rate_f(1e-9);
        assert_eq!(g.growth_rate_exact.as_deref(), Some("4"));
        assert_eq!(g.singularities.len(), 3);
        assert!((g.singularities[1] - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-9);
    }
}
