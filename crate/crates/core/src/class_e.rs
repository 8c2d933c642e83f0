//! Generating functions for Av(1243, 2314): the building blocks, the coupled
//! equations for `E(u)` and `P(u)`, the cubic satisfied by `E(1)`, and the growth rate.
//!
//! `u` marks the number of u-trees in the bottom subgraph; `P` counts the
//! permutations whose rightmost bottom u-tree is a path.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use crate::check::{Check, CheckLog, SolveError};
use crate::class_f::{head, ints_json, integer_terms, lit, over};
use crate::series::{
    exact_division_count, fixed_point_solve, newton_algebraic, real_roots, MultiSeries,
    RealPolynomial, SeriesError, SliceForm, Var, VarSet, DEFAULT_ORDER,
};

use SliceForm::{Exclusive, Inclusive};
use Var::U;

const KERNEL: &str = "1 - 2z - u*z + u*z^2";

/// The five rational series the equations are assembled from.
#[derive(Clone, Debug)]
pub struct Blocks {
    /// u-trees: `z(1-z)/(1-2z)`.
    pub u: MultiSeries,
    /// Source graphs, `u` marking u-trees.
    pub s: MultiSeries,
    /// Source graphs whose rightmost u-tree is a path.
    pub s_p: MultiSeries,
    /// Source graphs placed beside a path u-tree, with multiplicity.
    pub s_star: MultiSeries,
    /// Placements of the second kind that yield a member of `P`.
    pub s_p_star: MultiSeries,
}

impl Blocks {
    pub fn named(&self) -> BTreeMap<&'static str, MultiSeries> {
        BTreeMap::from([
            ("U", self.u.clone()),
            ("S", self.s.clone()),
            ("S_P", self.s_p.clone()),
            ("S_star", self.s_star.clone()),
            ("S_P_star", self.s_p_star.clone()),
        ])
    }
}

pub fn building_blocks(order: usize) -> Result<Blocks, SeriesError> {
    let n = order;
    Ok(Blocks {
        u: over(lit("z - z^2", n), &["1 - 2z"])?,
        s: over(lit("z - 2z^2", n), &[KERNEL])?,
        s_p: over(lit("u*z^2 - 2u*z^3", n), &["1 - z", KERNEL])?,
        s_star: over(lit("u*z^2", n), &[KERNEL])?,
        // u z (1 - 2z)(1 - uz)
        s_p_star: over(lit("u*z - 2u*z^2 - u^2*z^2 + 2u^2*z^3", n), &["1 - z", KERNEL])?,
    })
}

/// The four slice operators, in the order EE, EP, PE, PP.
pub fn op_ee(b: &Blocks, f: &MultiSeries) -> Result<MultiSeries, SeriesError> {
    Ok(&b.s * &f.slice_quotient(U, Inclusive)?)
}

pub fn op_ep(b: &Blocks, f: &MultiSeries) -> Result<MultiSeries, SeriesError> {
    Ok(&b.s_p * &f.slice_quotient(U, Inclusive)?)
}

pub fn op_pe(b: &Blocks, f: &MultiSeries) -> Result<MultiSeries, SeriesError> {
    Ok(&b.s_star * &f.slice_quotient(U, Exclusive)?)
}

pub fn op_pp(b: &Blocks, f: &MultiSeries) -> Result<MultiSeries, SeriesError> {
    Ok(&b.s_p_star * &f.slice_quotient(U, Exclusive)?)
}

fn step(b: &Blocks, (e, p): &(MultiSeries, MultiSeries)) -> Result<(MultiSeries, MultiSeries), SeriesError> {
    let e_next = &(&b.s + &op_ee(b, e)?) + &op_pe(b, p)?;
    let p_next = &(&b.s_p + &op_ep(b, e)?) + &op_pp(b, p)?;
    Ok((e_next, p_next))
}

/// Simultaneous fixed point of the coupled system for `(E(u), P(u))`.
pub fn solve_ep(b: &Blocks, order: usize) -> Result<(MultiSeries, MultiSeries), SeriesError> {
    let zero = MultiSeries::zero(order).with_vars(VarSet::of(&[U]));
    fixed_point_solve(|x| step(b, x), (zero.clone(), zero), order)
}

/// Residuals of the coupled system after clearing denominators.
pub fn expanded_residuals(
    e: &MultiSeries,
    p: &MultiSeries,
) -> Result<(MultiSeries, MultiSeries), SeriesError> {
    let n = e.order().min(p.order());
    let u = MultiSeries::var(U, n);
    let e1 = e.at_one(U)?;
    let p1 = p.at_one(U)?;
    let k = lit(KERNEL, n);
    let one_minus_u = lit("1 - u", n);
    // 1 - u + E(1) - u E(u)
    let common = &(&one_minus_u + &e1) - &(&u * e);
    let p_diff = &p1 - p;
    let lhs_e = &(&one_minus_u * &k) * e;
    let rhs_e = &lit("z", n) * &(&(&lit("1 - 2z", n) * &common) + &(&lit("u*z", n) * &p_diff));
    let lhs_p = &(&(&one_minus_u * &lit("1 - z", n)) * &k) * p;
    let rhs_p = &lit("u*z - 2u*z^2", n) * &(&(&lit("z", n) * &common) + &(&lit("1 - u*z", n) * &p_diff));
    Ok((&lhs_e - &rhs_e, &lhs_p - &rhs_p))
}

/// Coefficients of the cubic in `F` satisfied by `E(1)`, constant term first.
pub fn cubic(order: usize) -> [MultiSeries; 4] {
    [
        lit("z - 3z^2 + 2z^3", order),
        lit("-1 + 5z - 8z^2 + 5z^3", order),
        lit("2z - 5z^2 + 4z^3", order),
        lit("z^3", order),
    ]
}

pub fn cubic_residual(f: &MultiSeries) -> MultiSeries {
    let c = cubic(f.order());
    let mut acc = c[3].clone();
    for k in (0..3).rev() {
        acc = &(&acc * f) + &c[k];
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct CubicCheck {
    /// First nonzero coefficient of the residual, if any.
    pub residual_first_nonzero: Option<usize>,
    pub newton_agrees: bool,
}

/// Residual of the cubic at `e_1`, and agreement with the branch Newton finds from `z + 2z^2`.
pub fn certify_cubic(e_1: &MultiSeries) -> Result<(MultiSeries, CubicCheck), SeriesError> {
    let n = e_1.order();
    let residual = cubic_residual(e_1);
    let branch = newton_algebraic(&cubic(n), &lit("z + 2z^2", n), n)?;
    let check = CubicCheck {
        residual_first_nonzero: residual.valuation(),
        newton_agrees: branch == *e_1,
    };
    Ok((residual, check))
}

/// The enumerative branch of the cubic, expanded by Newton iteration.
pub fn cubic_branch(order: usize) -> Result<MultiSeries, SeriesError> {
    newton_algebraic(&cubic(order), &lit("z + 2z^2", order), order)
}

pub const QUINTIC: [i64; 6] = [2, -41, 101, -97, 36, -4];

#[derive(Clone, Debug, Serialize)]
pub struct GrowthE {
    pub roots: Vec<f64>,
    pub growth_rate: f64,
    pub bracket: (f64, f64),
    /// `|E_n| / |E_(n-1)|` at the largest available `n`; a trend, not a limit.
    pub empirical_ratio: Option<(usize, f64)>,
}

/// Greatest real root of the quintic, refined to `tolerance`.
pub fn growth_rate_e(tolerance: f64, e_1: Option<&MultiSeries>) -> GrowthE {
    let q = RealPolynomial::from_integers(&QUINTIC).expect("nonzero");
    let roots = real_roots(&q, 0.0, 10.0, tolerance);
    let top = roots.last().expect("the quintic has a root in (5, 6)");
    let empirical_ratio = e_1.and_then(|s| {
        let terms = s.integer_coeffs()?;
        let n = terms.len() - 1;
        if n < 2 {
            return None;
        }
        let ratio = terms[n].to_f64()? / terms[n - 1].to_f64()?;
        Some((n, ratio))
    });
    GrowthE {
        roots: roots.iter().map(|r| r.value).collect(),
        growth_rate: top.value,
        bracket: top.bracket,
        empirical_ratio,
    }
}

#[derive(Clone, Debug)]
pub struct EOptions {
    pub order: usize,
    pub strict: bool,
}

impl Default for EOptions {
    fn default() -> Self {
        EOptions {
            order: DEFAULT_ORDER,
            strict: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassESolution {
    pub order: usize,
    pub e_u: MultiSeries,
    pub p_u: MultiSeries,
    pub e_1: MultiSeries,
    pub p_1: MultiSeries,
    pub blocks: Blocks,
    pub cubic_residual: MultiSeries,
    pub cubic: CubicCheck,
    pub growth: GrowthE,
    pub checks: Vec<Check>,
    pub exact_divisions: u64,
}

impl ClassESolution {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn sequence(&self) -> Vec<BigInt> {
        integer_terms(&self.e_1)
    }
}

pub fn solve(opts: &EOptions) -> Result<ClassESolution, SolveError> {
    let n = opts.order;
    let before = exact_division_count();
    let mut log = CheckLog::new(opts.strict);
    let blocks = building_blocks(n)?;
    let (e_u, p_u) = solve_ep(&blocks, n)?;
    let e_1 = e_u.at_one(U)?;
    let p_1 = p_u.at_one(U)?;

    let (again_e, again_p) = step(&blocks, &(e_u.clone(), p_u.clone()))?;
    log.agree("E idempotent", &again_e, &e_u, n)?;
    log.agree("P idempotent", &again_p, &p_u, n)?;
    let (re, rp) = expanded_residuals(&e_u, &p_u)?;
    log.vanishes("E expanded residual", &re)?;
    log.vanishes("P expanded residual", &rp)?;

    let (cubic_residual, cubic) = certify_cubic(&e_1)?;
    log.vanishes("cubic residual", &cubic_residual)?;
    log.push(Check {
        name: "cubic Newton branch".into(),
        passed: cubic.newton_agrees,
        first_difference: cubic_branch(n)?.first_difference(&e_1),
        detail: "branch seeded with z + 2z^2".into(),
    })?;

    let dominated = (&e_u - &p_u).coeffs().iter().position(|c| c.has_negative_coeff());
    log.push(Check {
        name: "P dominated by E".into(),
        passed: dominated.is_none(),
        first_difference: dominated,
        detail: "E - P has non-negative coefficients".into(),
    })?;
    for (name, s) in [("E(u)", &e_u), ("P(u)", &p_u)] {
        let r = s.check_degree_bound(|k| k);
        log.push(Check {
            name: format!("{name} degree bound"),
            passed: r.is_ok(),
            first_difference: None,
            detail: r.err().map_or("catalytic degrees within z-degree".into(), |e| e.to_string()),
        })?;
    }
    let growth = growth_rate_e(1e-9, Some(&e_1));
    log.push(Check {
        name: "quintic root".into(),
        passed: (growth.growth_rate - 5.1955).abs() < 5e-5,
        first_difference: None,
        detail: format!("{:.10}", growth.growth_rate),
    })?;
    Ok(ClassESolution {
        order: n,
        e_u,
        p_u,
        e_1,
        p_1,
        blocks,
        cubic_residual,
        cubic,
        growth,
        checks: log.into_checks(),
        exact_divisions: exact_division_count() - before,
    })
}

pub fn report_json(sol: &ClassESolution) -> serde_json::Value {
    let blocks: serde_json::Map<String, serde_json::Value> = sol
        .blocks
        .named()
        .iter()
        .map(|(k, s)| (k.to_string(), json!({ "head": head(s, 6) })))
        .collect();
    json!({
        "schema": 1,
        "class": "E",
        "order": sol.order,
        "sequence": ints_json(&sol.e_1),
        "P(1)": ints_json(&sol.p_1),
        "E(u) head": head(&sol.e_u, 6),
        "P(u) head": head(&sol.p_u, 6),
        "blocks": blocks,
        "cubic": sol.cubic,
        "checks": sol.checks,
        "exact_divisions": sol.exact_divisions,
        "growth": sol.growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &MultiSeries) -> Vec<i64> {
        s.integer_coeffs()
            .unwrap()
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect()
    }

    #[test]
    fn blocks_expand() {
        let b = building_blocks(6).unwrap();
        assert_eq!(ints(&b.u), vec![0, 1, 1, 2, 4, 8, 16]);
        assert!(b.s_p.coeff(1).is_zero());
        assert!(!b.s_p.coeff(2).is_zero());
    }

    #[test]
    fn sequence_and_cubic() {
        let sol = solve(&EOptions {
            order: 12,
            strict: true,
        })
        .unwrap();
        assert_eq!(
            ints(&sol.e_1),
            vec![0, 1, 2, 6, 22, 88, 367, 1571, 6861, 30468, 137229, 625573, 2881230]
        );
        assert!(sol.all_passed());
        assert!(sol.cubic_residual.is_zero());
        assert!(ints(&sol.p_1)[1] == 0);
    }

    #[test]
    fn wrong_series_has_cubic_residual() {
        let wrong = over(lit("z", 8), &["1 - 2z"]).unwrap();
        assert_eq!(cubic_residual(&wrong).valuation(), Some(3));
        let starts_with_z = lit("z", 1);
        assert!(cubic_residual(&starts_with_z).coeff(0).is_zero());
    }

    #[test]
    fn quintic_growth() {
        let g = growth_rate_e(1e-9, None);
        assert!((g.growth_rate - 5.1955).abs() < 5e-5);
        assert!(g.bracket.0 > 5.0 && g.bracket.1 < 6.0);
        let q = RealPolynomial::from_integers(&QUINTIC).unwrap();
        assert_eq!(q.eval_f64(5.0), 197.0);
        assert_eq!(q.eval_f64(6.0), -2008.0);
    }

    #[test]
    fn empirical_ratio_trend() {
        let e = MultiSeries::from_integers(&[0, 1, 2, 6, 22, 88, 367, 1571, 6861, 30468, 137229, 625573, 2881230], 12);
        let (n, r) = growth_rate_e(1e-9, Some(&e)).empirical_ratio.unwrap();
        assert_eq!(n, 12);
        assert!((r - 4.605).abs() < 1e-3);
    }
}
