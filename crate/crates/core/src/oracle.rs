//! Brute-force ground truth computed from the definitions alone: class counts,
//! A/B/C labels, catalytic-statistic histograms, and their comparison with the
//! generating functions.
//!
//! Generation appends a new last entry to every avoider of length `n - 1` and
//! re-tests the result against the whole basis, a different search tree from
//! the insertion-of-maximum strategy in [`crate::perm`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::check::SolveError;
use crate::class_e::{self, ClassESolution, EOptions};
use crate::class_f::{self, ClassFSolution, FOptions};
use crate::hasse::{catalytic_statistics, CatalyticStatistics, Class, Label};
use crate::perm::{avoids_all, Basis, Permutation};
use crate::series::{MultiSeries, Var};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("n = {n} exceeds the configured limit of {limit}")]
    ResourceLimit { n: usize, limit: usize },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub max_count_n: usize,
    pub max_histogram_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_count_n: 11,
            max_histogram_n: 9,
        }
    }
}

fn check_limit(n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        Err(OracleError::ResourceLimit { n, limit })
    } else {
        Ok(())
    }
}

/// Every way to append a last entry of value `k`, shifting values `>= k` up.
fn append_children(p: &Permutation) -> impl Iterator<Item = Permutation> + '_ {
    let n = p.len() as u16 + 1;
    (1..=n).map(move |k| {
        let mut v: Vec<u16> = p.values().iter().map(|&x| if x >= k { x + 1 } else { x }).collect();
        v.push(k);
        Permutation::new(v).expect("appending keeps a bijection")
    })
}

/// All members of `Av(basis)` of length `n`, in lexicographic order.
pub fn generate(basis: &Basis, n: usize) -> Vec<Permutation> {
    assert!(n >= 1);
    let mut level = vec![Permutation::identity(1)];
    for _ in 1..n {
        level = level
            .par_iter()
            .flat_map_iter(|p| append_children(p).filter(|c| avoids_all(c, basis)).collect::<Vec<_>>())
            .collect();
    }
    level.par_sort_unstable();
    level
}

pub fn brute_count_limited(basis: &Basis, n: usize, limits: &Limits) -> Result<u64, OracleError> {
    check_limit(n, limits.max_count_n)?;
    if n == 1 {
        return Ok(1);
    }
    let parents = generate(basis, n - 1);
    Ok(parents
        .par_iter()
        .map(|p| append_children(p).filter(|c| avoids_all(c, basis)).count() as u64)
        .sum())
}

pub fn brute_count(basis: &Basis, n: usize) -> Result<u64, OracleError> {
    brute_count_limited(basis, n, &Limits::default())
}

/// Statistic value -> number of permutations.
pub type Histogram = BTreeMap<usize, u64>;

/// Per-label histograms of the class-F statistic at length `n`.
pub fn classify_histogram(n: usize, limits: &Limits) -> Result<BTreeMap<Label, Histogram>, OracleError> {
    check_limit(n, limits.max_histogram_n)?;
    let perms = generate(&Basis::class_f(), n);
    let stats: Vec<(Label, usize)> = perms
        .par_iter()
        .map(|p| match catalytic_statistics(p, Class::F) {
            Ok(CatalyticStatistics::F { label, value }) => (label, value),
            other => panic!("generated permutation not in class F: {other:?}"),
        })
        .collect();
    let mut out: BTreeMap<Label, Histogram> = [Label::A, Label::B, Label::C]
        .into_iter()
        .map(|l| (l, Histogram::new()))
        .collect();
    for (label, value) in stats {
        *out.get_mut(&label).expect("A, B or C").entry(value).or_default() += 1;
    }
    Ok(out)
}

/// Joint histogram of (bottom u-tree count, rightmost-is-path) over class E at length `n`.
pub fn e_statistics_histogram(n: usize, limits: &Limits) -> Result<BTreeMap<(usize, bool), u64>, OracleError> {
    check_limit(n, limits.max_histogram_n)?;
    let perms = generate(&Basis::class_e(), n);
    let stats: Vec<(usize, bool)> = perms
        .par_iter()
        .map(|p| match catalytic_statistics(p, Class::E) {
            Ok(CatalyticStatistics::E {
                u_trees,
                rightmost_is_path,
            }) => (u_trees, rightmost_is_path),
            other => panic!("generated permutation not in class E: {other:?}"),
        })
        .collect();
    let mut out = BTreeMap::new();
    for key in stats {
        *out.entry(key).or_default() += 1;
    }
    Ok(out)
}

pub fn catalan(n: usize) -> BigInt {
    // C_n = binom(2n, n) / (n + 1)
    let mut c = BigInt::from(1);
    for k in 0..n {
        c = c * BigInt::from(2 * (2 * k + 1)) / BigInt::from(k + 2);
    }
    c
}

/// Coefficient of `z^n` of `s`, as integer counts indexed by the power of `u`.
fn u_counts(s: &MultiSeries, n: usize) -> Vec<BigRational> {
    let mut v = class_f::u_polynomial(s, n);
    while v.last().is_some_and(|c| *c == BigRational::from_integer(0.into())) {
        v.pop();
    }
    v
}

fn histogram_vec(h: &Histogram) -> Vec<BigRational> {
    let len = h.keys().next_back().map_or(0, |k| k + 1);
    let mut v = vec![BigRational::from_integer(0.into()); len];
    for (&k, &c) in h {
        v[k] = BigRational::from_integer(c.into());
    }
    v
}

fn fmt_vec(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub name: String,
    /// Lengths compared.
    pub range: (usize, usize),
    pub passed: bool,
    pub first_mismatch: Option<Mismatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossReport {
    pub schema: u32,
    pub rows: Vec<Row>,
}

impl CrossReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    /// The failing row whose first mismatch has the smallest length.
    pub fn first_failure(&self) -> Option<(&Row, &Mismatch)> {
        self.rows
            .iter()
            .filter_map(|r| r.first_mismatch.as_ref().map(|m| (r, m)))
            .min_by_key(|(_, m)| m.n)
    }

    pub fn to_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &self.rows {
            let _ = write!(
                out,
                "{:<width$}  n={}..{}  {}",
                r.name,
                r.range.0,
                r.range.1,
                if r.passed { "PASS" } else { "FAIL" }
            );
            if let Some(m) = &r.first_mismatch {
                let _ = write!(out, "  first mismatch at n={}: expected {}, found {}", m.n, m.expected, m.found);
            }
            out.push('\n');
        }
        out
    }
}

/// Compares `(n, expected, found)` triples, keeping the first disagreement.
fn row<I>(name: &str, range: (usize, usize), items: I) -> Row
where
    I: IntoIterator<Item = (usize, String, String)>,
{
    let first_mismatch = items
        .into_iter()
        .find(|(_, e, f)| e != f)
        .map(|(n, expected, found)| Mismatch { n, expected, found });
    Row {
        name: name.to_string(),
        range,
        passed: first_mismatch.is_none(),
        first_mismatch,
    }
}

/// Oracle-versus-series agreement for counts (`n <= n_count`) and bivariate
/// histograms (`n <= n_bivariate`).
pub fn cross_validate_with(
    f: &ClassFSolution,
    e: &ClassESolution,
    n_count: usize,
    n_bivariate: usize,
    limits: &Limits,
) -> Result<CrossReport, OracleError> {
    check_limit(n_count, limits.max_count_n)?;
    check_limit(n_bivariate, limits.max_histogram_n)?;
    let mut rows = Vec::new();
    let coeff = |s: &MultiSeries, n: usize| {
        if n <= s.order() {
            s.coeff(n).to_string()
        } else {
            "beyond truncation".to_string()
        }
    };

    for (class, basis, series) in [
        ("F", Basis::class_f(), &f.f_total),
        ("E", Basis::class_e(), &e.e_1),
    ] {
        let counts: Vec<(usize, String, String)> = (1..=n_count)
            .map(|n| Ok((n, brute_count_limited(&basis, n, limits)?.to_string(), coeff(series, n))))
            .collect::<Result<_, OracleError>>()?;
        rows.push(row(&format!("{class} counts: oracle vs series"), (1, n_count), counts));
        let gen: Vec<(usize, String, String)> = (1..=n_count.min(9))
            .map(|n| {
                let c = crate::perm::enumerate_class(&basis, n, crate::perm::Mode::Count)
                    .expect("count mode has no cap")
                    .count;
                Ok((n, brute_count_limited(&basis, n, limits)?.to_string(), c.to_string()))
            })
            .collect::<Result<_, OracleError>>()?;
        rows.push(row(
            &format!("{class} counts: oracle vs generator"),
            (1, n_count.min(9)),
            gen,
        ));
    }

    let mut per_label: BTreeMap<Label, Vec<(usize, String, String)>> = BTreeMap::new();
    let mut catalan_rows = Vec::new();
    let mut e_rows = Vec::new();
    let mut p_rows = Vec::new();
    for n in 1..=n_bivariate {
        let hist = classify_histogram(n, limits)?;
        for (label, series) in [(Label::A, &f.a_u), (Label::B, &f.b_u), (Label::C, &f.c_u)] {
            per_label.entry(label).or_default().push((
                n,
                fmt_vec(&histogram_vec(&hist[&label])),
                fmt_vec(&u_counts(series, n)),
            ));
        }
        let a_count: u64 = hist[&Label::A].values().sum();
        catalan_rows.push((n, catalan(n).to_string(), a_count.to_string()));

        let joint = e_statistics_histogram(n, limits)?;
        let mut e_marg = Histogram::new();
        let mut p_marg = Histogram::new();
        for (&(k, path), &c) in &joint {
            *e_marg.entry(k).or_default() += c;
            if path {
                *p_marg.entry(k).or_default() += c;
            }
        }
        e_rows.push((n, fmt_vec(&histogram_vec(&e_marg)), fmt_vec(&u_counts(&e.e_u, n))));
        p_rows.push((n, fmt_vec(&histogram_vec(&p_marg)), fmt_vec(&u_counts(&e.p_u, n))));
    }
    let range = (1, n_bivariate);
    rows.push(row("A-count is Catalan", range, catalan_rows));
    for (label, name) in [(Label::A, "A(z,u)"), (Label::B, "B(z,u)"), (Label::C, "C(z,u)")] {
        rows.push(row(
            &format!("{name}: bottom statistic histogram"),
            range,
            per_label.remove(&label).unwrap_or_default(),
        ));
    }
    rows.push(row("E(z,u): u-tree count histogram", range, e_rows));
    rows.push(row("P(z,u): path-rightmost histogram", range, p_rows));
    Ok(CrossReport { schema: 1, rows })
}

/// Solves both classes at the needed order (optionally with a seeded fault in
/// class F) and cross-validates.
pub fn cross_validate(
    n_count: usize,
    n_bivariate: usize,
    fault: Option<class_f::Fault>,
) -> Result<CrossReport, OracleError> {
    let order = n_count.max(n_bivariate).max(1);
    let f = class_f::solve(&FOptions {
        order,
        strict: fault.is_none(),
        fault,
    })?;
    let e = class_e::solve(&EOptions { order, strict: true })?;
    cross_validate_with(&f, &e, n_count, n_bivariate, &Limits::default())
}

/// Marginal of a series at `u = 1` as integers, for comparisons.
pub fn univariate_counts(s: &MultiSeries) -> Vec<BigInt> {
    let s = if s.vars().contains(Var::U) {
        s.at_one(Var::U).expect("declared")
    } else {
        s.clone()
    };
    s.integer_coeffs().expect("counting series")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{perm, Mode};

    #[test]
    fn counts_match_known_values() {
        assert_eq!(brute_count(&Basis::class_f(), 5).unwrap(), 89);
        assert_eq!(brute_count(&Basis::class_e(), 6).unwrap(), 367);
        assert_eq!(brute_count(&Basis::parse(&["21"]).unwrap(), 1).unwrap(), 1);
        assert!(matches!(
            brute_count(&Basis::class_f(), 12),
            Err(OracleError::ResourceLimit { n: 12, limit: 11 })
        ));
    }

    #[test]
    fn generator_strategies_agree() {
        for basis in [Basis::class_f(), Basis::class_e()] {
            for n in 1..=7 {
                let ours = generate(&basis, n);
                let theirs = crate::perm::enumerate_class(&basis, n, Mode::Collect).unwrap();
                assert_eq!(Some(ours), theirs.perms);
            }
        }
    }

    #[test]
    fn small_label_histograms() {
        let l = Limits::default();
        let h3 = classify_histogram(3, &l).unwrap();
        assert_eq!(h3[&Label::A].values().sum::<u64>(), 5);
        assert_eq!(h3[&Label::B], Histogram::from([(2, 1)]));
        assert!(h3[&Label::C].is_empty());
        let h5 = classify_histogram(5, &l).unwrap();
        assert!(h5[&Label::C].values().sum::<u64>() >= 2);
        let total4: u64 = classify_histogram(4, &l).unwrap().values().flat_map(|h| h.values()).sum();
        assert_eq!(total4, 22);
        assert!(classify_histogram(10, &l).is_err());
    }

    #[test]
    fn small_e_histograms() {
        let l = Limits::default();
        assert_eq!(e_statistics_histogram(1, &l).unwrap(), BTreeMap::from([((0, false), 1)]));
        assert_eq!(
            e_statistics_histogram(2, &l).unwrap(),
            BTreeMap::from([((0, false), 1), ((1, true), 1)])
        );
        assert_eq!(e_statistics_histogram(5, &l).unwrap().values().sum::<u64>(), 88);
    }

    #[test]
    fn catalan_numbers() {
        let c: Vec<BigInt> = (1..=6).map(catalan).collect();
        let expected: Vec<BigInt> = [1, 2, 5, 14, 42, 132].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(c, expected);
    }

    #[test]
    fn tiny_cross_validation() {
        let r = cross_validate(4, 4, None).unwrap();
        assert!(r.all_passed(), "{}", r.to_text());
    }

    #[test]
    fn seeded_fault_is_located() {
        let r = cross_validate(5, 5, Some(class_f::Fault::SourceBOffByOne)).unwrap();
        assert!(!r.all_passed());
        let (_, m) = r.first_failure().unwrap();
        assert_eq!(m.n, 3);
    }

    #[test]
    fn append_children_are_permutations() {
        let kids: Vec<Permutation> = append_children(&perm("21")).collect();
        assert_eq!(kids, vec![perm("321"), perm("312"), perm("213")]);
    }
}
