//! Invariant suites over every module, each producing a list of named checks.

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::check::Check;
use crate::class_e::{self, EOptions};
use crate::class_f::{self, FOptions};
use crate::hasse;
use crate::oeis::{self, compare, FetchOptions, Provenance, SequenceRecord};
use crate::oracle;
use crate::perm::{all_permutations, avoids_all, contains, enumerate_class, perm, Basis, Mode, Permutation};
use crate::series::{exact_division_count, newton_algebraic, MultiSeries, Poly, SliceForm, Var, VarSet};

/// `|F_1| ..= |F_12|`.
pub const F_PUBLISHED: [u64; 12] = [1, 2, 6, 22, 89, 376, 1611, 6901, 29375, 123996, 518971, 2155145];
/// `|E_1| ..= |E_12|`.
pub const E_PUBLISHED: [u64; 12] = [1, 2, 6, 22, 88, 367, 1571, 6861, 30468, 137229, 625573, 2881230];

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Perm,
    Hasse,
    Series,
    ClassF,
    ClassE,
    Oracle,
    Oeis,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Perm,
        Suite::Hasse,
        Suite::Series,
        Suite::ClassF,
        Suite::ClassE,
        Suite::Oracle,
        Suite::Oeis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Perm => "perm",
            Suite::Hasse => "hasse",
            Suite::Series => "series",
            Suite::ClassF => "class-f",
            Suite::ClassE => "class-e",
            Suite::Oracle => "oracle",
            Suite::Oeis => "oeis",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Suite, String> {
        std::iter::once(Suite::All)
            .chain(Suite::EACH)
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub order: usize,
    pub n_count: usize,
    pub n_bivariate: usize,
    /// Largest length for the exhaustive structural checks.
    pub structural_n: usize,
    pub fixture_dir: PathBuf,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            order: crate::series::DEFAULT_ORDER,
            n_count: 10,
            n_bivariate: 9,
            structural_n: 9,
            fixture_dir: oeis::default_fixture_dir(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn ok(name: &str, result: Result<(), String>) -> Check {
    Check {
        name: name.to_string(),
        passed: result.is_ok(),
        first_difference: None,
        detail: result.err().unwrap_or_default(),
    }
}

fn error_check(name: &str, e: impl std::fmt::Display) -> Check {
    ok(name, Err(e.to_string()))
}

/// Runs one suite; `Suite::All` runs each in turn.
pub fn run(suite: Suite, cfg: &VerifyConfig) -> Vec<SuiteReport> {
    match suite {
        Suite::All => Suite::EACH.iter().flat_map(|&s| run(s, cfg)).collect(),
        s => vec![SuiteReport {
            suite: s.name(),
            checks: match s {
                Suite::Perm => perm_suite(),
                Suite::Hasse => hasse_suite(cfg.structural_n),
                Suite::Series => series_suite(),
                Suite::ClassF => class_f_suite(cfg.order),
                Suite::ClassE => class_e_suite(cfg.order),
                Suite::Oracle => oracle_suite(cfg),
                Suite::Oeis => oeis_suite(cfg),
                Suite::All => unreachable!(),
            },
        }],
    }
}

fn perms_up_to(n: usize) -> Vec<Permutation> {
    (1..=n).flat_map(all_permutations).collect()
}

fn perm_suite() -> Vec<Check> {
    let mut out = Vec::new();
    let small = perms_up_to(5);
    let m: Vec<Vec<bool>> = small
        .par_iter()
        .map(|a| small.iter().map(|b| contains(a, b)).collect())
        .collect();
    let k = small.len();
    let reflexive = (0..k).all(|i| m[i][i]);
    let antisymmetric = (0..k).all(|i| (0..k).all(|j| i == j || !(m[i][j] && m[j][i])));
    let transitive = (0..k).into_par_iter().all(|i| {
        (0..k).all(|j| !m[i][j] || (0..k).all(|l| !m[j][l] || m[i][l]))
    });
    out.push(ok(
        "containment is a partial order (length <= 5)",
        if reflexive && antisymmetric && transitive {
            Ok(())
        } else {
            Err(format!("reflexive {reflexive}, antisymmetric {antisymmetric}, transitive {transitive}"))
        },
    ));
    out.push(ok(
        "containment of 3241 but not 3214 in 1573462",
        if contains(&perm("3241"), &perm("1573462")) && !contains(&perm("3214"), &perm("1573462")) {
            Ok(())
        } else {
            Err("containment examples disagree".into())
        },
    ));
    for (name, basis) in [("F", Basis::class_f()), ("E", Basis::class_e())] {
        let closed = (1..=7).try_for_each(|n| {
            let e = enumerate_class(&basis, n, Mode::Collect).map_err(|e| e.to_string())?;
            for p in e.perms.unwrap_or_default() {
                for pos in 1..=p.len() {
                    if let Some(q) = p.delete(pos) {
                        if !avoids_all(&q, &basis) {
                            return Err(format!("{} minus position {pos} leaves the class", p.compact()));
                        }
                    }
                }
            }
            Ok(())
        });
        out.push(ok(&format!("class {name} is closed downward (n <= 7)"), closed));
        let filtered = (1..=7).try_for_each(|n| {
            let gen = enumerate_class(&basis, n, Mode::Count).map_err(|e| e.to_string())?.count;
            let brute = all_permutations(n).filter(|p| avoids_all(p, &basis)).count() as u64;
            if gen == brute {
                Ok(())
            } else {
                Err(format!("n={n}: generated {gen}, filtered {brute}"))
            }
        });
        out.push(ok(&format!("class {name} generation equals filtering n! (n <= 7)"), filtered));
    }
    out
}

fn members(basis: &Basis, n: usize) -> Vec<Permutation> {
    enumerate_class(basis, n, Mode::Collect)
        .expect("within the collect cap")
        .perms
        .unwrap_or_default()
}

fn exhaustive<F>(name: &str, perms: &[Permutation], check: F) -> Check
where
    F: Fn(&Permutation) -> Result<(), String> + Sync,
{
    let failure = perms.par_iter().find_map_first(|p| check(p).err().map(|e| format!("{}: {e}", p)));
    Check {
        name: format!("{name} ({} permutations)", perms.len()),
        passed: failure.is_none(),
        first_difference: None,
        detail: failure.unwrap_or_default(),
    }
}

fn hasse_suite(max_n: usize) -> Vec<Check> {
    let every: Vec<Permutation> = perms_up_to(max_n);
    let av123 = Basis::parse(&["123"]).expect("valid");
    let fs: Vec<Permutation> = (1..=max_n).flat_map(|n| members(&Basis::class_f(), n)).collect();
    let es: Vec<Permutation> = (1..=max_n).flat_map(|n| members(&Basis::class_e(), n)).collect();
    let fans: Vec<Permutation> = (1..=max_n).flat_map(|n| members(&av123, n)).collect();
    let f_with_123: Vec<Permutation> = fs.iter().filter(|p| hasse::spike(p).is_some()).cloned().collect();
    vec![
        exhaustive("source graphs partition, roots are left-to-right minima", &every, hasse::check_partition),
        exhaustive("spike lies in the bottom subgraph (class F)", &f_with_123, hasse::check_spike_in_bottom),
        exhaustive("source graphs of Av(123) are fans", &fans, hasse::check_fans),
        exhaustive("no 2143 cycle in class E source graphs", &es, hasse::check_no_2143_subgraph),
        exhaustive("only roots fork in class E source graphs", &es, hasse::check_only_root_forks),
        exhaustive("u-trees avoid 132 and 231", &es, hasse::check_u_tree_patterns),
    ]
}

fn random_series(rng: &mut ChaCha8Rng, order: usize, unit: bool) -> MultiSeries {
    let coeffs: Vec<Poly> = (0..=order)
        .map(|n| {
            let mut p = Poly::zero();
            if n == 0 && unit {
                return Poly::one();
            }
            for k in 0..=2u32 {
                let c: i64 = rng.gen_range(-3..=3);
                p.add_term([k, 0, 0], BigRational::from_integer(c.into()));
            }
            p
        })
        .collect();
    MultiSeries::from_coeffs(coeffs, order).with_vars(VarSet::of(&[Var::U]))
}

fn series_suite() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    let (mut ring, mut roots, mut linear) = (Ok(()), Ok(()), Ok(()));
    for trial in 0..24 {
        let (a, b, c) = (
            random_series(&mut rng, 8, false),
            random_series(&mut rng, 8, false),
            random_series(&mut rng, 8, false),
        );
        if (&a * &b) * &c != &a * &(&b * &c) || &a * &(&b + &c) != &(&a * &b) + &(&a * &c) {
            ring = Err(format!("trial {trial}"));
        }
        let unit = random_series(&mut rng, 12, true).eval(Var::U, &BigRational::from_integer(2.into())).expect("u declared");
        match unit.sqrt() {
            Ok(g) if &g * &g == unit => {}
            _ => roots = Err(format!("trial {trial}")),
        }
        for form in [SliceForm::Inclusive, SliceForm::Exclusive] {
            let lhs = (&a + &b).slice_quotient(Var::U, form);
            let rhs = a
                .slice_quotient(Var::U, form)
                .and_then(|x| Ok(&x + &b.slice_quotient(Var::U, form)?));
            if lhs.is_err() || lhs != rhs {
                linear = Err(format!("trial {trial}"));
            }
        }
    }
    out.push(ok("ring axioms on random series (order 8)", ring));
    out.push(ok("sqrt squared is the identity (order 12)", roots));
    out.push(ok("slice quotients are linear", linear));
    let sqrt = class_f::sqrt_one_minus_4z(16);
    let binomial = [1, -2, -2, -4, -10, -28, -84, -264, -858, -2860, -9724, -33592, -117572, -416024, -1485800, -5348880, -19389690];
    out.push(ok(
        "sqrt(1 - 4z) matches the binomial expansion",
        if sqrt == MultiSeries::from_integers(&binomial, 16) {
            Ok(())
        } else {
            Err(sqrt.to_string())
        },
    ));
    let cubic = newton_algebraic(&class_e::cubic(16), &class_f::lit("z + 2z^2", 16), 16);
    out.push(ok(
        "Newton solution satisfies its polynomial",
        match &cubic {
            Ok(f) if class_e::cubic_residual(f).is_zero() => Ok(()),
            Ok(_) => Err("nonzero residual".into()),
            Err(e) => Err(e.to_string()),
        },
    ));
    out
}

fn published_row(name: &str, got: &[BigInt], expected: &[u64]) -> Check {
    let diff = expected
        .iter()
        .zip(got)
        .position(|(e, g)| BigInt::from(*e) != *g);
    Check {
        name: name.to_string(),
        passed: diff.is_none(),
        first_difference: diff.map(|i| i + 1),
        detail: diff.map_or(String::new(), |i| format!("expected {}, got {}", expected[i], got[i])),
    }
}

fn class_f_suite(order: usize) -> Vec<Check> {
    let before = exact_division_count();
    let sol = match class_f::solve(&FOptions::with_order(order)) {
        Ok(s) => s,
        Err(e) => return vec![error_check("class F pipeline", e)],
    };
    let mut out = sol.checks.clone();
    out.push(published_row("class F sequence", &sol.sequence(), &F_PUBLISHED));
    out.push(ok(
        "exact divisions performed",
        if exact_division_count() > before {
            Ok(())
        } else {
            Err("no divisions recorded".into())
        },
    ));
    out.push(ok(
        "growth rate 4",
        if sol.growth.growth_rate_exact.as_deref() == Some("4") {
            Ok(())
        } else {
            Err(format!("{}", sol.growth.growth_rate))
        },
    ));
    out
}

fn class_e_suite(order: usize) -> Vec<Check> {
    let sol = match class_e::solve(&EOptions { order, strict: false }) {
        Ok(s) => s,
        Err(e) => return vec![error_check("class E pipeline", e)],
    };
    let mut out = sol.checks.clone();
    out.push(published_row("class E sequence", &sol.sequence(), &E_PUBLISHED));
    out
}

fn oracle_suite(cfg: &VerifyConfig) -> Vec<Check> {
    match oracle::cross_validate(cfg.n_count, cfg.n_bivariate, None) {
        Ok(r) => r
            .rows
            .into_iter()
            .map(|row| Check {
                name: row.name,
                passed: row.passed,
                first_difference: row.first_mismatch.as_ref().map(|m| m.n),
                detail: row
                    .first_mismatch
                    .map(|m| format!("expected {}, found {}", m.expected, m.found))
                    .unwrap_or_default(),
            })
            .collect(),
        Err(e) => vec![error_check("cross validation", e)],
    }
}

fn oeis_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let opts = FetchOptions {
        offline: true,
        fixture_dir: cfg.fixture_dir.clone(),
        ..FetchOptions::default()
    };
    let order = cfg.order.max(F_PUBLISHED.len());
    let series = [
        ("A165540", class_f::total_closed(order).map(|s| class_f::integer_terms(&s))),
        ("A165539", class_e::cubic_branch(order).map(|s| class_f::integer_terms(&s))),
    ];
    for (id, computed) in series {
        let check = match (oeis::oeis_fetch(id, usize::MAX, &opts), computed) {
            (Ok((fixture, _)), Ok(terms)) => {
                let ours = SequenceRecord::from_values(id, &terms, Provenance::Series);
                let c = compare(&fixture, &ours);
                Check {
                    name: format!("{id} fixture matches series"),
                    passed: c.agrees() && c.compared == fixture.terms.len(),
                    first_difference: c.first_mismatch.as_ref().map(|m| m.0),
                    detail: format!("{} terms compared", c.compared),
                }
            }
            (Err(e), _) => error_check(&format!("{id} fixture"), e),
            (_, Err(e)) => error_check(&format!("{id} series"), e),
        };
        out.push(check);
    }
    // A corrupted copy must be caught at the corrupted index.
    let check = match oeis::oeis_fetch("A165540", usize::MAX, &opts) {
        Ok((fixture, _)) => {
            let mut bad = fixture.clone();
            bad.terms[6].1 += 1;
            let c = compare(&fixture, &bad);
            ok(
                "first mismatch located in corrupted copy",
                if c.first_mismatch.as_ref().map(|m| m.0) == Some(7) {
                    Ok(())
                } else {
                    Err(format!("{:?}", c.first_mismatch))
                },
            )
        }
        Err(e) => error_check("A165540 fixture", e),
    };
    out.push(check);
    out
}
