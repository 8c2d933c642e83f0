// Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use permclass::class_e::{self, EOptions};
use permclass::class_f::{self, FOptions};
use permclass::oracle::{brute_count, cross_validate, univariate_counts};
use permclass::perm::Basis;
use permclass::series::{exact_division_count, MultiSeries, SeriesError, Var};
use permclass::verify::{self, Suite, VerifyConfig, E_PUBLISHED, F_PUBLISHED};

const ORDER: usize = 16;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn terms(s: &MultiSeries, k: usize) -> Vec<BigInt> {
    univariate_counts(s)[1..=k].to_vec()
}

fn expect_terms(what: &str, got: &[BigInt], want: &[u64]) -> Result<(), String> {
    match want.iter().zip(got).position(|(w, g)| BigInt::from(*w) != *g) {
        None if got.len() >= want.len() => Ok(()),
        None => Err(format!("{what}: only {} terms", got.len())),
        Some(i) => Err(format!("{what}: n={} gave {}, expected {}", i + 1, got[i], want[i])),
    }
}

fn sequence(basis: Basis, series: MultiSeries, closed: MultiSeries, want: &[u64; 12]) -> Outcome {
    expect_terms("series", &terms(&series, 12), want)?;
    expect_terms("closed form", &terms(&closed, 12), want)?;
    let brute: Vec<BigInt> = (1..=10)
        .map(|n| brute_count(&basis, n).map(BigInt::from).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    expect_terms("brute force", &brute, &want[..10])?;
    Ok("series, closed form and brute force (n <= 10) agree on 12 terms".into())
}

fn within(limit: Duration, start: Instant, outcome: Outcome) -> Outcome {
    let elapsed = start.elapsed();
    let detail = outcome?;
    if elapsed > limit {
        Err(format!("{detail}, but took {elapsed:.1?} (budget {limit:?})"))
    } else {
        Ok(detail)
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let run = || {
        let sol = class_f::solve(&FOptions::with_order(ORDER)).map_err(|e| e.to_string())?;
        let closed = class_f::total_closed(ORDER).map_err(|e| e.to_string())?;
        sequence(Basis::class_f(), sol.f_total, closed, &F_PUBLISHED)
    };
    within(Duration::from_secs(120), start, run())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let run = || {
        let sol = class_e::solve(&EOptions { order: ORDER, strict: true }).map_err(|e| e.to_string())?;
        let closed = class_e::cubic_branch(ORDER).map_err(|e| e.to_string())?;
        sequence(Basis::class_e(), sol.e_1, closed, &E_PUBLISHED)
    };
    within(Duration::from_secs(120), start, run())
}

fn criterion_3() -> Outcome {
    let sol = class_e::solve(&EOptions { order: ORDER, strict: false }).map_err(|e| e.to_string())?;
    let residual = class_e::cubic_residual(&sol.e_1);
    if residual.order() < ORDER {
        return Err(format!("residual only known to order {}", residual.order()));
    }
    match residual.valuation() {
        None => Ok(format!("residual is exactly zero through z^{}", residual.order())),
        Some(n) => Err(format!("residual nonzero at z^{n}: {}", residual.coeff(n))),
    }
}

fn criterion_4() -> Outcome {
    let sol = class_f::solve(&FOptions {
        strict: false,
        ..FOptions::with_order(ORDER)
    })
    .map_err(|e| e.to_string())?;
    let err = |e: SeriesError| e.to_string();
    let pairs = [
        ("A(u)", class_f::a_closed(ORDER).map_err(err)?, sol.a_u.clone()),
        ("A(1)", class_f::a1_closed(ORDER), sol.a_1.clone()),
        ("B(1)", class_f::b1_closed(ORDER).map_err(err)?, sol.b_1.clone()),
        ("C(1)", class_f::c1_closed(ORDER).map_err(err)?, sol.c_1.clone()),
        ("F", class_f::total_closed(ORDER).map_err(err)?, sol.f_total.clone()),
    ];
    for (name, closed, solved) in &pairs {
        if closed.order() < ORDER || solved.order() < ORDER {
            return Err(format!("{name}: truncated below order {ORDER}"));
        }
        if let Some(n) = closed.first_difference(solved) {
            return Err(format!("{name} differs at z^{n}"));
        }
    }
    Ok(format!("A(u), A(1), B(1), C(1), F agree through z^{ORDER}"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let f = class_f::growth_rate_f(1e-9);
    let e = class_e::growth_rate_e(1e-9, None);
    let elapsed = start.elapsed();
    if f.growth_rate_exact.as_deref() != Some("4") {
        return Err(format!("F growth rate {:?} ({})", f.growth_rate_exact, f.growth_rate));
    }
    if (e.growth_rate - 5.1955).abs() > 5e-5 {
        return Err(format!("E growth rate {}", e.growth_rate));
    }
    let width = e.bracket.1 - e.bracket.0;
    if width > 1e-9 {
        return Err(format!("E bracket width {width:e}"));
    }
    if elapsed > Duration::from_secs(1) {
        return Err(format!("root finding took {elapsed:?}"));
    }
    Ok(format!(
        "F exactly 4, E {:.6} (bracket width {width:.1e}) in {elapsed:.1?}",
        e.growth_rate
    ))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let report = cross_validate(10, 9, None).map_err(|e| e.to_string())?;
    let biv = report.rows.iter().filter(|r| r.name.contains("(z,u)")).count();
    if biv < 5 {
        return Err(format!("only {biv} bivariate rows"));
    }
    let outcome = match report.first_failure() {
        None => Ok(format!("{} rows agree, histograms for n <= 9", report.rows.len())),
        Some((row, m)) => Err(format!("{} at n={}: expected {}, found {}", row.name, m.n, m.expected, m.found)),
    };
    within(Duration::from_secs(300), start, outcome)
}

fn suite(s: Suite, cfg: &VerifyConfig) -> Outcome {
    let reports = verify::run(s, cfg);
    let checks: Vec<_> = reports.iter().flat_map(|r| &r.checks).collect();
    match checks.iter().find(|c| !c.passed) {
        None => Ok(format!("{} checks", checks.len())),
        Some(c) => Err(format!("{}: {}", c.name, c.detail)),
    }
}

fn criterion_7() -> Outcome {
    let cfg = VerifyConfig {
        structural_n: 9,
        ..VerifyConfig::default()
    };
    suite(Suite::Hasse, &cfg).map(|d| format!("{d}, exhaustive through n = 9, no counterexamples"))
}

fn criterion_8() -> Outcome {
    let before = exact_division_count();
    class_f::solve(&FOptions::with_order(ORDER)).map_err(|e| e.to_string())?;
    class_e::solve(&EOptions { order: ORDER, strict: true }).map_err(|e| e.to_string())?;
    let performed = exact_division_count() - before;
    if performed == 0 {
        return Err("no exact divisions recorded".into());
    }
    // The division check must actually reject a remainder.
    let probe = MultiSeries::polynomial("z*u + 2z^2", 4).map_err(|e| e.to_string())?;
    match probe.divide_by_one_minus(Var::U) {
        Err(SeriesError::InexactDivision { .. }) => {}
        other => return Err(format!("nonzero remainder went unreported: {other:?}")),
    }
    Ok(format!("{performed} divisions at order {ORDER}, all with zero remainder"))
}

fn criterion_9() -> Outcome {
    suite(Suite::Oeis, &VerifyConfig::default())
        .map(|d| format!("{d}: both fixtures match, corrupted copy caught at its index"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("sequence of Av(1234,2341)", criterion_1),
        ("sequence of Av(1243,2314)", criterion_2),
        ("cubic annihilates E(1)", criterion_3),
        ("closed forms equal fixed points", criterion_4),
        ("growth rates", criterion_5),
        ("bivariate histograms", criterion_6),
        ("structural invariants", criterion_7),
        ("operator exactness", criterion_8),
        ("OEIS agreement", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
