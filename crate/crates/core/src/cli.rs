//! The `permclass` command line: argument parsing and report rendering.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use crate::class_e::{self, EOptions};
use crate::class_f::{self, FOptions};
use crate::hasse::{self, CatalyticStatistics, Class};
use crate::oeis::{self, FetchOptions, Provenance, SequenceRecord};
use crate::oracle::{self, Limits, OracleError};
use crate::perm::Permutation;
use crate::series::{MultiSeries, DEFAULT_ORDER};
use crate::verify::{self, Suite, VerifyConfig};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Series,
    Brute,
    Closed,
}

#[derive(Parser, Debug)]
#[command(name = "permclass", version, about = "Enumerate Av(1234,2341) and Av(1243,2314)")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Directory holding the bundled b-files (default: $PERMCLASS_FIXTURES or the crate's fixtures).
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    /// Largest n the brute-force counter accepts.
    #[arg(long, default_value_t = Limits::default().max_count_n, global = true)]
    brute_limit: usize,
    /// Largest n for statistic histograms.
    #[arg(long, default_value_t = Limits::default().max_histogram_n, global = true)]
    histogram_limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ClassArg {
    #[arg(long, value_parser = parse_class)]
    class: Class,
}

fn parse_class(s: &str) -> Result<Class, String> {
    s.parse()
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn tolerance(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        Ok(_) => Err("must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print |C_n| for one class.
    Count {
        #[command(flatten)]
        class: ClassArg,
        #[arg(long, value_parser = positive)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Series)]
        method: Method,
    },
    /// Dump the generating function coefficients.
    Series {
        #[command(flatten)]
        class: ClassArg,
        #[arg(long, value_parser = positive, default_value_t = DEFAULT_ORDER)]
        order: usize,
        /// Include the catalytic variable.
        #[arg(long)]
        bivariate: bool,
        /// Include intermediate series.
        #[arg(long)]
        intermediates: bool,
    },
    /// Hasse graph, source graphs and statistics of one permutation.
    Decompose {
        #[arg(long)]
        perm: String,
        #[arg(long, value_parser = parse_class)]
        class: Option<Class>,
    },
    /// Run invariant suites; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, value_parser = positive, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Growth rate from the least singularity.
    Growth {
        #[command(flatten)]
        class: ClassArg,
        #[arg(long, value_parser = tolerance, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Compare the computed sequence with an OEIS b-file.
    Oeis {
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 12)]
        terms: usize,
        /// Use the bundled fixture only.
        #[arg(long)]
        offline: bool,
        /// Seconds before a remote fetch is abandoned.
        #[arg(long, default_value_t = 10)]
        timeout: u64,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Config {
    pub order: usize,
    pub limits: Limits,
    pub offline: bool,
    pub format: Format,
    pub fixture_dir: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            order: DEFAULT_ORDER,
            limits: Limits::default(),
            offline: true,
            format: Format::Text,
            fixture_dir: oeis::default_fixture_dir(),
        }
    }
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn failed(stdout: String) -> Outcome {
        Outcome { code: 1, stdout, stderr: String::new() }
    }

    fn usage(msg: impl std::fmt::Display) -> Outcome {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }

    fn runtime(msg: impl std::fmt::Display) -> Outcome {
        Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    if cli.brute_limit == 0 || cli.histogram_limit == 0 {
        return Outcome::usage("limits must be positive");
    }
    let mut cfg = Config {
        format: cli.format,
        limits: Limits {
            max_count_n: cli.brute_limit,
            max_histogram_n: cli.histogram_limit,
        },
        ..Config::default()
    };
    if let Some(dir) = cli.fixtures {
        cfg.fixture_dir = dir;
    }
    match cli.command {
        Command::Count { class, n, method } => count(&cfg, class.class, n, method),
        Command::Series { class, order, bivariate, intermediates } => {
            cfg.order = order;
            series(&cfg, class.class, bivariate, intermediates)
        }
        Command::Decompose { perm, class } => decompose(&cfg, &perm, class),
        Command::Verify { suite, order } => {
            cfg.order = order;
            verify_cmd(&cfg, suite)
        }
        Command::Growth { class, tol } => growth(&cfg, class.class, tol),
        Command::Oeis { id, terms, offline, timeout } => {
            cfg.offline = offline;
            oeis_cmd(&cfg, &id, terms, Duration::from_secs(timeout))
        }
    }
}

fn render(cfg: &Config, text: String, value: serde_json::Value) -> String {
    match cfg.format {
        Format::Text => text,
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable")),
    }
}

/// The counting series of `class` to `z^order` by the requested route.
pub fn counting_series(class: Class, order: usize, method: Method) -> Result<MultiSeries, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match (class, method) {
        (Class::F, Method::Series) => class_f::solve(&FOptions::with_order(order))
            .map(|s| s.f_total)
            .map_err(|e| err(&e)),
        (Class::E, Method::Series) => class_e::solve(&EOptions { order, strict: true })
            .map(|s| s.e_1)
            .map_err(|e| err(&e)),
        (Class::F, Method::Closed) => class_f::total_closed(order).map_err(|e| err(&e)),
        (Class::E, Method::Closed) => class_e::cubic_branch(order).map_err(|e| err(&e)),
        (_, Method::Brute) => Err("brute force has no series".into()),
    }
}

fn count(cfg: &Config, class: Class, n: usize, method: Method) -> Outcome {
    let value: BigInt = match method {
        Method::Brute => match oracle::brute_count_limited(&class.basis(), n, &cfg.limits) {
            Ok(c) => c.into(),
            Err(e @ OracleError::ResourceLimit { .. }) => return Outcome::usage(e),
            Err(e) => return Outcome::runtime(e),
        },
        _ => match counting_series(class, n, method) {
            Ok(s) => oracle::univariate_counts(&s)[n].clone(),
            Err(e) => return Outcome::runtime(e),
        },
    };
    let method_name = format!("{method:?}").to_lowercase();
    Outcome::ok(render(
        cfg,
        format!("{value}\n"),
        json!({
            "schema": 1,
            "class": class.name(),
            "n": n,
            "method": method_name,
            "count": value.to_string(),
        }),
    ))
}

fn dump(out: &mut String, name: &str, s: &MultiSeries) {
    let _ = writeln!(out, "{name}:");
    for line in s.term_lines() {
        let _ = writeln!(out, "  {line}");
    }
}

fn series(cfg: &Config, class: Class, bivariate: bool, intermediates: bool) -> Outcome {
    let order = cfg.order;
    let (total, named): (MultiSeries, Vec<(String, MultiSeries)>) = match class {
        Class::F => match class_f::solve(&FOptions::with_order(order)) {
            Ok(sol) => {
                let mut named = Vec::new();
                if bivariate {
                    named.push(("A(z,u)".into(), sol.a_u.clone()));
                    named.push(("B(z,u)".into(), sol.b_u.clone()));
                    named.push(("C(z,u)".into(), sol.c_u.clone()));
                }
                if intermediates {
                    named.extend(sol.intermediates.iter().map(|(k, v)| (k.to_string(), v.clone())));
                }
                (sol.f_total, named)
            }
            Err(e) => return Outcome::runtime(e),
        },
        Class::E => match class_e::solve(&EOptions { order, strict: true }) {
            Ok(sol) => {
                let mut named = Vec::new();
                if bivariate {
                    named.push(("E(z,u)".into(), sol.e_u.clone()));
                    named.push(("P(z,u)".into(), sol.p_u.clone()));
                }
                if intermediates {
                    named.extend(sol.blocks.named().into_iter().map(|(k, v)| (k.to_string(), v)));
                    named.push(("P(1)".into(), sol.p_1.clone()));
                }
                (sol.e_1, named)
            }
            Err(e) => return Outcome::runtime(e),
        },
    };
    let counts = oracle::univariate_counts(&total);
    let mut text = String::new();
    let _ = writeln!(text, "class {} to order {order}", class.name());
    for (n, c) in counts.iter().enumerate().skip(1) {
        let _ = writeln!(text, "{n:>3} {c}");
    }
    for (name, s) in &named {
        dump(&mut text, name, s);
    }
    let extra: serde_json::Map<String, serde_json::Value> = named
        .iter()
        .map(|(k, s)| (k.clone(), serde_json::to_value(s.to_json()).expect("serializable")))
        .collect();
    Outcome::ok(render(
        cfg,
        text,
        json!({
            "schema": 1,
            "class": class.name(),
            "order": order,
            "sequence": counts[1..].iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "series": extra,
        }),
    ))
}

fn decompose(cfg: &Config, raw: &str, class: Option<Class>) -> Outcome {
    let p: Permutation = match raw.parse() {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    let mut text = hasse::render_grid(&p);
    let mut value = hasse::decompose_json(&p);
    if let Some(class) = class {
        match hasse::catalytic_statistics(&p, class) {
            Ok(stat) => {
                let line = match &stat {
                    CatalyticStatistics::F { label, value } => {
                        format!("class F: label {label}, statistic {value}")
                    }
                    CatalyticStatistics::E { u_trees, rightmost_is_path } => {
                        format!("class E: {u_trees} u-trees, in P: {rightmost_is_path}")
                    }
                };
                let _ = writeln!(text, "{line}");
                value["class"] = json!(class.name());
                value["class_statistics"] = serde_json::to_value(&stat).expect("serializable");
            }
            Err(e) => return Outcome::usage(e),
        }
    }
    Outcome::ok(render(cfg, text, value))
}

fn verify_cmd(cfg: &Config, suite: Suite) -> Outcome {
    let vcfg = VerifyConfig {
        order: cfg.order,
        n_count: cfg.limits.max_count_n.min(10),
        n_bivariate: cfg.limits.max_histogram_n.min(9),
        fixture_dir: cfg.fixture_dir.clone(),
        ..VerifyConfig::default()
    };
    let reports = verify::run(suite, &vcfg);
    let mut text = String::new();
    let (mut passed, mut total) = (0, 0);
    for r in &reports {
        let _ = writeln!(text, "[{}]", r.suite);
        for c in &r.checks {
            total += 1;
            if c.passed {
                passed += 1;
                let _ = writeln!(text, "  PASS {}", c.name);
            } else {
                let at = c.first_difference.map_or(String::new(), |d| format!(" (first difference at {d})"));
                let _ = writeln!(text, "  FAIL {}{at}: {}", c.name, c.detail);
            }
        }
    }
    let _ = writeln!(text, "{passed}/{total} checks passed");
    let out = render(
        cfg,
        text,
        json!({ "schema": 1, "suite": suite.name(), "passed": passed == total, "reports": reports }),
    );
    if passed == total {
        Outcome::ok(out)
    } else {
        Outcome::failed(out)
    }
}

fn growth(cfg: &Config, class: Class, tol: f64) -> Outcome {
    match class {
        Class::F => {
            let g = class_f::growth_rate_f(tol);
            let text = format!(
                "least singularity {} ({:.12})\ngrowth rate {} ({:.12})\n",
                g.least_exact.as_deref().unwrap_or("?"),
                g.least,
                g.growth_rate_exact.as_deref().unwrap_or("?"),
                g.growth_rate
            );
            Outcome::ok(render(cfg, text, json!({ "schema": 1, "class": "F", "growth": g })))
        }
        Class::E => {
            let series = match class_e::cubic_branch(cfg.order) {
                Ok(s) => s,
                Err(e) => return Outcome::runtime(e),
            };
            let g = class_e::growth_rate_e(tol, Some(&series));
            let mut text = format!(
                "quintic roots {:?}\ngrowth rate {:.10} in [{:.12}, {:.12}]\n",
                g.roots, g.growth_rate, g.bracket.0, g.bracket.1
            );
            if let Some((n, r)) = g.empirical_ratio {
                let _ = writeln!(text, "ratio |E_{n}|/|E_{}| = {r:.6}", n - 1);
            }
            Outcome::ok(render(cfg, text, json!({ "schema": 1, "class": "E", "growth": g })))
        }
    }
}

fn oeis_cmd(cfg: &Config, id: &str, terms: usize, timeout: Duration) -> Outcome {
    let opts = FetchOptions {
        offline: cfg.offline,
        fixture_dir: cfg.fixture_dir.clone(),
        timeout,
    };
    let (record, warnings) = match oeis::oeis_fetch(id, terms, &opts) {
        Ok(r) => r,
        Err(e) => return Outcome::runtime(e),
    };
    let class = match id.to_ascii_uppercase().as_str() {
        "A165540" => Some(Class::F),
        "A165539" => Some(Class::E),
        _ => None,
    };
    let mut stderr: String = warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    let mut text = format!("{} ({} terms, {:?})\n", record.id, record.terms.len(), record.provenance);
    let mut value = json!({ "schema": 1, "record": record, "warnings": warnings });
    let mut agrees = true;
    if let Some(class) = class {
        let order = record.terms.len();
        let computed = if order == 0 {
            Vec::new()
        } else {
            match counting_series(class, order, Method::Series) {
                Ok(s) => oracle::univariate_counts(&s)[1..].to_vec(),
                Err(e) => return Outcome::runtime(e),
            }
        };
        let ours = SequenceRecord::from_values(id, &computed, Provenance::Series);
        let c = oeis::compare(&record, &ours);
        agrees = c.agrees();
        match &c.first_mismatch {
            None => {
                let _ = writeln!(text, "{} terms compared, all agree", c.compared);
            }
            Some((i, theirs, mine)) => {
                let _ = writeln!(text, "first mismatch at n={i}: b-file {theirs}, series {mine}");
            }
        }
        value["comparison"] = serde_json::to_value(&c).expect("serializable");
    } else {
        stderr.push_str("warning: no computed sequence for this id; nothing compared\n");
        text.push_str(&record.to_bfile());
    }
    let stdout = render(cfg, text, value);
    Outcome { code: if agrees { 0 } else { 1 }, stdout, stderr }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("permclass").chain(args.iter().copied()))
    }

    #[test]
    fn count_methods_agree() {
        assert_eq!(go(&["count", "--class", "F", "--n", "7", "--method", "closed"]).stdout, "1611\n");
        assert_eq!(go(&["count", "--class", "F", "--n", "7", "--method", "brute"]).stdout, "1611\n");
        assert_eq!(go(&["count", "--class", "E", "--n", "7", "--method", "series"]).stdout, "1571\n");
        assert_eq!(go(&["count", "--class", "E", "--n", "7", "--method", "closed"]).stdout, "1571\n");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(go(&["count", "--class", "G", "--n", "3"]).code, 2);
        assert_eq!(go(&["count", "--class", "F", "--n", "0"]).code, 2);
        assert_eq!(go(&["frobnicate"]).code, 2);
        assert_eq!(go(&["decompose", "--perm", "1 1"]).code, 2);
        assert_eq!(go(&["count", "--class", "F", "--n", "12", "--method", "brute"]).code, 2);
        assert_eq!(go(&["--help"]).code, 0);
    }

    #[test]
    fn decompose_trivial() {
        let out = go(&["--format", "json", "decompose", "--perm", "1", "--class", "F"]);
        assert_eq!(out.code, 0);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["source_graphs"].as_array().unwrap().len(), 1);
        assert!(v["spike"].is_null());
        assert_eq!(v["label"], "A");
        assert_eq!(go(&["decompose", "--perm", "2341", "--class", "F"]).code, 2);
    }

    #[test]
    fn oeis_offline_agrees() {
        let out = go(&["oeis", "--id", "A165539", "--terms", "12", "--offline"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.contains("12 terms compared, all agree"));
        let empty = go(&["oeis", "--id", "A165540", "--terms", "0", "--offline"]);
        assert_eq!(empty.code, 0);
    }
}
