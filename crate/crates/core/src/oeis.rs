//! Integer sequences with provenance, OEIS b-file parsing, and comparison.
//!
//! Fixtures for the two class sequences ship with the crate; remote fetching is
//! opt-in and falls back to the fixture on failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OeisError {
    #[error("b-file line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("no fixture for {id} in {dir}")]
    MissingFixture { id: String, dir: String },
    #[error("fetching {id} failed: {reason}")]
    Network { id: String, reason: String },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Series,
    Brute,
    ClosedForm,
    OeisFixture,
    OeisRemote,
}

/// A named sequence `a(1), a(2), ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceRecord {
    pub id: String,
    #[serde(serialize_with = "terms_as_strings")]
    pub terms: Vec<(usize, BigInt)>,
    pub provenance: Provenance,
}

impl SequenceRecord {
    /// Terms `values[0]` at index 1 onwards.
    pub fn from_values(id: &str, values: &[BigInt], provenance: Provenance) -> SequenceRecord {
        SequenceRecord {
            id: id.to_string(),
            terms: values.iter().cloned().enumerate().map(|(i, v)| (i + 1, v)).collect(),
            provenance,
        }
    }

    pub fn values(&self) -> Vec<&BigInt> {
        self.terms.iter().map(|(_, v)| v).collect()
    }

    pub fn truncate(&mut self, k: usize) {
        self.terms.truncate(k);
    }

    pub fn to_bfile(&self) -> String {
        let mut out = String::new();
        for (i, v) in &self.terms {
            let _ = writeln!(out, "{i} {v}");
        }
        out
    }
}

fn terms_as_strings<S: serde::Serializer>(terms: &[(usize, BigInt)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(terms.iter().map(|(i, v)| (i, v.to_string())))
}

fn mismatch_as_strings<S: serde::Serializer>(
    m: &Option<(usize, BigInt, BigInt)>,
    s: S,
) -> Result<S::Ok, S::Error> {
    m.as_ref()
        .map(|(i, a, b)| (i, a.to_string(), b.to_string()))
        .serialize(s)
}

/// Parses `index value` lines; `#` comments and blank lines are skipped.
/// Indices must be consecutive. Terms before index 1 are dropped.
pub fn parse_bfile(text: &str) -> Result<Vec<(usize, BigInt)>, OeisError> {
    let mut terms: Vec<(usize, BigInt)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |reason: &str| OeisError::Parse {
            line: line_no,
            reason: reason.to_string(),
        };
        let mut parts = trimmed.split_whitespace();
        let (Some(i), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err("expected `index value`"));
        };
        let i: i64 = i.parse().map_err(|_| err("bad index"))?;
        let v: BigInt = v.parse().map_err(|_| err("bad value"))?;
        if let Some((last, _)) = terms.last() {
            if i != *last as i64 + 1 {
                return Err(err("indices not consecutive"));
            }
        }
        if i >= 1 {
            terms.push((i as usize, v));
        } else if !terms.is_empty() {
            return Err(err("indices not consecutive"));
        }
    }
    if let Some((first, _)) = terms.first() {
        if *first != 1 {
            return Err(OeisError::Parse {
                line: 1,
                reason: format!("sequence starts at index {first}, expected 0 or 1"),
            });
        }
    }
    Ok(terms)
}

/// `$PERMCLASS_FIXTURES`, else the fixtures directory shipped with the crate.
pub fn default_fixture_dir() -> PathBuf {
    std::env::var_os("PERMCLASS_FIXTURES")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

/// `A165540` -> `b165540.txt`.
pub fn bfile_name(id: &str) -> String {
    format!("b{}.txt", id.trim_start_matches(['A', 'a']))
}

pub fn read_fixture(id: &str, dir: &Path) -> Result<SequenceRecord, OeisError> {
    let path = dir.join(bfile_name(id));
    if !path.exists() {
        return Err(OeisError::MissingFixture {
            id: id.to_string(),
            dir: dir.display().to_string(),
        });
    }
    let text = std::fs::read_to_string(&path).map_err(|source| OeisError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(SequenceRecord {
        id: id.to_string(),
        terms: parse_bfile(&text)?,
        provenance: Provenance::OeisFixture,
    })
}

fn fetch_remote(id: &str, timeout: Duration) -> Result<SequenceRecord, OeisError> {
    let url = format!("https://oeis.org/{id}/{}", bfile_name(id));
    let net = |e: ureq::Error| OeisError::Network {
        id: id.to_string(),
        reason: e.to_string(),
    };
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(timeout))
        .build()
        .into();
    let text = agent
        .get(&url)
        .call()
        .map_err(net)?
        .body_mut()
        .read_to_string()
        .map_err(net)?;
    Ok(SequenceRecord {
        id: id.to_string(),
        terms: parse_bfile(&text)?,
        provenance: Provenance::OeisRemote,
    })
}

#[derive(Clone, Debug)]
pub struct FetchOptions {
    pub offline: bool,
    pub fixture_dir: PathBuf,
    pub timeout: Duration,
}

impl Default for FetchOptions {
    fn default() -> Self {
        FetchOptions {
            offline: true,
            fixture_dir: default_fixture_dir(),
            timeout: Duration::from_secs(10),
        }
    }
}

/// First `terms` entries of `id`, with any warnings raised along the way.
pub fn oeis_fetch(
    id: &str,
    terms: usize,
    opts: &FetchOptions,
) -> Result<(SequenceRecord, Vec<String>), OeisError> {
    let mut warnings = Vec::new();
    let mut record = if opts.offline {
        read_fixture(id, &opts.fixture_dir)?
    } else {
        match fetch_remote(id, opts.timeout) {
            Ok(r) => r,
            Err(e) => {
                let msg = format!("{e}; using bundled fixture");
                log::warn!("{msg}");
                warnings.push(msg);
                read_fixture(id, &opts.fixture_dir).map_err(|_| e)?
            }
        }
    };
    record.truncate(terms);
    Ok((record, warnings))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub compared: usize,
    /// `(index, left, right)` at the first disagreement.
    #[serde(serialize_with = "mismatch_as_strings")]
    pub first_mismatch: Option<(usize, BigInt, BigInt)>,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares two records over their common prefix.
pub fn compare(a: &SequenceRecord, b: &SequenceRecord) -> Comparison {
    let compared = a.terms.len().min(b.terms.len());
    let first_mismatch = a
        .terms
        .iter()
        .zip(&b.terms)
        .find(|((_, x), (_, y))| x != y)
        .map(|((i, x), (_, y))| (*i, x.clone(), y.clone()));
    Comparison {
        compared,
        first_mismatch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn parses_and_round_trips() {
        let text = "# comment\n1 1\n2 2\n\n3 6\n";
        let terms = parse_bfile(text).unwrap();
        assert_eq!(terms.len(), 3);
        let r = SequenceRecord {
            id: "A1".into(),
            terms,
            provenance: Provenance::OeisFixture,
        };
        assert_eq!(parse_bfile(&r.to_bfile()).unwrap(), r.terms);
    }

    #[test]
    fn zero_offset_is_dropped() {
        assert_eq!(parse_bfile("0 1\n1 1\n2 2\n").unwrap().len(), 2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_bfile("1 1\n2 x\n") {
            Err(OeisError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_bfile("1 1\n3 2\n") {
            Err(OeisError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_bfile("1 1 1\n").is_err());
    }

    #[test]
    fn fixtures_load() {
        let opts = FetchOptions::default();
        let (f, w) = oeis_fetch("A165540", 12, &opts).unwrap();
        assert!(w.is_empty());
        assert_eq!(f.terms.last().unwrap(), &(12, BigInt::from(2155145)));
        let (e, _) = oeis_fetch("A165539", 12, &opts).unwrap();
        assert_eq!(e.terms[4].1, BigInt::from(88));
        let (empty, _) = oeis_fetch("A165540", 0, &opts).unwrap();
        assert!(empty.terms.is_empty());
        assert!(matches!(
            oeis_fetch("A000045", 5, &opts),
            Err(OeisError::MissingFixture { .. })
        ));
    }

    #[test]
    fn comparison_reports_first_mismatch() {
        let a = SequenceRecord::from_values("x", &big(&[1, 2, 6, 22, 89]), Provenance::Series);
        let b = SequenceRecord::from_values("y", &big(&[1, 2, 6, 23]), Provenance::OeisFixture);
        let c = compare(&a, &b);
        assert_eq!(c.compared, 4);
        assert_eq!(c.first_mismatch, Some((4, BigInt::from(22), BigInt::from(23))));
        assert!(compare(&a, &a).agrees());
    }
}
