//! Permutations, pattern containment, and generation of pattern-avoiding classes.
//!
//! Positions and values are 1-based in every public function.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("not a permutation of 1..{len}: {reason}")]
    NotBijection { len: usize, reason: String },
    #[error("empty permutation")]
    Empty,
    #[error("cannot parse permutation {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("basis is empty")]
    EmptyBasis,
    #[error("basis is not minimal: {contained} is contained in {container}")]
    NotMinimal {
        contained: Permutation,
        container: Permutation,
    },
    #[error("collect mode would hold {count} permutations, above the cap of {cap}")]
    ResourceLimit { count: u64, cap: u64 },
}

/// A permutation of `1..=n` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u16>);

impl Permutation {
    pub fn new(entries: Vec<u16>) -> Result<Permutation, PermError> {
        let n = entries.len();
        if n == 0 {
            return Err(PermError::Empty);
        }
        let mut seen = vec![false; n + 1];
        for &v in &entries {
            let v = v as usize;
            if v == 0 || v > n {
                return Err(PermError::NotBijection {
                    len: n,
                    reason: format!("value {v} out of range"),
                });
            }
            if seen[v] {
                return Err(PermError::NotBijection {
                    len: n,
                    reason: format!("value {v} repeated"),
                });
            }
            seen[v] = true;
        }
        Ok(Permutation(entries))
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation((1..=n as u16).collect())
    }

    /// Order-isomorphic renormalization of any sequence of distinct values onto `1..=k`.
    pub fn standardize<T: Ord + Copy>(seq: &[T]) -> Permutation {
        let mut idx: Vec<usize> = (0..seq.len()).collect();
        idx.sort_by_key(|&i| seq[i]);
        let mut out = vec![0u16; seq.len()];
        for (rank, &i) in idx.iter().enumerate() {
            out[i] = rank as u16 + 1;
        }
        Permutation(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u16] {
        &self.0
    }

    /// Value at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> usize {
        self.0[pos - 1] as usize
    }

    /// 1-based position of `value`.
    pub fn position_of(&self, value: usize) -> usize {
        self.0
            .iter()
            .position(|&v| v as usize == value)
            .expect("value in range")
            + 1
    }

    /// The pattern left after deleting the entry at 1-based `pos`.
    pub fn delete(&self, pos: usize) -> Option<Permutation> {
        if self.len() == 1 {
            return None;
        }
        let removed = self.0[pos - 1];
        Some(Permutation(
            self.0
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pos - 1)
                .map(|(_, &v)| if v > removed { v - 1 } else { v })
                .collect(),
        ))
    }

    /// Insert the new maximum `n + 1` so that it lands at 1-based `pos`.
    pub fn insert_max(&self, pos: usize) -> Permutation {
        let mut v = self.0.clone();
        v.insert(pos - 1, self.len() as u16 + 1);
        Permutation(v)
    }

    /// Compact digit form (`2341`) when every value is a single digit, otherwise space-separated.
    pub fn compact(&self) -> String {
        if self.len() <= 9 {
            self.0.iter().map(|v| v.to_string()).collect()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.compact())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts `"15 17 11 4"`, `"1,5,3"`, or compact `"2341"` (only when n <= 9).
    fn from_str(input: &str) -> Result<Permutation, PermError> {
        let err = |reason: &str| PermError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = input.trim();
        if trimmed.is_empty() {
            return Err(PermError::Empty);
        }
        let separated = trimmed.contains(|c: char| c == ',' || c.is_whitespace());
        let entries: Vec<u16> = if separated {
            trimmed
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u16>().map_err(|_| err("non-numeric entry")))
                .collect::<Result<_, _>>()?
        } else {
            if !trimmed.chars().all(|c| c.is_ascii_digit()) {
                return Err(err("non-numeric entry"));
            }
            if trimmed.len() > 9 {
                return Err(err("compact digit form only allowed for n <= 9"));
            }
            trimmed.bytes().map(|b| (b - b'0') as u16).collect()
        };
        Permutation::new(entries)
    }
}

/// Parses a permutation literal; panics on malformed input. For constants and tests.
pub fn perm(s: &str) -> Permutation {
    s.parse().unwrap_or_else(|e| panic!("{e}"))
}

/// Does `host` contain a subsequence order-isomorphic to `pattern`?
pub fn contains(pattern: &Permutation, host: &Permutation) -> bool {
    Matcher::new(pattern).matches(host.values(), None)
}

/// A pattern preprocessed for backtracking: for each pattern index `j`, the earlier
/// indices holding the nearest smaller and nearest larger values.
struct Matcher<'a> {
    pattern: &'a [u16],
    below: Vec<Option<usize>>,
    above: Vec<Option<usize>>,
}

impl<'a> Matcher<'a> {
    fn new(pattern: &'a Permutation) -> Matcher<'a> {
        let p = pattern.values();
        let mut below = Vec::with_capacity(p.len());
        let mut above = Vec::with_capacity(p.len());
        for j in 0..p.len() {
            below.push((0..j).filter(|&l| p[l] < p[j]).max_by_key(|&l| p[l]));
            above.push((0..j).filter(|&l| p[l] > p[j]).min_by_key(|&l| p[l]));
        }
        Matcher {
            pattern: p,
            below,
            above,
        }
    }

    /// `pin = Some((j, i))` forces pattern index `j` onto host index `i` (0-based).
    fn matches(&self, host: &[u16], pin: Option<(usize, usize)>) -> bool {
        let k = self.pattern.len();
        if k > host.len() {
            return false;
        }
        let mut chosen = vec![0usize; k];
        self.extend(host, pin, &mut chosen, 0, 0)
    }

    fn extend(
        &self,
        host: &[u16],
        pin: Option<(usize, usize)>,
        chosen: &mut [usize],
        j: usize,
        start: usize,
    ) -> bool {
        let k = self.pattern.len();
        if j == k {
            return true;
        }
        let remaining = k - j;
        let lo = self.below[j].map(|l| host[chosen[l]]);
        let hi = self.above[j].map(|l| host[chosen[l]]);
        let candidates = match pin {
            Some((pj, pi)) if pj == j => {
                if pi < start {
                    return false;
                }
                pi..pi + 1
            }
            Some((pj, pi)) if pj > j => start..pi.min(host.len() + 1 - remaining),
            _ => start..host.len() + 1 - remaining,
        };
        for i in candidates {
            let v = host[i];
            if lo.is_some_and(|lo| v < lo) || hi.is_some_and(|hi| v > hi) {
                continue;
            }
            chosen[j] = i;
            if self.extend(host, pin, chosen, j + 1, i + 1) {
                return true;
            }
        }
        false
    }
}

/// A non-empty antichain of patterns defining the class `Av(basis)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    patterns: Vec<Permutation>,
}

impl Basis {
    pub fn new(patterns: Vec<Permutation>) -> Result<Basis, PermError> {
        if patterns.is_empty() {
            return Err(PermError::EmptyBasis);
        }
        let mut patterns = patterns;
        patterns.sort();
        patterns.dedup();
        for a in &patterns {
            for b in &patterns {
                if a != b && contains(a, b) {
                    return Err(PermError::NotMinimal {
                        contained: a.clone(),
                        container: b.clone(),
                    });
                }
            }
        }
        Ok(Basis { patterns })
    }

    pub fn parse(spec: &[&str]) -> Result<Basis, PermError> {
        Basis::new(spec.iter().map(|s| s.parse()).collect::<Result<_, _>>()?)
    }

    /// `{1234, 2341}`.
    pub fn class_f() -> Basis {
        Basis::parse(&["1234", "2341"]).expect("valid basis")
    }

    /// `{1243, 2314}`.
    pub fn class_e() -> Basis {
        Basis::parse(&["1243", "2314"]).expect("valid basis")
    }

    pub fn patterns(&self) -> &[Permutation] {
        &self.patterns
    }

    pub fn max_len(&self) -> usize {
        self.patterns.iter().map(Permutation::len).max().unwrap_or(0)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.patterns.iter().map(Permutation::compact).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn avoids_all(host: &Permutation, basis: &Basis) -> bool {
    basis.patterns().iter().all(|p| !contains(p, host))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Count,
    Collect,
}

/// Result of [`enumerate_class`]; `perms` is `Some` (sorted lexicographically) in collect mode.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub count: u64,
    pub perms: Option<Vec<Permutation>>,
}

/// Upper limit on the number of permutations held in collect mode.
pub const DEFAULT_COLLECT_CAP: u64 = 5_000_000;

/// Enumerates `Av(basis)` of length `n` by inserting a new maximum into every
/// avoider of length `n - 1`. A new occurrence must use the inserted maximum as
/// the largest pattern entry, so only those embeddings are searched.
pub fn enumerate_class(basis: &Basis, n: usize, mode: Mode) -> Result<Enumeration, PermError> {
    enumerate_class_capped(basis, n, mode, DEFAULT_COLLECT_CAP)
}

pub fn enumerate_class_capped(
    basis: &Basis,
    n: usize,
    mode: Mode,
    cap: u64,
) -> Result<Enumeration, PermError> {
    assert!(n >= 1, "length must be positive");
    let extender = Extender::new(basis);
    // Breadth-first to a modest frontier, then depth-first subtrees in parallel.
    let split = n.min(6);
    let mut frontier = vec![Permutation::identity(1)];
    for _ in 1..split {
        frontier = frontier.iter().flat_map(|p| extender.children(p)).collect();
    }
    if split == n {
        let count = frontier.len() as u64;
        return finish(count, frontier, mode, cap);
    }
    let count: u64 = frontier
        .par_iter()
        .map(|p| extender.count_leaves(p, n))
        .sum();
    if mode == Mode::Count {
        return Ok(Enumeration { count, perms: None });
    }
    if count > cap {
        return Err(PermError::ResourceLimit { count, cap });
    }
    let perms: Vec<Permutation> = frontier
        .par_iter()
        .flat_map_iter(|p| {
            let mut out = Vec::new();
            extender.collect_leaves(p, n, &mut out);
            out
        })
        .collect();
    finish(count, perms, mode, cap)
}

fn finish(
    count: u64,
    mut perms: Vec<Permutation>,
    mode: Mode,
    cap: u64,
) -> Result<Enumeration, PermError> {
    match mode {
        Mode::Count => Ok(Enumeration { count, perms: None }),
        Mode::Collect => {
            if count > cap {
                return Err(PermError::ResourceLimit { count, cap });
            }
            perms.par_sort_unstable();
            Ok(Enumeration {
                count,
                perms: Some(perms),
            })
        }
    }
}

struct Extender<'a> {
    matchers: Vec<(Matcher<'a>, usize)>,
}

impl<'a> Extender<'a> {
    fn new(basis: &'a Basis) -> Extender<'a> {
        Extender {
            matchers: basis
                .patterns()
                .iter()
                .map(|p| {
                    let max_idx = p.values().iter().position(|&v| v as usize == p.len()).unwrap();
                    (Matcher::new(p), max_idx)
                })
                .collect(),
        }
    }

    fn children(&self, parent: &Permutation) -> Vec<Permutation> {
        (1..=parent.len() + 1)
            .map(|pos| parent.insert_max(pos))
            .filter(|child| self.accepts(child, parent.len() + 1))
            .collect()
    }

    /// `child` has its maximum at some position; test only embeddings through it.
    fn accepts(&self, child: &Permutation, max_value: usize) -> bool {
        let at = child.values().iter().position(|&v| v as usize == max_value).unwrap();
        self.matchers
            .iter()
            .all(|(m, max_idx)| !m.matches(child.values(), Some((*max_idx, at))))
    }

    fn count_leaves(&self, p: &Permutation, n: usize) -> u64 {
        if p.len() == n {
            return 1;
        }
        self.children(p).iter().map(|c| self.count_leaves(c, n)).sum()
    }

    fn collect_leaves(&self, p: &Permutation, n: usize, out: &mut Vec<Permutation>) {
        if p.len() == n {
            out.push(p.clone());
            return;
        }
        for c in self.children(p) {
            self.collect_leaves(&c, n, out);
        }
    }
}

/// 1-based positions of entries smaller than everything before them.
pub fn left_to_right_minima(p: &Permutation) -> Vec<usize> {
    let mut out = Vec::new();
    let mut min = u16::MAX;
    for (i, &v) in p.values().iter().enumerate() {
        if v < min {
            min = v;
            out.push(i + 1);
        }
    }
    out
}

/// 1-based positions of entries larger than everything after them, ascending.
pub fn right_to_left_maxima(p: &Permutation) -> Vec<usize> {
    let mut out = Vec::new();
    let mut max = 0u16;
    for (i, &v) in p.values().iter().enumerate().rev() {
        if v > max {
            max = v;
            out.push(i + 1);
        }
    }
    out.reverse();
    out
}

/// Every permutation of length `n` in lexicographic order (Heap-free, via next_permutation).
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut current: Option<Vec<u16>> = Some((1..=n as u16).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        current = next_permutation(out.clone());
        Some(Permutation(out))
    })
}

fn next_permutation(mut v: Vec<u16>) -> Option<Vec<u16>> {
    let i = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1])?;
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn containment_examples() {
        assert!(contains(&perm("3241"), &perm("1573462")));
        assert!(!contains(&perm("3214"), &perm("1573462")));
        for p in all_permutations(4) {
            assert!(contains(&perm("1"), &p));
        }
        assert!(!contains(&perm("12345"), &perm("1234")));
    }

    #[test]
    fn avoidance_examples() {
        let b = Basis::parse(&["3214"]).unwrap();
        assert!(avoids_all(&perm("1573462"), &b));
        let s = perm("2413");
        assert!(!avoids_all(&s, &Basis::new(vec![s.clone()]).unwrap()));
        assert!(avoids_all(&perm("123"), &Basis::class_f()));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_class(&Basis::class_f(), 4, Mode::Count).unwrap().count, 22);
        assert_eq!(enumerate_class(&Basis::class_e(), 5, Mode::Count).unwrap().count, 88);
        assert_eq!(enumerate_class(&Basis::class_e(), 3, Mode::Count).unwrap().count, 6);
        let one = enumerate_class(&Basis::class_f(), 1, Mode::Collect).unwrap();
        assert_eq!(one.perms.unwrap(), vec![perm("1")]);
    }

    #[test]
    fn collect_is_sorted_and_capped() {
        let e = enumerate_class(&Basis::class_f(), 7, Mode::Collect).unwrap();
        let perms = e.perms.unwrap();
        assert_eq!(perms.len() as u64, e.count);
        assert!(perms.windows(2).all(|w| w[0] < w[1]));
        let err = enumerate_class_capped(&Basis::class_f(), 7, Mode::Collect, 10).unwrap_err();
        assert_eq!(err, PermError::ResourceLimit { count: 1611, cap: 10 });
    }

    #[test]
    fn minima_and_maxima() {
        let fig = perm("15 17 11 4 16 1 14 8 6 3 2 13 12 10 9 7 5");
        assert_eq!(left_to_right_minima(&fig), vec![1, 3, 4, 6]);
        assert_eq!(left_to_right_minima(&perm("123")), vec![1]);
        assert_eq!(left_to_right_minima(&perm("321")), vec![1, 2, 3]);
        assert_eq!(right_to_left_maxima(&perm("123")), vec![3]);
        assert_eq!(right_to_left_maxima(&perm("321")), vec![1, 2, 3]);
        assert_eq!(right_to_left_maxima(&perm("2143")), vec![3, 4]);
    }

    #[test]
    fn parsing() {
        assert_eq!(perm("2,3,4,1"), perm("2341"));
        assert_eq!(perm(" 2 3  4 1 "), perm("2341"));
        assert!("1234567891".parse::<Permutation>().is_err());
        assert!("1 1".parse::<Permutation>().is_err());
        assert!("1 3".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("a b".parse::<Permutation>().is_err());
    }

    #[test]
    fn basis_minimality_is_enforced() {
        assert!(matches!(
            Basis::parse(&["123", "1234"]),
            Err(PermError::NotMinimal { .. })
        ));
        assert_eq!(Basis::new(vec![]).unwrap_err(), PermError::EmptyBasis);
    }

    #[test]
    fn standardize_and_delete() {
        assert_eq!(Permutation::standardize(&[5u16, 3, 6, 2]), perm("3241"));
        assert_eq!(perm("2413").delete(2), Some(perm("213")));
        assert_eq!(perm("1").delete(1), None);
    }

    #[test]
    fn all_permutations_count() {
        assert_eq!(all_permutations(5).count(), 120);
        let v: Vec<_> = all_permutations(3).collect();
        assert_eq!(v.first().unwrap(), &perm("123"));
        assert_eq!(v.last().unwrap(), &perm("321"));
    }
}
