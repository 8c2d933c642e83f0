//! Hasse graphs of permutations and their structural anatomy: source graphs,
//! the bottom subgraph, the spike, A/B/C labels, u-trees and the catalytic
//! statistics tracked by the generating functions.
//!
//! Vertices are identified by their 1-based position; the vertex at position `i`
//! is the point `(i, σᵢ)`.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::perm::{contains, left_to_right_minima, perm, right_to_left_maxima, Basis, Permutation};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum HasseError {
    #[error("{perm} is not in Av{basis}")]
    NotInClass { perm: String, basis: String },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Class {
    F,
    E,
}

impl Class {
    pub fn basis(self) -> Basis {
        match self {
            Class::F => Basis::class_f(),
            Class::E => Basis::class_e(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::F => "F",
            Class::E => "E",
        }
    }
}

impl std::str::FromStr for Class {
    type Err = String;
    fn from_str(s: &str) -> Result<Class, String> {
        match s {
            "F" | "f" => Ok(Class::F),
            "E" | "e" => Ok(Class::E),
            other => Err(format!("unknown class {other:?}, expected F or E")),
        }
    }
}

fn require(p: &Permutation, class: Class) -> Result<(), HasseError> {
    let basis = class.basis();
    if crate::perm::avoids_all(p, &basis) {
        Ok(())
    } else {
        Err(HasseError::NotInClass {
            perm: p.to_string(),
            basis: basis.to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub position: usize,
    pub value: usize,
}

/// The cover graph of the dominance order on `{(i, σᵢ)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HasseGraph {
    pub vertices: Vec<Vertex>,
    /// `(lower, upper)` positions, sorted.
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    upper: Vec<Vec<usize>>,
    #[serde(skip)]
    lower: Vec<Vec<usize>>,
}

impl HasseGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn value(&self, pos: usize) -> usize {
        self.vertices[pos - 1].value
    }

    /// Positions covering `pos`, ascending.
    pub fn upper_covers(&self, pos: usize) -> &[usize] {
        &self.upper[pos - 1]
    }

    /// Positions covered by `pos`, ascending.
    pub fn lower_covers(&self, pos: usize) -> &[usize] {
        &self.lower[pos - 1]
    }

    pub fn has_edge(&self, lo: usize, hi: usize) -> bool {
        self.upper[lo - 1].binary_search(&hi).is_ok()
    }

    /// Is `b` above and to the right of `a`?
    pub fn dominates(&self, b: usize, a: usize) -> bool {
        b > a && self.value(b) > self.value(a)
    }
}

pub fn build_hasse(p: &Permutation) -> HasseGraph {
    let n = p.len();
    let vertices: Vec<Vertex> = (1..=n)
        .map(|i| Vertex {
            position: i,
            value: p.at(i),
        })
        .collect();
    let mut upper = vec![Vec::new(); n];
    let mut lower = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if p.at(b) < p.at(a) {
                continue;
            }
            let covered = (a + 1..b).any(|c| p.at(a) < p.at(c) && p.at(c) < p.at(b));
            if !covered {
                edges.push((a, b));
                upper[a - 1].push(b);
                lower[b - 1].push(a);
            }
        }
    }
    HasseGraph {
        vertices,
        edges,
        upper,
        lower,
    }
}

/// The label splitting class F; `Outside` for permutations not in the class.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Label {
    A,
    B,
    C,
    Outside,
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Label::A => "A",
            Label::B => "B",
            Label::C => "C",
            Label::Outside => "outside",
        })
    }
}

pub fn label_of(p: &Permutation) -> Label {
    if !crate::perm::avoids_all(p, &Basis::class_f()) {
        return Label::Outside;
    }
    if !contains(&perm("123"), p) {
        Label::A
    } else if !contains(&perm("13524"), p) && !contains(&perm("14523"), p) {
        Label::B
    } else {
        Label::C
    }
}

/// Like [`label_of`] but refuses permutations outside class F.
pub fn class_f_label(p: &Permutation) -> Result<Label, HasseError> {
    require(p, Class::F)?;
    Ok(label_of(p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SourceGraph {
    pub root: usize,
    /// Positions, ascending; includes the root.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SourceDecomposition {
    pub source_graphs: Vec<SourceGraph>,
    /// `source_index[i - 1]` is the 0-based source graph owning position `i`.
    pub source_index: Vec<usize>,
    pub bottom_vertices: Vec<usize>,
    pub spike: Option<usize>,
    pub label: Label,
}

impl SourceDecomposition {
    /// Number of distinct source graphs meeting the bottom subgraph.
    pub fn bottom_source_count(&self) -> usize {
        let mut seen: Vec<usize> = self
            .bottom_vertices
            .iter()
            .map(|&v| self.source_index[v - 1])
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

/// Minimal position `r` admitting `p < q < r` with `σp < σq < σr`.
pub fn spike(p: &Permutation) -> Option<usize> {
    let mut min = usize::MAX;
    // smallest value that is the top of an increasing pair ending so far
    let mut min_pair_top = usize::MAX;
    for r in 1..=p.len() {
        let v = p.at(r);
        if v > min_pair_top {
            return Some(r);
        }
        if v > min {
            min_pair_top = min_pair_top.min(v);
        }
        min = min.min(v);
    }
    None
}

pub fn source_decomposition(p: &Permutation) -> SourceDecomposition {
    let n = p.len();
    let roots = left_to_right_minima(p);
    let mut source_index = vec![usize::MAX; n];
    let mut source_graphs = Vec::with_capacity(roots.len());
    for (k, &root) in roots.iter().enumerate() {
        let mut vertices = Vec::new();
        for i in root..=n {
            if source_index[i - 1] == usize::MAX && (i == root || p.at(i) > p.at(root)) {
                source_index[i - 1] = k;
                vertices.push(i);
            }
        }
        source_graphs.push(SourceGraph { root, vertices });
    }
    let lowest = p.position_of(1);
    SourceDecomposition {
        source_graphs,
        source_index,
        bottom_vertices: (lowest..=n).collect(),
        spike: spike(p),
        label: label_of(p),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UTree {
    /// The tree's root: its largest and rightmost vertex.
    pub root: usize,
    /// Positions, ascending.
    pub vertices: Vec<usize>,
    /// From the root down the rightmost lower covers.
    pub trunk: Vec<usize>,
}

impl UTree {
    pub fn is_path(&self) -> bool {
        self.trunk.len() == self.vertices.len()
    }

    pub fn pattern(&self, p: &Permutation) -> Permutation {
        let vals: Vec<usize> = self.vertices.iter().map(|&i| p.at(i)).collect();
        Permutation::standardize(&vals)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SourceUTrees {
    pub root: usize,
    /// Left to right.
    pub u_trees: Vec<UTree>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UTreeDecomposition {
    pub per_source: Vec<SourceUTrees>,
    /// u-trees hanging from the lowest vertex, left to right.
    pub bottom: Vec<UTree>,
    pub rightmost_is_path: bool,
}

/// Splits `positions` (ascending, non-root part of a graph) into u-trees, each
/// ending at a right-to-left maximum of the subsequence.
fn split_u_trees(g: &HasseGraph, positions: &[usize]) -> Vec<UTree> {
    // Each chunk runs from just after one maximum to the next maximum inclusive.
    let mut out: Vec<UTree> = Vec::new();
    let mut chunks: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    let maxima: Vec<usize> = {
        let mut m = Vec::new();
        let mut best = 0;
        for &pos in positions.iter().rev() {
            if g.value(pos) > best {
                best = g.value(pos);
                m.push(pos);
            }
        }
        m
    };
    for &pos in positions {
        current.push(pos);
        if maxima.contains(&pos) {
            chunks.push(std::mem::take(&mut current));
        }
    }
    for vertices in chunks {
        let root = *vertices.last().expect("chunk ends at a maximum");
        let mut trunk = vec![root];
        let mut at = root;
        loop {
            let next = g
                .lower_covers(at)
                .iter()
                .rev()
                .find(|c| vertices.binary_search(c).is_ok());
            match next {
                Some(&c) => {
                    trunk.push(c);
                    at = c;
                }
                None => break,
            }
        }
        out.push(UTree {
            root,
            vertices,
            trunk,
        });
    }
    out
}

pub fn u_tree_decomposition(p: &Permutation) -> Result<UTreeDecomposition, HasseError> {
    require(p, Class::E)?;
    let g = build_hasse(p);
    let d = source_decomposition(p);
    let per_source = d
        .source_graphs
        .iter()
        .map(|sg| SourceUTrees {
            root: sg.root,
            u_trees: split_u_trees(&g, &sg.vertices[1..]),
        })
        .collect();
    let bottom = split_u_trees(&g, &d.bottom_vertices[1..]);
    let rightmost_is_path = bottom.last().is_some_and(UTree::is_path);
    Ok(UTreeDecomposition {
        per_source,
        bottom,
        rightmost_is_path,
    })
}

/// The statistic marked by `u` in the bivariate generating functions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class")]
pub enum CatalyticStatistics {
    /// Leaves of the bottom fan (label A) or bottom vertices left of the spike (B, C).
    F { label: Label, value: usize },
    E {
        u_trees: usize,
        rightmost_is_path: bool,
    },
}

pub fn catalytic_statistics(p: &Permutation, class: Class) -> Result<CatalyticStatistics, HasseError> {
    match class {
        Class::F => {
            let label = class_f_label(p)?;
            Ok(CatalyticStatistics::F {
                label,
                value: f_statistic(p, label),
            })
        }
        Class::E => {
            let u = u_tree_decomposition(p)?;
            Ok(CatalyticStatistics::E {
                u_trees: u.bottom.len(),
                rightmost_is_path: u.rightmost_is_path,
            })
        }
    }
}

fn f_statistic(p: &Permutation, label: Label) -> usize {
    let lowest = p.position_of(1);
    match label {
        Label::A => p.len() - lowest,
        _ => spike(p).expect("B and C contain 123") - lowest,
    }
}

// Structural checks, each returning a description of the first violation.

/// Each source graph is a root with pendant leaves.
pub fn check_fans(p: &Permutation) -> Result<(), String> {
    let g = build_hasse(p);
    for sg in &source_decomposition(p).source_graphs {
        for &a in &sg.vertices {
            for &b in g.upper_covers(a) {
                if sg.vertices.binary_search(&b).is_ok() && a != sg.root {
                    return Err(format!("edge {a}-{b} between leaves of source graph at {}", sg.root));
                }
            }
        }
        for &v in &sg.vertices[1..] {
            if !g.has_edge(sg.root, v) {
                return Err(format!("vertex {v} not adjacent to root {}", sg.root));
            }
        }
    }
    Ok(())
}

/// The spike, if any, lies in the bottom subgraph.
pub fn check_spike_in_bottom(p: &Permutation) -> Result<(), String> {
    let d = source_decomposition(p);
    match d.spike {
        Some(s) if d.bottom_vertices.binary_search(&s).is_err() => {
            Err(format!("spike at {s} outside the bottom subgraph"))
        }
        _ => Ok(()),
    }
}

/// Source graphs partition the vertices and their roots are the left-to-right minima.
pub fn check_partition(p: &Permutation) -> Result<(), String> {
    let d = source_decomposition(p);
    let mut all: Vec<usize> = d.source_graphs.iter().flat_map(|s| s.vertices.clone()).collect();
    all.sort_unstable();
    if all != (1..=p.len()).collect::<Vec<_>>() {
        return Err("source graphs do not partition the vertices".into());
    }
    let roots: Vec<usize> = d.source_graphs.iter().map(|s| s.root).collect();
    if roots != left_to_right_minima(p) {
        return Err("roots differ from left-to-right minima".into());
    }
    Ok(())
}

/// No source graph contains the 4-cycle of `2143`.
pub fn check_no_2143_subgraph(p: &Permutation) -> Result<(), String> {
    let g = build_hasse(p);
    for sg in &source_decomposition(p).source_graphs {
        let inside = |v: &usize| sg.vertices.binary_search(v).is_ok();
        for &a in &sg.vertices {
            let ups: Vec<usize> = g.upper_covers(a).iter().copied().filter(inside).collect();
            for &b in &sg.vertices {
                if b <= a {
                    continue;
                }
                let shared = g.upper_covers(b).iter().filter(|c| ups.contains(c)).count();
                if shared >= 2 {
                    return Err(format!("4-cycle through {a} and {b} in source graph at {}", sg.root));
                }
            }
        }
    }
    Ok(())
}

/// Within each source graph only the root has more than one upper cover.
pub fn check_only_root_forks(p: &Permutation) -> Result<(), String> {
    let g = build_hasse(p);
    for sg in &source_decomposition(p).source_graphs {
        for &v in &sg.vertices[1..] {
            let ups = g
                .upper_covers(v)
                .iter()
                .filter(|c| sg.vertices.binary_search(c).is_ok())
                .count();
            if ups > 1 {
                return Err(format!("non-root vertex {v} forks in source graph at {}", sg.root));
            }
        }
    }
    Ok(())
}

/// Every u-tree, read as a pattern, avoids 132 and 231.
pub fn check_u_tree_patterns(p: &Permutation) -> Result<(), String> {
    let d = u_tree_decomposition(p).map_err(|e| e.to_string())?;
    let (a, b) = (perm("132"), perm("231"));
    for src in &d.per_source {
        for t in &src.u_trees {
            let pat = t.pattern(p);
            if contains(&a, &pat) || contains(&b, &pat) {
                return Err(format!("u-tree {} has pattern {}", t.root, pat.compact()));
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct DecomposeJson<'a> {
    schema: u32,
    permutation: &'a Permutation,
    vertices: &'a [Vertex],
    edges: &'a [(usize, usize)],
    left_to_right_minima: Vec<usize>,
    right_to_left_maxima: Vec<usize>,
    source_graphs: &'a [SourceGraph],
    source_index: &'a [usize],
    bottom_vertices: &'a [usize],
    spike: Option<usize>,
    label: Label,
    #[serde(skip_serializing_if = "Option::is_none")]
    u_trees: Option<&'a UTreeDecomposition>,
    statistics: Vec<CatalyticStatistics>,
}

/// Full report for one permutation, as JSON.
pub fn decompose_json(p: &Permutation) -> serde_json::Value {
    let g = build_hasse(p);
    let d = source_decomposition(p);
    let u = u_tree_decomposition(p).ok();
    let statistics = [Class::F, Class::E]
        .into_iter()
        .filter_map(|c| catalytic_statistics(p, c).ok())
        .collect();
    serde_json::to_value(DecomposeJson {
        schema: 1,
        permutation: p,
        vertices: &g.vertices,
        edges: &g.edges,
        left_to_right_minima: left_to_right_minima(p),
        right_to_left_maxima: right_to_left_maxima(p),
        source_graphs: &d.source_graphs,
        source_index: &d.source_index,
        bottom_vertices: &d.bottom_vertices,
        spike: d.spike,
        label: d.label,
        u_trees: u.as_ref(),
        statistics,
    })
    .expect("serializable")
}

fn source_mark(k: usize) -> char {
    const MARKS: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    MARKS.get(k).map_or('#', |&b| b as char).to_ascii_lowercase()
}

/// Plain-text plot: one row per value (largest on top), one column per position.
/// Vertices show their source graph as a letter, upper case when in the bottom
/// subgraph; the spike is `*`.
pub fn render_grid(p: &Permutation) -> String {
    let d = source_decomposition(p);
    let n = p.len();
    let width = n.to_string().len();
    let mut out = String::new();
    for value in (1..=n).rev() {
        let _ = write!(out, "{value:>width$} |");
        for pos in 1..=n {
            let c = if p.at(pos) != value {
                '.'
            } else if d.spike == Some(pos) {
                '*'
            } else {
                let m = source_mark(d.source_index[pos - 1]);
                if d.bottom_vertices.binary_search(&pos).is_ok() {
                    m.to_ascii_uppercase()
                } else {
                    m
                }
            };
            out.push(' ');
            out.push(c);
        }
        out.push('\n');
    }
    let _ = writeln!(out, "{:>width$} +{}", "", "--".repeat(n));
    let _ = writeln!(
        out,
        "source graphs: {}, bottom meets {}, spike: {}, label: {}",
        d.source_graphs.len(),
        d.bottom_source_count(),
        d.spike.map_or("none".to_string(), |s| format!("position {s} (value {})", p.at(s))),
        d.label
    );
    if let Ok(u) = u_tree_decomposition(p) {
        let _ = writeln!(
            out,
            "bottom u-trees: {}, rightmost is a path: {}",
            u.bottom.len(),
            u.rightmost_is_path
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    const SEVENTEEN: &str = "15 17 11 4 16 1 14 8 6 3 2 13 12 10 9 7 5";

    #[test]
    fn hasse_of_2143() {
        let g = build_hasse(&perm("2143"));
        assert_eq!(g.edges, vec![(1, 3), (1, 4), (2, 3), (2, 4)]);
    }

    #[test]
    fn hasse_trivial() {
        assert!(build_hasse(&perm("1")).edges.is_empty());
        let g = build_hasse(&perm("1234"));
        assert_eq!(g.edges, vec![(1, 2), (2, 3), (3, 4)]);
        assert!(!g.has_edge(1, 3));
    }

    #[test]
    fn seventeen_point_decomposition() {
        let d = source_decomposition(&perm(SEVENTEEN));
        let roots: Vec<usize> = d.source_graphs.iter().map(|s| s.root).collect();
        assert_eq!(roots, vec![1, 3, 4, 6]);
        assert_eq!(d.bottom_source_count(), 3);
    }

    #[test]
    fn spike_is_leftmost_three() {
        let p = perm("1 15 14 13 10 9 7 4 12 11 8 6 5 3 2");
        let d = source_decomposition(&p);
        assert_eq!(d.spike, Some(9));
        assert_eq!(p.at(9), 12);
    }

    #[test]
    fn small_labels_and_spikes() {
        let d = source_decomposition(&perm("123"));
        assert_eq!(d.source_graphs.len(), 1);
        assert_eq!(d.spike, Some(3));
        assert_eq!(d.label, Label::B);
        let one = source_decomposition(&perm("1"));
        assert_eq!((one.spike, one.label), (None, Label::A));
        assert_eq!(label_of(&perm("13524")), Label::C);
        assert_eq!(label_of(&perm("1234")), Label::Outside);
        assert!(class_f_label(&perm("2341")).is_err());
    }

    #[test]
    fn u_trees_of_class_e_example() {
        let p = perm("1 18 17 15 14 16 19 20 21 11 12 13 10 8 5 4 2 3 6 7 9");
        let u = u_tree_decomposition(&p).unwrap();
        assert_eq!(u.per_source.len(), 1);
        assert_eq!(u.per_source[0].u_trees.len(), 4);
        assert_eq!(u.bottom.len(), 4);
        assert!(check_u_tree_patterns(&p).is_ok());
    }

    #[test]
    fn u_trees_of_tiny_permutations() {
        let u = u_tree_decomposition(&perm("1")).unwrap();
        assert_eq!(u.per_source.len(), 1);
        assert!(u.bottom.is_empty());
        assert!(!u.rightmost_is_path);
        let s12 = catalytic_statistics(&perm("12"), Class::E).unwrap();
        assert_eq!(
            s12,
            CatalyticStatistics::E {
                u_trees: 1,
                rightmost_is_path: true
            }
        );
        let s21 = catalytic_statistics(&perm("21"), Class::E).unwrap();
        assert_eq!(
            s21,
            CatalyticStatistics::E {
                u_trees: 0,
                rightmost_is_path: false
            }
        );
        assert!(u_tree_decomposition(&perm("1243")).is_err());
    }

    #[test]
    fn class_f_statistics() {
        let stat = |s: &str| match catalytic_statistics(&perm(s), Class::F).unwrap() {
            CatalyticStatistics::F { value, .. } => value,
            _ => unreachable!(),
        };
        assert_eq!(stat("12"), 1);
        assert_eq!(stat("21"), 0);
        assert_eq!(stat("123"), 2);
        assert_eq!(stat("1"), 0);
        assert!(catalytic_statistics(&perm("1234"), Class::F).is_err());
    }

    #[test]
    fn structural_checks_small() {
        for n in 1..=6 {
            for p in all_permutations(n) {
                check_partition(&p).unwrap();
                if !contains(&perm("123"), &p) {
                    check_fans(&p).unwrap();
                }
                if label_of(&p) != Label::Outside {
                    check_spike_in_bottom(&p).unwrap();
                }
                if crate::perm::avoids_all(&p, &Basis::class_e()) {
                    check_no_2143_subgraph(&p).unwrap();
                    check_only_root_forks(&p).unwrap();
                    check_u_tree_patterns(&p).unwrap();
                }
            }
        }
    }

    #[test]
    fn fork_detected_outside_class() {
        // The vertex of value 2 is covered by both 4 and 3.
        assert!(check_only_root_forks(&perm("1243")).is_err());
        assert!(check_no_2143_subgraph(&perm("13254")).is_err());
    }

    #[test]
    fn grid_and_json() {
        let p = perm("2143");
        let grid = render_grid(&p);
        assert!(grid.lines().count() >= 5);
        let j = decompose_json(&p);
        assert_eq!(j["schema"], 1);
        assert_eq!(j["edges"].as_array().unwrap().len(), 4);
    }
}
