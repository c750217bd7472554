//! Minimal path covers of ditrees and the leader-selection recipe they carry:
//! the initial points of a minimal cover form a minimal zero forcing set, and
//! the path cover number equals the zero forcing number on ditrees.

use std::error::Error;
use std::fmt;

use crate::graph::{Digraph, VertexSet};

/// A partition of the vertices into vertex-disjoint induced directed paths,
/// stored as sorted vertex lists, lexicographically ordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCover {
    paths: Vec<Vec<usize>>,
}

impl PathCover {
    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// JSON representation: a list of vertex lists.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.paths
                .iter()
                .map(|p| serde_json::Value::from(p.clone()))
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathCoverError {
    NotADitree,
}

impl fmt::Display for PathCoverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathCoverError::NotADitree => {
                write!(f, "path covers are computed for ditrees only")
            }
        }
    }
}

impl Error for PathCoverError {}

/// Maximum number of arcs usable simultaneously when every vertex may have at
/// most one chosen out-arc and one chosen in-arc. On a ditree the chosen arcs
/// always decompose into vertex-disjoint paths, so this maximum determines
/// the minimum cover size `n - max`.
fn max_usable_arcs(
    arcs: &[(usize, usize)],
    idx: usize,
    used_out: u64,
    used_in: u64,
    count: usize,
    best: &mut usize,
) {
    if count + (arcs.len() - idx) <= *best {
        return;
    }
    if idx == arcs.len() {
        *best = (*best).max(count);
        return;
    }
    let (u, v) = arcs[idx];
    let ub = 1u64 << (u - 1);
    let vb = 1u64 << (v - 1);
    if used_out & ub == 0 && used_in & vb == 0 {
        max_usable_arcs(arcs, idx + 1, used_out | ub, used_in | vb, count + 1, best);
    }
    max_usable_arcs(arcs, idx + 1, used_out, used_in, count, best);
}

/// Enumerates every arc set of the optimal size and keeps the cover whose
/// sorted path list is lexicographically least.
struct CoverSearch<'a> {
    arcs: &'a [(usize, usize)],
    target: usize,
    n: usize,
    best: Option<Vec<Vec<usize>>>,
}

impl CoverSearch<'_> {
    fn run(&mut self, idx: usize, used_out: u64, used_in: u64, chosen: &mut Vec<(usize, usize)>) {
        if chosen.len() + (self.arcs.len() - idx) < self.target {
            return;
        }
        if idx == self.arcs.len() {
            if chosen.len() == self.target {
                let cover = assemble_paths(self.n, chosen);
                match &self.best {
                    Some(best) if cover >= *best => {}
                    _ => self.best = Some(cover),
                }
            }
            return;
        }
        let (u, v) = self.arcs[idx];
        let ub = 1u64 << (u - 1);
        let vb = 1u64 << (v - 1);
        if chosen.len() < self.target && used_out & ub == 0 && used_in & vb == 0 {
            chosen.push((u, v));
            self.run(idx + 1, used_out | ub, used_in | vb, chosen);
            chosen.pop();
        }
        self.run(idx + 1, used_out, used_in, chosen);
    }
}

/// Turns a set of in/out-degree-compatible arcs into the sorted list of paths
/// they induce.
fn assemble_paths(n: usize, chosen: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut succ = vec![0usize; n + 1];
    let mut has_pred = vec![false; n + 1];
    for &(u, v) in chosen {
        succ[u] = v;
        has_pred[v] = true;
    }
    let mut paths = Vec::new();
    for start in (1..=n).filter(|&s| !has_pred[s]) {
        let mut path = vec![start];
        let mut cur = start;
        while succ[cur] != 0 {
            cur = succ[cur];
            path.push(cur);
        }
        paths.push(path);
    }
    paths.sort();
    paths
}

/// Validates the cover contract: vertex-disjoint induced directed paths that
/// jointly cover `V`.
fn cover_is_valid(t: &Digraph, paths: &[Vec<usize>]) -> bool {
    let mut seen = VertexSet::EMPTY;
    for path in paths {
        for window in path.windows(2) {
            if !t.has_arc(window[0], window[1]) {
                return false;
            }
        }
        for (i, &a) in path.iter().enumerate() {
            if seen.contains(a) {
                return false;
            }
            seen.insert(a);
            for (j, &b) in path.iter().enumerate() {
                let consecutive = i + 1 == j || j + 1 == i;
                if i != j && !consecutive && (t.has_arc(a, b) || t.has_arc(b, a)) {
                    return false;
                }
                if j + 1 == i && t.has_arc(a, b) {
                    return false;
                }
            }
        }
    }
    seen == t.vertex_set()
}

/// A minimum-cardinality path cover of the ditree `t`, deterministic: among
/// the optimal covers the lexicographically least sorted list of paths is
/// returned.
pub fn minimal_path_cover(t: &Digraph) -> Result<PathCover, PathCoverError> {
    if !t.is_ditree() {
        return Err(PathCoverError::NotADitree);
    }
    let n = t.n();
    let arcs = t.arcs();
    let mut best = 0usize;
    max_usable_arcs(&arcs, 0, 0, 0, 0, &mut best);
    let mut search = CoverSearch {
        arcs: &arcs,
        target: best,
        n,
        best: None,
    };
    search.run(0, 0, 0, &mut Vec::new());
    let paths = search.best.expect("the all-singletons cover always exists");
    assert!(cover_is_valid(t, &paths), "search produced an invalid cover");
    Ok(PathCover { paths })
}

/// The path cover number `P(T)`: the size of a minimal path cover.
pub fn path_cover_number(t: &Digraph) -> Result<usize, PathCoverError> {
    Ok(minimal_path_cover(t)?.len())
}

/// The initial points of the cover's paths. On a ditree this is a minimal
/// zero forcing set of size `P(T)`.
pub fn leaders_from_cover(cover: &PathCover) -> VertexSet {
    cover.paths.iter().map(|p| p[0]).collect()
}
