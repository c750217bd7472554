//! Directed and undirected graph representations, edge-list parsing, and the
//! graph families used throughout the crate.
//!
//! Vertices are 1-based integers `1..=n`. Adjacency is stored as `u64`
//! bitmasks, which caps graphs at [`MAX_VERTICES`] vertices and keeps the
//! subset searches in the rest of the crate cheap.

use std::collections::HashSet;
use std::error::Error;
use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Hard cap on the vertex count, imposed by the bitset representation.
pub const MAX_VERTICES: usize = 64;

/// A set of 1-based vertices, backed by a `u64` bitmask. Ordered
/// lexicographically as ascending vertex lists, matching the order the
/// subset searches promise.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u64);

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl VertexSet {
    /// The empty set.
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The set `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "vertex count {n} exceeds {MAX_VERTICES}");
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    /// The set `{v}`.
    pub fn singleton(v: usize) -> Self {
        let mut s = VertexSet::EMPTY;
        s.insert(v);
        s
    }

    fn bit(v: usize) -> u64 {
        assert!(
            (1..=MAX_VERTICES).contains(&v),
            "vertex {v} outside 1..={MAX_VERTICES}"
        );
        1u64 << (v - 1)
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= Self::bit(v);
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !Self::bit(v);
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0 & Self::bit(v) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn minus(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    /// Iterates the members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (1..=MAX_VERTICES).filter(move |v| bits & (1u64 << (v - 1)) != 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub(crate) fn bits(&self) -> u64 {
        self.0
    }

    #[cfg(test)]
    pub(crate) fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    /// JSON representation: a sorted array of vertex ids.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::Value::from(self.to_vec())
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Errors raised by graph constructors and generators.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphError {
    EmptyVertexSet,
    TooManyVertices { n: usize },
    VertexOutOfRange { v: usize, n: usize },
    SelfLoop { v: usize },
    DuplicateArc { from: usize, to: usize },
    DuplicateEdge { a: usize, b: usize },
    TooFewVertices { family: &'static str, n: usize, min: usize },
    OffsetOutOfRange { offset: usize, n: usize },
    BadArcProbability { p: f64 },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::EmptyVertexSet => write!(f, "graph must have at least one vertex"),
            GraphError::TooManyVertices { n } => {
                write!(f, "vertex count {n} exceeds the supported maximum {MAX_VERTICES}")
            }
            GraphError::VertexOutOfRange { v, n } => {
                write!(f, "vertex {v} outside 1..={n}")
            }
            GraphError::SelfLoop { v } => write!(f, "self-loop at vertex {v}"),
            GraphError::DuplicateArc { from, to } => write!(f, "duplicate arc ({from}, {to})"),
            GraphError::DuplicateEdge { a, b } => write!(f, "duplicate edge {{{a}, {b}}}"),
            GraphError::TooFewVertices { family, n, min } => {
                write!(f, "{family} graph needs at least {min} vertices, got {n}")
            }
            GraphError::OffsetOutOfRange { offset, n } => {
                write!(f, "circulant offset {offset} outside 1..={}", n / 2)
            }
            GraphError::BadArcProbability { p } => {
                write!(f, "arc probability {p} outside [0, 1]")
            }
        }
    }
}

impl Error for GraphError {}

/// A simple directed graph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<u64>,
}

impl Digraph {
    /// Builds a digraph from a list of arcs, rejecting self-loops, duplicates,
    /// and out-of-range endpoints.
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyVertexSet);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n });
        }
        let mut out = vec![0u64; n];
        for &(i, j) in arcs {
            if i == 0 || i > n {
                return Err(GraphError::VertexOutOfRange { v: i, n });
            }
            if j == 0 || j > n {
                return Err(GraphError::VertexOutOfRange { v: j, n });
            }
            if i == j {
                return Err(GraphError::SelfLoop { v: i });
            }
            let bit = 1u64 << (j - 1);
            if out[i - 1] & bit != 0 {
                return Err(GraphError::DuplicateArc { from: i, to: j });
            }
            out[i - 1] |= bit;
        }
        Ok(Digraph { n, out })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Iterates vertex ids `1..=n`.
    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    /// The full vertex set `{1, ..., n}`.
    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.check_vertex(i);
        self.check_vertex(j);
        self.out[i - 1] & (1u64 << (j - 1)) != 0
    }

    /// Arcs in ascending `(i, j)` order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::new();
        for i in 1..=self.n {
            for j in VertexSet(self.out[i - 1]).iter() {
                arcs.push((i, j));
            }
        }
        arcs
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|m| m.count_ones() as usize).sum()
    }

    fn check_vertex(&self, v: usize) {
        assert!(
            v >= 1 && v <= self.n,
            "vertex {v} outside 1..={n}",
            n = self.n
        );
    }

    /// Out-neighbors of `v` in ascending order.
    ///
    /// # Panics
    /// Panics if `v` is outside `1..=n`.
    pub fn out_neighbors(&self, v: usize) -> Vec<usize> {
        self.check_vertex(v);
        VertexSet(self.out[v - 1]).to_vec()
    }

    pub(crate) fn out_mask(&self, v: usize) -> u64 {
        self.out[v - 1]
    }

    pub(crate) fn out_masks(&self) -> &[u64] {
        &self.out
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.check_vertex(v);
        self.out[v - 1].count_ones() as usize
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.check_vertex(v);
        let bit = 1u64 << (v - 1);
        self.out.iter().filter(|&&m| m & bit != 0).count()
    }

    /// Whether the arc set is symmetric: `(i, j)` present iff `(j, i)` present.
    pub fn has_symmetric_arcs(&self) -> bool {
        self.arcs().iter().all(|&(i, j)| self.has_arc(j, i))
    }

    /// All vertices reachable from `sources` along directed paths, sources
    /// included.
    pub fn reachable_from(&self, sources: &VertexSet) -> VertexSet {
        for v in sources.iter() {
            self.check_vertex(v);
        }
        let mut seen = sources.bits();
        loop {
            let mut next = seen;
            for v in 1..=self.n {
                if seen & (1u64 << (v - 1)) != 0 {
                    next |= self.out[v - 1];
                }
            }
            if next == seen {
                return VertexSet(seen);
            }
            seen = next;
        }
    }

    /// Whether the underlying undirected graph is a tree and no arc appears in
    /// both directions, i.e. the digraph is an orientation of a tree.
    pub fn is_ditree(&self) -> bool {
        if self.arc_count() != self.n - 1 {
            return false;
        }
        if self.arcs().iter().any(|&(i, j)| self.has_arc(j, i)) {
            return false;
        }
        // Connectivity of the underlying undirected graph.
        let undirected: Vec<u64> = (1..=self.n)
            .map(|v| {
                let mut m = self.out[v - 1];
                let bit = 1u64 << (v - 1);
                for u in 1..=self.n {
                    if self.out[u - 1] & bit != 0 {
                        m |= 1u64 << (u - 1);
                    }
                }
                m
            })
            .collect();
        let mut seen = 1u64;
        loop {
            let mut next = seen;
            for (v, &mask) in undirected.iter().enumerate() {
                if seen & (1u64 << v) != 0 {
                    next |= mask;
                }
            }
            if next == seen {
                break;
            }
            seen = next;
        }
        seen == VertexSet::full(self.n).bits()
    }

    /// Seeded Erdos-Renyi digraph: each ordered pair becomes an arc
    /// independently with probability `p`.
    pub fn random(n: usize, p: f64, seed: u64) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyVertexSet);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphError::BadArcProbability { p });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut arcs = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if i != j && rng.random_bool(p) {
                    arcs.push((i, j));
                }
            }
        }
        Digraph::new(n, &arcs)
    }

    /// Seeded random ditree: a uniformly random labelled tree with each edge
    /// given an independent random orientation.
    pub fn random_ditree(n: usize, seed: u64) -> Result<Self, GraphError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = random_tree_edges(n, &mut rng)?;
        let arcs: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| if rng.random_bool(0.5) { (a, b) } else { (b, a) })
            .collect();
        Digraph::new(n, &arcs)
    }

    /// Seeded random arborescence: a uniformly random labelled tree with every
    /// edge oriented away from vertex 1.
    pub fn random_arborescence(n: usize, seed: u64) -> Result<Self, GraphError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = random_tree_edges(n, &mut rng)?;
        let mut adj = vec![Vec::new(); n + 1];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut arcs = Vec::new();
        let mut visited = vec![false; n + 1];
        let mut stack = vec![1usize];
        visited[1] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !visited[w] {
                    visited[w] = true;
                    arcs.push((u, w));
                    stack.push(w);
                }
            }
        }
        Digraph::new(n, &arcs)
    }

    /// Serializes to the edge-list text format (header line plus one arc per
    /// line). `parse_digraph` inverts this exactly.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for (i, j) in self.arcs() {
            s.push_str(&format!("{i} {j}\n"));
        }
        s
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs={:?})", self.n, self.arcs())
    }
}

/// Uniform labelled tree on `1..=n` via a random Pruefer sequence.
fn random_tree_edges(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>, GraphError> {
    if n == 0 {
        return Err(GraphError::EmptyVertexSet);
    }
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices { n });
    }
    if n == 1 {
        return Ok(Vec::new());
    }
    if n == 2 {
        return Ok(vec![(1, 2)]);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(1..=n)).collect();
    let mut degree = vec![1usize; n + 1];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves: std::collections::BTreeSet<usize> =
        (1..=n).filter(|&v| degree[v] == 1).collect();
    for &x in &seq {
        let leaf = *leaves.iter().next().expect("a leaf always remains");
        leaves.remove(&leaf);
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let mut last = leaves.into_iter();
    let a = last.next().expect("two vertices remain");
    let b = last.next().expect("two vertices remain");
    edges.push((a, b));
    Ok(edges)
}

/// A simple undirected graph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    adj: Vec<u64>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyVertexSet);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n });
        }
        let mut adj = vec![0u64; n];
        for &(a, b) in edges {
            if a == 0 || a > n {
                return Err(GraphError::VertexOutOfRange { v: a, n });
            }
            if b == 0 || b > n {
                return Err(GraphError::VertexOutOfRange { v: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { v: a });
            }
            if adj[a - 1] & (1u64 << (b - 1)) != 0 {
                return Err(GraphError::DuplicateEdge {
                    a: a.min(b),
                    b: a.max(b),
                });
            }
            adj[a - 1] |= 1u64 << (b - 1);
            adj[b - 1] |= 1u64 << (a - 1);
        }
        Ok(UndirectedGraph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(a, b)` with `a < b`, in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for a in 1..=self.n {
            for b in VertexSet(self.adj[a - 1]).iter() {
                if a < b {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        assert!(a >= 1 && a <= self.n && b >= 1 && b <= self.n);
        self.adj[a - 1] & (1u64 << (b - 1)) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        assert!(v >= 1 && v <= self.n);
        self.adj[v - 1].count_ones() as usize
    }

    /// The path graph `P_n` with edges `{i, i+1}`.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::TooFewVertices {
                family: "path",
                n,
                min: 1,
            });
        }
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        UndirectedGraph::new(n, &edges)
    }

    /// The cycle graph `C_n`.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::TooFewVertices {
                family: "cycle",
                n,
                min: 3,
            });
        }
        let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        edges.push((n, 1));
        UndirectedGraph::new(n, &edges)
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::TooFewVertices {
                family: "complete",
                n,
                min: 1,
            });
        }
        let mut edges = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                edges.push((a, b));
            }
        }
        UndirectedGraph::new(n, &edges)
    }

    /// The circulant graph on `n` vertices: `i` is adjacent to `i +- s (mod n)`
    /// for every offset `s`. Offsets must satisfy `1 <= s <= n/2`.
    pub fn circulant(n: usize, offsets: &[usize]) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewVertices {
                family: "circulant",
                n,
                min: 2,
            });
        }
        let mut edges = std::collections::BTreeSet::new();
        for &s in offsets {
            if s < 1 || 2 * s > n {
                return Err(GraphError::OffsetOutOfRange { offset: s, n });
            }
            // The offset n/2 pairs each vertex with its antipode, so the two
            // wrap-around passes produce the same edge; the set dedupes it.
            for i in 1..=n {
                let j = (i - 1 + s) % n + 1;
                edges.insert((i.min(j), i.max(j)));
            }
        }
        let edges: Vec<(usize, usize)> = edges.into_iter().collect();
        UndirectedGraph::new(n, &edges)
    }

    /// The symmetric digraph obtained by replacing each edge `{i, j}` with the
    /// two opposite arcs `(i, j)` and `(j, i)`.
    pub fn lift(&self) -> Digraph {
        Digraph {
            n: self.n,
            out: self.adj.clone(),
        }
    }

    /// The graph Laplacian `L = D - A` as a dense matrix.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                self.degree(r + 1) as f64
            } else if self.adjacent(r + 1, c + 1) {
                -1.0
            } else {
                0.0
            }
        })
    }

    /// Serializes to the edge-list text format, each edge listed once.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for (a, b) in self.edges() {
            s.push_str(&format!("{a} {b}\n"));
        }
        s
    }
}

impl fmt::Debug for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UndirectedGraph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Errors raised while parsing the edge-list text format, pointing at the
/// offending line.
#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParseErrorKind {
    EmptyInput,
    MalformedLine { content: String },
    ZeroVertexIndex,
    SelfLoop,
    DuplicateArc { from: usize, to: usize },
    DuplicateEdge { a: usize, b: usize },
    BadHeader { content: String },
    VertexExceedsHeader { v: usize, n: usize },
    Graph(GraphError),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::EmptyInput => write!(f, "no graph data found"),
            ParseErrorKind::MalformedLine { content } => {
                write!(f, "malformed line {}: '{}'", self.line, content)
            }
            ParseErrorKind::ZeroVertexIndex => {
                write!(f, "vertex index 0 at line {}", self.line)
            }
            ParseErrorKind::SelfLoop => write!(f, "self-loop at line {}", self.line),
            ParseErrorKind::DuplicateArc { from, to } => {
                write!(f, "duplicate arc ({from}, {to}) at line {}", self.line)
            }
            ParseErrorKind::DuplicateEdge { a, b } => {
                write!(f, "duplicate edge {{{a}, {b}}} at line {}", self.line)
            }
            ParseErrorKind::BadHeader { content } => {
                write!(f, "bad header at line {}: '{}'", self.line, content)
            }
            ParseErrorKind::VertexExceedsHeader { v, n } => {
                write!(
                    f,
                    "vertex {v} at line {} exceeds declared count {n}",
                    self.line
                )
            }
            ParseErrorKind::Graph(e) => write!(f, "line {}: {e}", self.line),
        }
    }
}

impl Error for ParseError {}

struct RawEdgeList {
    header_n: Option<usize>,
    pairs: Vec<(usize, usize, usize)>, // (i, j, line)
}

/// Shared tokenizer for both the directed and the undirected format. Lines are
/// `i j` pairs, `#` starts a comment, an optional first line `n <count>`
/// declares the vertex count.
fn scan_edge_list(text: &str) -> Result<RawEdgeList, ParseError> {
    let mut header_n = None;
    let mut pairs = Vec::new();
    let mut saw_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if !saw_data && tokens[0] == "n" {
            if tokens.len() != 2 {
                return Err(ParseError {
                    line: line_no,
                    kind: ParseErrorKind::BadHeader {
                        content: line.to_string(),
                    },
                });
            }
            let n: usize = tokens[1].parse().map_err(|_| ParseError {
                line: line_no,
                kind: ParseErrorKind::BadHeader {
                    content: line.to_string(),
                },
            })?;
            if n == 0 {
                return Err(ParseError {
                    line: line_no,
                    kind: ParseErrorKind::BadHeader {
                        content: line.to_string(),
                    },
                });
            }
            if n > MAX_VERTICES {
                return Err(ParseError {
                    line: line_no,
                    kind: ParseErrorKind::Graph(GraphError::TooManyVertices { n }),
                });
            }
            header_n = Some(n);
            saw_data = true;
            continue;
        }
        saw_data = true;
        if tokens.len() != 2 {
            return Err(ParseError {
                line: line_no,
                kind: ParseErrorKind::MalformedLine {
                    content: line.to_string(),
                },
            });
        }
        let parse_vertex = |tok: &str| -> Result<usize, ParseError> {
            let v: usize = tok.parse().map_err(|_| ParseError {
                line: line_no,
                kind: ParseErrorKind::MalformedLine {
                    content: line.to_string(),
                },
            })?;
            if v == 0 {
                return Err(ParseError {
                    line: line_no,
                    kind: ParseErrorKind::ZeroVertexIndex,
                });
            }
            Ok(v)
        };
        let i = parse_vertex(tokens[0])?;
        let j = parse_vertex(tokens[1])?;
        if i == j {
            return Err(ParseError {
                line: line_no,
                kind: ParseErrorKind::SelfLoop,
            });
        }
        if let Some(n) = header_n {
            for v in [i, j] {
                if v > n {
                    return Err(ParseError {
                        line: line_no,
                        kind: ParseErrorKind::VertexExceedsHeader { v, n },
                    });
                }
            }
        }
        pairs.push((i, j, line_no));
    }
    if !saw_data {
        return Err(ParseError {
            line: 0,
            kind: ParseErrorKind::EmptyInput,
        });
    }
    Ok(RawEdgeList { header_n, pairs })
}

fn resolved_n(raw: &RawEdgeList, last_line: usize) -> Result<usize, ParseError> {
    let n = raw.header_n.unwrap_or_else(|| {
        raw.pairs
            .iter()
            .map(|&(i, j, _)| i.max(j))
            .max()
            .unwrap_or(0)
    });
    if n == 0 {
        return Err(ParseError {
            line: 0,
            kind: ParseErrorKind::EmptyInput,
        });
    }
    if n > MAX_VERTICES {
        return Err(ParseError {
            line: last_line,
            kind: ParseErrorKind::Graph(GraphError::TooManyVertices { n }),
        });
    }
    Ok(n)
}

/// Parses a directed edge list. Each line `i j` is the arc `(i, j)`.
pub fn parse_digraph(text: &str) -> Result<Digraph, ParseError> {
    let raw = scan_edge_list(text)?;
    let last_line = raw.pairs.last().map(|&(_, _, l)| l).unwrap_or(0);
    let n = resolved_n(&raw, last_line)?;
    let mut seen = HashSet::new();
    let mut arcs = Vec::with_capacity(raw.pairs.len());
    for &(i, j, line) in &raw.pairs {
        if !seen.insert((i, j)) {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::DuplicateArc { from: i, to: j },
            });
        }
        arcs.push((i, j));
    }
    Digraph::new(n, &arcs).map_err(|e| ParseError {
        line: last_line,
        kind: ParseErrorKind::Graph(e),
    })
}

/// Parses an undirected edge list. Each edge is listed once; a repeated edge
/// in either orientation is an error.
pub fn parse_undirected(text: &str) -> Result<UndirectedGraph, ParseError> {
    let raw = scan_edge_list(text)?;
    let last_line = raw.pairs.last().map(|&(_, _, l)| l).unwrap_or(0);
    let n = resolved_n(&raw, last_line)?;
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(raw.pairs.len());
    for &(i, j, line) in &raw.pairs {
        let key = (i.min(j), i.max(j));
        if !seen.insert(key) {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::DuplicateEdge { a: key.0, b: key.1 },
            });
        }
        edges.push((i, j));
    }
    UndirectedGraph::new(n, &edges).map_err(|e| ParseError {
        line: last_line,
        kind: ParseErrorKind::Graph(e),
    })
}

#[cfg(test)]
pub(crate) use tests::example_graph_6v;

#[cfg(test)]
mod tests {
    use super::*;

    /// The 6-vertex, 9-arc worked example used throughout the crate's tests.
    pub(crate) fn example_graph_6v() -> Digraph {
        Digraph::new(
            6,
            &[
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 3),
                (5, 4),
                (5, 6),
                (5, 1),
                (5, 2),
                (6, 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn parse_simple_directed() {
        let g = parse_digraph("1 2\n2 3").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.arcs(), vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn parse_rejects_self_loop_with_line() {
        let err = parse_digraph("1 1").unwrap_err();
        assert_eq!(err.to_string(), "self-loop at line 1");
    }

    #[test]
    fn parse_rejects_zero_vertex() {
        let err = parse_digraph("0 2").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(matches!(err.kind, ParseErrorKind::ZeroVertexIndex));
    }

    #[test]
    fn parse_rejects_duplicate_arc() {
        let err = parse_digraph("1 2\n1 2").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn parse_rejects_malformed() {
        let err = parse_digraph("1 2\nfoo bar baz").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.kind, ParseErrorKind::MalformedLine { .. }));
    }

    #[test]
    fn parse_honors_header_and_comments() {
        let g = parse_digraph("# comment\nn 6\n1 2 # trailing\n\r\n2 3\r\n").unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.arc_count(), 2);
    }

    #[test]
    fn parse_example_graph_file() {
        let text = "1 2\n2 3\n3 4\n4 3\n5 4\n5 6\n5 1\n5 2\n6 1\n";
        let g = parse_digraph(text).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g, example_graph_6v());
    }

    #[test]
    fn roundtrip_directed() {
        let g = example_graph_6v();
        let again = parse_digraph(&g.to_edge_list()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn lift_single_edge() {
        let h = UndirectedGraph::new(2, &[(1, 2)]).unwrap();
        let g = h.lift();
        assert_eq!(g.arcs(), vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn lift_is_symmetric() {
        let h = UndirectedGraph::path(4).unwrap();
        let g = h.lift();
        assert_eq!(g.arc_count(), 6);
        assert!(g.has_symmetric_arcs());
        let c5 = UndirectedGraph::cycle(5).unwrap().lift();
        assert_eq!(c5.arc_count(), 10);
        assert!(c5.has_symmetric_arcs());
    }

    #[test]
    fn generators_basic() {
        assert_eq!(UndirectedGraph::path(4).unwrap().edges(), vec![(1, 2), (2, 3), (3, 4)]);
        assert_eq!(UndirectedGraph::cycle(5).unwrap().edge_count(), 5);
        assert_eq!(UndirectedGraph::complete(4).unwrap().edge_count(), 6);
        assert!(UndirectedGraph::cycle(2).is_err());
        assert!(UndirectedGraph::path(0).is_err());
    }

    #[test]
    fn circulant_degree_and_edges() {
        // Oracle: direct degree count on the constructed graph.
        let g = UndirectedGraph::circulant(10, &[1, 2, 3]).unwrap();
        assert_eq!(g.edge_count(), 30);
        for v in 1..=10 {
            assert_eq!(g.degree(v), 6);
        }
    }

    #[test]
    fn circulant_cycle_and_complete() {
        for n in 3..=10 {
            let c = UndirectedGraph::circulant(n, &[1]).unwrap();
            assert_eq!(c.edges(), UndirectedGraph::cycle(n).unwrap().edges());
        }
        // n/2 offset contributes degree 1: {1,2} matches K_4.
        let k4 = UndirectedGraph::circulant(4, &[1, 2]).unwrap();
        assert_eq!(k4.edges(), UndirectedGraph::complete(4).unwrap().edges());
    }

    #[test]
    fn circulant_rejects_bad_offset() {
        assert!(UndirectedGraph::circulant(10, &[0]).is_err());
        assert!(UndirectedGraph::circulant(10, &[6]).is_err());
    }

    #[test]
    fn random_digraph_extremes() {
        let g = Digraph::random(5, 0.0, 7).unwrap();
        assert_eq!(g.arc_count(), 0);
        let g = Digraph::random(5, 1.0, 7).unwrap();
        assert_eq!(g.arc_count(), 20);
        assert!(Digraph::random(5, 1.5, 7).is_err());
    }

    #[test]
    fn random_digraph_is_seed_deterministic() {
        let a = Digraph::random(8, 0.4, 123).unwrap();
        let b = Digraph::random(8, 0.4, 123).unwrap();
        assert_eq!(a, b);
        let c = Digraph::random(8, 0.4, 124).unwrap();
        assert_ne!(a, c);
    }

    /// Union-find oracle: underlying edges of a ditree are acyclic and connect
    /// all vertices.
    fn union_find_is_tree(n: usize, edges: &[(usize, usize)]) -> bool {
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut merged = 0;
        for &(a, b) in edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
            merged += 1;
        }
        merged == n - 1
    }

    #[test]
    fn random_ditree_is_a_tree() {
        for seed in 0..20 {
            let g = Digraph::random_ditree(6, seed).unwrap();
            assert_eq!(g.arc_count(), 5);
            let undirected: Vec<(usize, usize)> = g.arcs();
            assert!(union_find_is_tree(6, &undirected), "seed {seed}");
            assert!(g.is_ditree(), "seed {seed}");
        }
    }

    #[test]
    fn arborescence_reaches_everything() {
        for seed in 0..10 {
            let g = Digraph::random_arborescence(7, seed).unwrap();
            assert!(g.is_ditree());
            assert_eq!(
                g.reachable_from(&VertexSet::singleton(1)),
                VertexSet::full(7)
            );
        }
    }

    #[test]
    fn neighborhood_queries_on_example() {
        let g = example_graph_6v();
        assert_eq!(g.out_neighbors(5), vec![1, 2, 4, 6]);
        assert_eq!(g.in_degree(3), 2);
        assert_eq!(g.in_degree(5), 0);
        // BFS by hand over the 9 arcs: 1 -> 2 -> 3 <-> 4.
        assert_eq!(
            g.reachable_from(&VertexSet::singleton(1)).to_vec(),
            vec![1, 2, 3, 4]
        );
    }

    #[test]
    fn is_ditree_rejects_cycles_and_symmetric_pairs() {
        let g = example_graph_6v();
        assert!(!g.is_ditree());
        let sym = UndirectedGraph::path(3).unwrap().lift();
        assert!(!sym.is_ditree());
        let path = Digraph::new(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(path.is_ditree());
        let single = Digraph::new(1, &[]).unwrap();
        assert!(single.is_ditree());
    }

    #[test]
    fn vertex_set_basics() {
        let s: VertexSet = [3usize, 1, 5].into_iter().collect();
        assert_eq!(s.to_vec(), vec![1, 3, 5]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(3));
        assert!(!s.contains(2));
        assert_eq!(format!("{s}"), "{1, 3, 5}");
        assert!(s.is_subset(&VertexSet::full(5)));
        assert_eq!(VertexSet::full(64).len(), 64);
    }

    mod roundtrip {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn directed_edge_list_round_trips(seed in 0u64..2000, n in 1usize..12, p in 0.0f64..0.8) {
                let g = Digraph::random(n, p, seed).unwrap();
                let again = parse_digraph(&g.to_edge_list()).unwrap();
                prop_assert_eq!(g, again);
            }

            #[test]
            fn undirected_edge_list_round_trips(seed in 0u64..2000, n in 1usize..12) {
                let d = Digraph::random(n, 0.4, seed).unwrap();
                // Symmetrize into an undirected graph, then round-trip it.
                let edges: Vec<(usize, usize)> = d
                    .arcs()
                    .into_iter()
                    .filter(|&(i, j)| i < j)
                    .collect();
                let h = UndirectedGraph::new(n, &edges).unwrap();
                let again = parse_undirected(&h.to_edge_list()).unwrap();
                prop_assert_eq!(h, again);
            }
        }
    }

    #[test]
    fn vertex_set_order_is_list_lexicographic() {
        let a: VertexSet = [1usize, 5].into_iter().collect();
        let b: VertexSet = [2usize, 3].into_iter().collect();
        assert!(a < b);
        let c: VertexSet = [1usize].into_iter().collect();
        assert!(c < a);
        let mut sets = vec![b, a, c];
        sets.sort();
        assert_eq!(sets, vec![c, a, b]);
    }
}
