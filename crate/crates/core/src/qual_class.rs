//! Matrices patterned on a graph: the qualitative class `Q(G)`, its symmetric
//! subclasses, seeded sampling, conformance checks, and the constructive
//! witnesses used by the strong-structural-controllability verdicts.
//!
//! Membership in `Q(G)` constrains off-diagonal entries only: `X[i][j]` is
//! nonzero exactly when the arc `(j, i)` exists. Diagonal entries are free,
//! which every construction below exploits.

use std::error::Error;
use std::fmt;

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{as_integer_matrix, left_multiply};
use crate::graph::{Digraph, VertexSet};
use crate::zero_forcing::derived_set;

/// Sign constraint for the same-sign subclass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn factor(&self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    pub fn matches(&self, v: f64) -> bool {
        match self {
            Sign::Positive => v > 0.0,
            Sign::Negative => v < 0.0,
        }
    }
}

/// Which subclass of `Q(G)` a matrix is sampled from or checked against.
///
/// `Symmetric` is the subclass `{X in Q(G) : X = X^T}`; `SymmetricSameSign`
/// additionally requires every off-diagonal nonzero to carry the given sign
/// (Laplacians and adjacency matrices live there). Both require the arc set
/// itself to be symmetric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubclassSpec {
    Full,
    Symmetric,
    SymmetricSameSign(Sign),
}

impl SubclassSpec {
    pub fn requires_symmetric_arcs(&self) -> bool {
        !matches!(self, SubclassSpec::Full)
    }
}

/// Errors raised by the pattern-matrix operations.
#[derive(Clone, Debug, PartialEq)]
pub enum QualClassError {
    DimensionMismatch { expected: usize, rows: usize, cols: usize },
    PatternViolation { row: usize, col: usize, expected_nonzero: bool },
    AsymmetricArcs,
    ZeroNullVector,
    NotNullVector { residual: f64, tol: f64 },
    NotLeftNull { residual: f64, tol: f64 },
}

impl fmt::Display for QualClassError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QualClassError::DimensionMismatch { expected, rows, cols } => write!(
                f,
                "expected a {expected}x{expected} matrix, got {rows}x{cols}"
            ),
            QualClassError::PatternViolation { row, col, expected_nonzero } => {
                if *expected_nonzero {
                    write!(f, "entry ({row}, {col}) must be nonzero for this graph")
                } else {
                    write!(f, "entry ({row}, {col}) must be zero for this graph")
                }
            }
            QualClassError::AsymmetricArcs => {
                write!(f, "symmetric subclass requires a symmetric arc set")
            }
            QualClassError::ZeroNullVector => write!(f, "null vector must be nonzero"),
            QualClassError::NotNullVector { residual, tol } => write!(
                f,
                "vector does not annihilate the pencil (residual {residual:.3e} > {tol:.3e})"
            ),
            QualClassError::NotLeftNull { residual, tol } => write!(
                f,
                "z^T X is not zero (residual {residual:.3e} > {tol:.3e})"
            ),
        }
    }
}

impl Error for QualClassError {}

/// Whether `X[row][col]` must be nonzero for membership in `Q(G)`.
/// Both indices are 1-based; diagonal entries are never constrained.
fn required_nonzero(g: &Digraph, row: usize, col: usize) -> bool {
    row != col && g.has_arc(col, row)
}

/// A dense real matrix paired with the graph it is patterned on. Construction
/// validates membership in the full class `Q(G)`.
#[derive(Clone, Debug)]
pub struct PatternMatrix {
    graph: Digraph,
    entries: DMatrix<f64>,
}

impl PatternMatrix {
    pub fn new(graph: Digraph, entries: DMatrix<f64>) -> Result<Self, QualClassError> {
        let n = graph.n();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(QualClassError::DimensionMismatch {
                expected: n,
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        for row in 1..=n {
            for col in 1..=n {
                if row == col {
                    continue;
                }
                let nonzero = entries[(row - 1, col - 1)] != 0.0;
                let required = required_nonzero(&graph, row, col);
                if nonzero != required {
                    return Err(QualClassError::PatternViolation {
                        row,
                        col,
                        expected_nonzero: required,
                    });
                }
            }
        }
        Ok(PatternMatrix { graph, entries })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        matrix_to_json(&self.entries)
    }
}

/// Checks membership of `x` in the given subclass of `Q(G)`. Zero tests are
/// exact; symmetry is bitwise equality of mirrored entries.
pub fn conforms(
    g: &Digraph,
    x: &DMatrix<f64>,
    spec: SubclassSpec,
) -> Result<bool, QualClassError> {
    let n = g.n();
    if x.nrows() != n || x.ncols() != n {
        return Err(QualClassError::DimensionMismatch {
            expected: n,
            rows: x.nrows(),
            cols: x.ncols(),
        });
    }
    for row in 1..=n {
        for col in 1..=n {
            if row == col {
                continue;
            }
            let v = x[(row - 1, col - 1)];
            if required_nonzero(g, row, col) {
                if v == 0.0 {
                    return Ok(false);
                }
                if let SubclassSpec::SymmetricSameSign(sign) = spec {
                    if !sign.matches(v) {
                        return Ok(false);
                    }
                }
            } else if v != 0.0 {
                return Ok(false);
            }
        }
    }
    if spec.requires_symmetric_arcs() {
        for r in 0..n {
            for c in r + 1..n {
                if x[(r, c)] != x[(c, r)] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Draws a matrix from the subclass, reproducibly from `seed`.
///
/// Off-diagonal nonzeros have magnitude in `[0.2, 2)` so sampled matrices stay
/// away from the pattern boundary; diagonals are uniform on `[-2, 2)`.
pub fn sample_matrix(
    g: &Digraph,
    spec: SubclassSpec,
    seed: u64,
) -> Result<PatternMatrix, QualClassError> {
    if spec.requires_symmetric_arcs() && !g.has_symmetric_arcs() {
        return Err(QualClassError::AsymmetricArcs);
    }
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nonzero = |rng: &mut ChaCha8Rng, sign: Option<Sign>| -> f64 {
        let mag = rng.random_range(0.2..2.0);
        match sign {
            Some(s) => s.factor() * mag,
            None => {
                if rng.random_bool(0.5) {
                    -mag
                } else {
                    mag
                }
            }
        }
    };
    let mut entries = DMatrix::zeros(n, n);
    match spec {
        SubclassSpec::Full => {
            for row in 1..=n {
                for col in 1..=n {
                    if row == col {
                        entries[(row - 1, col - 1)] = rng.random_range(-2.0..2.0);
                    } else if required_nonzero(g, row, col) {
                        entries[(row - 1, col - 1)] = nonzero(&mut rng, None);
                    }
                }
            }
        }
        SubclassSpec::Symmetric | SubclassSpec::SymmetricSameSign(_) => {
            let sign = match spec {
                SubclassSpec::SymmetricSameSign(s) => Some(s),
                _ => None,
            };
            for row in 1..=n {
                for col in row..=n {
                    if row == col {
                        entries[(row - 1, col - 1)] = rng.random_range(-2.0..2.0);
                    } else if required_nonzero(g, row, col) {
                        let v = nonzero(&mut rng, sign);
                        entries[(row - 1, col - 1)] = v;
                        entries[(col - 1, row - 1)] = v;
                    }
                }
            }
        }
    }
    PatternMatrix::new(g.clone(), entries)
}

/// An exact certificate that a leader set fails: `z` is a nonzero integer
/// vector with `z^T X = 0` and `z` supported off the leaders, so
/// `[X U(V; V_L)]` is rank deficient.
#[derive(Clone, Debug)]
pub struct UncontrollabilityWitness {
    pub matrix: PatternMatrix,
    pub null_vector: Vec<i64>,
}

impl UncontrollabilityWitness {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "matrix": self.matrix.to_json_value(),
            "null_vector": self.null_vector,
        })
    }
}

/// Constructs the exact uncontrollability witness for a non-ZFS leader set,
/// or `None` when `leaders` is a zero forcing set.
///
/// When the closure from `leaders` stalls short of `V`, no derived-black
/// vertex has exactly one white out-neighbor, so in the (white rows, black
/// columns) block of any `X in Q(G)` every column has zero or at least two
/// free nonzeros. Balancing each such column to sum to zero, and choosing the
/// white diagonals so the white-white columns also sum to zero, makes the
/// indicator vector of the white vertices an exact integer left-null vector
/// of `[X U]`.
pub fn uncontrollable_witness(
    g: &Digraph,
    leaders: &VertexSet,
) -> Option<UncontrollabilityWitness> {
    let n = g.n();
    let (derived, _) = derived_set(g, *leaders);
    if derived == g.vertex_set() {
        return None;
    }
    let whites = g.vertex_set().minus(&derived);

    let mut ent = vec![vec![0i64; n + 1]; n + 1];
    // Black rows: any conforming values work there, the null vector ignores
    // them.
    for row in derived.iter() {
        for col in g.vertices() {
            if required_nonzero(g, row, col) {
                ent[row][col] = 1;
            }
        }
    }
    // White rows, black columns: balance each column to sum to zero. The
    // column lists the white out-neighbors of a black vertex, so it has zero
    // or at least two entries.
    for col in derived.iter() {
        let rows: Vec<usize> = whites
            .iter()
            .filter(|&r| required_nonzero(g, r, col))
            .collect();
        debug_assert_ne!(rows.len(), 1, "closure stalled yet a force applies");
        if rows.len() >= 2 {
            let m = rows.len();
            for &r in &rows[..m - 1] {
                ent[r][col] = 1;
            }
            ent[rows[m - 1]][col] = -((m - 1) as i64);
        }
    }
    // White columns: free off-diagonal values 1, diagonal balances the column.
    for col in whites.iter() {
        let mut sum = 0i64;
        for row in whites.iter() {
            if row != col && required_nonzero(g, row, col) {
                ent[row][col] = 1;
                sum += 1;
            }
        }
        ent[col][col] = -sum;
    }

    let entries = DMatrix::from_fn(n, n, |r, c| ent[r + 1][c + 1] as f64);
    let matrix = PatternMatrix::new(g.clone(), entries)
        .expect("witness construction conforms by construction");
    let null_vector: Vec<i64> = (1..=n).map(|v| i64::from(whites.contains(v))).collect();

    debug_assert!({
        let im = as_integer_matrix(matrix.entries()).unwrap();
        left_multiply(&null_vector, &im).iter().all(|&v| v == 0)
    });
    Some(UncontrollabilityWitness {
        matrix,
        null_vector,
    })
}

/// Converts a complex left-null vector of the pencil `[X - lambda*I  U]` into
/// a real one for a diagonal perturbation of `X`.
///
/// Writing `z = p + jq`, the vector `x = p + alpha*q` keeps the zero pattern
/// of `z` for any `alpha` outside the finite set `{-p_i/q_i : q_i != 0}`;
/// taking `alpha` one larger than the largest magnitude in that set avoids it.
/// Subtracting the diagonal `d_i = (x^T X)_i / x_i` (zero where `x_i = 0`)
/// yields `Xhat` in `Q(G)` with `x^T Xhat = 0` and `x^T U = 0`.
pub fn realify_pbh_null(
    z: &[Complex<f64>],
    lambda: Complex<f64>,
    x: &PatternMatrix,
    u: &DMatrix<f64>,
    tol: f64,
) -> Result<(DVector<f64>, PatternMatrix), QualClassError> {
    let n = x.n();
    assert_eq!(z.len(), n, "null vector length mismatch");
    assert_eq!(u.nrows(), n, "input matrix row mismatch");

    let z_max = z.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if z_max == 0.0 {
        return Err(QualClassError::ZeroNullVector);
    }
    let z: Vec<Complex<f64>> = z.iter().map(|c| c / z_max).collect();

    // Residual of z* [X - lambda*I  U].
    let xm = x.entries();
    let mut residual = 0.0f64;
    for col in 0..n {
        let mut acc = Complex::new(0.0, 0.0);
        for row in 0..n {
            let mut entry = Complex::new(xm[(row, col)], 0.0);
            if row == col {
                entry -= lambda;
            }
            acc += z[row].conj() * entry;
        }
        residual = residual.max(acc.norm());
    }
    for col in 0..u.ncols() {
        let mut acc = Complex::new(0.0, 0.0);
        for row in 0..n {
            acc += z[row].conj() * u[(row, col)];
        }
        residual = residual.max(acc.norm());
    }
    let scale = xm
        .iter()
        .fold(1.0f64, |a, &v| a.max(v.abs()))
        .max(lambda.norm())
        .max(u.iter().fold(0.0f64, |a, &v| a.max(v.abs())));
    if residual > tol * scale {
        return Err(QualClassError::NotNullVector {
            residual,
            tol: tol * scale,
        });
    }

    let p: Vec<f64> = z.iter().map(|c| c.re).collect();
    let q: Vec<f64> = z.iter().map(|c| c.im).collect();
    let alpha = 1.0
        + (0..n)
            .filter(|&i| q[i] != 0.0)
            .map(|i| (p[i] / q[i]).abs())
            .fold(0.0f64, f64::max);
    let xv = DVector::from_fn(n, |i, _| p[i] + alpha * q[i]);

    let xt_x = xm.tr_mul(&xv); // column j holds (x^T X)_j
    let mut entries = xm.clone();
    for i in 0..n {
        if xv[i] != 0.0 {
            entries[(i, i)] -= xt_x[i] / xv[i];
        }
    }
    let xhat = PatternMatrix::new(x.graph().clone(), entries)
        .expect("diagonal shift preserves the pattern");
    Ok((xv, xhat))
}

/// Given a real left-null pair `z^T X = 0` on a symmetric-arc graph, builds a
/// symmetric matrix in `Q_s(G)` with the same left-null vector.
///
/// The entries indexed by the support of `z` come from a fixed symmetric base
/// matrix with its diagonal solved so those columns cancel; the mixed block
/// copies `X` and is mirrored, so the columns outside the support inherit
/// `z^T X = 0`.
pub fn symmetric_rich_witness(
    z: &[f64],
    x: &PatternMatrix,
    tol: f64,
) -> Result<PatternMatrix, QualClassError> {
    let g = x.graph();
    let n = g.n();
    assert_eq!(z.len(), n, "null vector length mismatch");
    if !g.has_symmetric_arcs() {
        return Err(QualClassError::AsymmetricArcs);
    }

    let xm = x.entries();
    let mut residual = 0.0f64;
    for col in 0..n {
        let mut acc = 0.0;
        for row in 0..n {
            acc += z[row] * xm[(row, col)];
        }
        residual = residual.max(acc.abs());
    }
    let scale = xm
        .iter()
        .fold(1.0f64, |a, &v| a.max(v.abs()))
        .max(z.iter().fold(0.0f64, |a, &v| a.max(v.abs())));
    if residual > tol * scale {
        return Err(QualClassError::NotLeftNull {
            residual,
            tol: tol * scale,
        });
    }

    let support: Vec<usize> = (1..=n).filter(|&v| z[v - 1] != 0.0).collect();
    let in_support = |v: usize| z[v - 1] != 0.0;

    // Fixed symmetric base: 1 on every required-nonzero position, 0 diagonal.
    let base = |row: usize, col: usize| -> f64 {
        if required_nonzero(g, row, col) {
            1.0
        } else {
            0.0
        }
    };

    let mut entries = DMatrix::zeros(n, n);
    for row in 1..=n {
        for col in 1..=n {
            if row == col {
                continue;
            }
            entries[(row - 1, col - 1)] = match (in_support(row), in_support(col)) {
                (true, false) => xm[(row - 1, col - 1)],
                (false, true) => xm[(col - 1, row - 1)],
                _ => base(row, col),
            };
        }
    }
    for &j in &support {
        let mut sum = 0.0;
        for &i in &support {
            sum += z[i - 1] * entries[(i - 1, j - 1)];
        }
        entries[(j - 1, j - 1)] = -sum / z[j - 1];
    }
    PatternMatrix::new(g.clone(), entries)
}

/// A proof that the same-sign subclass cannot reproduce a left-null pattern
/// achievable in the full class: `z^T X = 0` exactly, yet `(z^T X')_k` is
/// nonzero for every `X'` in `Q_ss(G)`.
#[derive(Clone, Debug)]
pub struct QssWitness {
    /// A vertex with at least two out-neighbors.
    pub vertex: usize,
    /// All ones except a zero at `vertex`.
    pub null_vector: Vec<i64>,
    /// An integer matrix in `Q(G)` annihilated by `null_vector`.
    pub matrix: PatternMatrix,
}

/// Builds the same-sign insufficiency witness, or `None` when every vertex
/// has at most one out-neighbor (the pathological case where the subclass is
/// rich after all).
///
/// Column `k` of any conforming matrix has at least two off-diagonal
/// nonzeros, at rows other than `k`; with all of them forced to one sign and
/// the diagonal excluded by `z_k = 0`, the sum `(z^T X')_k` cannot vanish.
/// In the full class those entries are balanced to cancel exactly.
pub fn qss_insufficiency_witness(g: &Digraph) -> Result<Option<QssWitness>, QualClassError> {
    if !g.has_symmetric_arcs() {
        return Err(QualClassError::AsymmetricArcs);
    }
    let n = g.n();
    let Some(k) = (1..=n).find(|&v| g.out_degree(v) >= 2) else {
        return Ok(None);
    };

    let mut ent = vec![vec![0i64; n + 1]; n + 1];
    for col in g.vertices() {
        if col == k {
            // Balance the >= 2 free nonzeros; row k is excluded by z_k = 0
            // and cannot appear here anyway (no self-loops).
            let rows: Vec<usize> = (1..=n).filter(|&r| required_nonzero(g, r, col)).collect();
            let m = rows.len();
            debug_assert!(m >= 2);
            for &r in &rows[..m - 1] {
                ent[r][col] = 1;
            }
            ent[rows[m - 1]][col] = -((m - 1) as i64);
        } else {
            let mut sum = 0i64;
            for row in g.vertices() {
                if required_nonzero(g, row, col) {
                    ent[row][col] = 1;
                    if row != k {
                        sum += 1;
                    }
                }
            }
            ent[col][col] = -sum;
        }
    }
    let entries = DMatrix::from_fn(n, n, |r, c| ent[r + 1][c + 1] as f64);
    let matrix = PatternMatrix::new(g.clone(), entries)
        .expect("witness construction conforms by construction");
    let null_vector: Vec<i64> = (1..=n).map(|v| i64::from(v != k)).collect();

    debug_assert!({
        let im = as_integer_matrix(matrix.entries()).unwrap();
        left_multiply(&null_vector, &im).iter().all(|&v| v == 0)
    });
    Ok(Some(QssWitness {
        vertex: k,
        null_vector,
        matrix,
    }))
}

/// JSON encoding of a square matrix: `{"n": n, "rows": [[...], ...]}`.
pub fn matrix_to_json(m: &DMatrix<f64>) -> serde_json::Value {
    assert_eq!(m.nrows(), m.ncols(), "matrix JSON encodes square matrices");
    let rows: Vec<serde_json::Value> = (0..m.nrows())
        .map(|r| {
            serde_json::Value::Array(
                (0..m.ncols())
                    .map(|c| serde_json::json!(m[(r, c)]))
                    .collect(),
            )
        })
        .collect();
    serde_json::json!({ "n": m.nrows(), "rows": rows })
}

/// Errors raised while decoding the matrix JSON format.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixJsonError {
    Json(String),
    MissingField(&'static str),
    BadShape(String),
}

impl fmt::Display for MatrixJsonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixJsonError::Json(msg) => write!(f, "invalid JSON: {msg}"),
            MatrixJsonError::MissingField(name) => write!(f, "missing field '{name}'"),
            MatrixJsonError::BadShape(msg) => write!(f, "bad matrix shape: {msg}"),
        }
    }
}

impl Error for MatrixJsonError {}

/// Decodes the matrix JSON format produced by [`matrix_to_json`].
pub fn matrix_from_json(text: &str) -> Result<DMatrix<f64>, MatrixJsonError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| MatrixJsonError::Json(e.to_string()))?;
    let n = value
        .get("n")
        .and_then(|v| v.as_u64())
        .ok_or(MatrixJsonError::MissingField("n"))? as usize;
    if n == 0 {
        return Err(MatrixJsonError::BadShape("n must be positive".into()));
    }
    let rows = value
        .get("rows")
        .and_then(|v| v.as_array())
        .ok_or(MatrixJsonError::MissingField("rows"))?;
    if rows.len() != n {
        return Err(MatrixJsonError::BadShape(format!(
            "expected {n} rows, got {}",
            rows.len()
        )));
    }
    let mut m = DMatrix::zeros(n, n);
    for (r, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| MatrixJsonError::BadShape(format!("row {} is not an array", r + 1)))?;
        if row.len() != n {
            return Err(MatrixJsonError::BadShape(format!(
                "row {} has {} entries, expected {n}",
                r + 1,
                row.len()
            )));
        }
        for (c, v) in row.iter().enumerate() {
            m[(r, c)] = v.as_f64().ok_or_else(|| {
                MatrixJsonError::BadShape(format!("entry ({}, {}) is not a number", r + 1, c + 1))
            })?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{integer_rank, IntMatrix};
    use crate::graph::{example_graph_6v, UndirectedGraph};
    use crate::zero_forcing::is_zfs;

    fn theta(h: &UndirectedGraph) -> Digraph {
        h.lift()
    }

    #[test]
    fn pattern_orientation_follows_arcs() {
        // Arc (1, 2) forces X[2][1] nonzero and X[1][2] zero.
        let g = Digraph::new(2, &[(1, 2)]).unwrap();
        let x = sample_matrix(&g, SubclassSpec::Full, 3).unwrap();
        assert_ne!(x.entries()[(1, 0)], 0.0);
        assert_eq!(x.entries()[(0, 1)], 0.0);
    }

    #[test]
    fn sampling_conforms_and_is_deterministic() {
        // 10,000 draws across graphs and subclasses, zero conformance misses.
        let graphs = [
            example_graph_6v(),
            theta(&UndirectedGraph::cycle(5).unwrap()),
            theta(&UndirectedGraph::complete(4).unwrap()),
            Digraph::random(7, 0.4, 99).unwrap(),
        ];
        let mut draws = 0u32;
        for seed in 0..2_500u64 {
            for (gi, g) in graphs.iter().enumerate() {
                let specs: &[SubclassSpec] = if g.has_symmetric_arcs() {
                    &[
                        SubclassSpec::Full,
                        SubclassSpec::Symmetric,
                        SubclassSpec::SymmetricSameSign(Sign::Positive),
                    ]
                } else {
                    &[SubclassSpec::Full]
                };
                let spec = specs[seed as usize % specs.len()];
                let x = sample_matrix(g, spec, seed).unwrap();
                assert!(
                    conforms(g, x.entries(), spec).unwrap(),
                    "graph {gi}, seed {seed}"
                );
                draws += 1;
            }
        }
        assert_eq!(draws, 10_000);

        let a = sample_matrix(&graphs[0], SubclassSpec::Full, 42).unwrap();
        let b = sample_matrix(&graphs[0], SubclassSpec::Full, 42).unwrap();
        assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn symmetric_sampling() {
        let g = theta(&UndirectedGraph::path(3).unwrap());
        let x = sample_matrix(&g, SubclassSpec::Symmetric, 5).unwrap();
        assert!(conforms(&g, x.entries(), SubclassSpec::Symmetric).unwrap());
        assert_eq!(x.entries()[(0, 1)], x.entries()[(1, 0)]);

        let ss = sample_matrix(&g, SubclassSpec::SymmetricSameSign(Sign::Negative), 5).unwrap();
        assert!(conforms(
            &g,
            ss.entries(),
            SubclassSpec::SymmetricSameSign(Sign::Negative)
        )
        .unwrap());

        let asym = example_graph_6v();
        assert_eq!(
            sample_matrix(&asym, SubclassSpec::Symmetric, 1).unwrap_err(),
            QualClassError::AsymmetricArcs
        );
    }

    #[test]
    fn laplacian_and_adjacency_conform() {
        let c5 = UndirectedGraph::cycle(5).unwrap();
        let g = theta(&c5);
        let neg_l = -c5.laplacian();
        assert!(conforms(&g, &neg_l, SubclassSpec::Full).unwrap());
        assert!(conforms(&g, &neg_l, SubclassSpec::Symmetric).unwrap());

        let p3 = UndirectedGraph::path(3).unwrap();
        let adj = DMatrix::from_fn(3, 3, |r, c| {
            if r != c && p3.adjacent(r + 1, c + 1) {
                1.0
            } else {
                0.0
            }
        });
        assert!(conforms(
            &theta(&p3),
            &adj,
            SubclassSpec::SymmetricSameSign(Sign::Positive)
        )
        .unwrap());
    }

    #[test]
    fn conforms_rejects_missing_nonzero() {
        let g = Digraph::new(2, &[(1, 2)]).unwrap();
        let x = DMatrix::zeros(2, 2);
        assert!(!conforms(&g, &x, SubclassSpec::Full).unwrap());
        let bad = DMatrix::from_row_slice(1, 1, &[1.0]);
        assert!(conforms(&g, &bad, SubclassSpec::Full).is_err());
    }

    #[test]
    fn witness_on_example_graph() {
        let g = example_graph_6v();
        let w = uncontrollable_witness(&g, &VertexSet::singleton(1)).unwrap();
        assert_eq!(w.null_vector, vec![0, 0, 0, 0, 1, 1]);
        let e = w.matrix.entries();
        // Whites {5, 6}: no arcs from the derived set reach them, and the only
        // white-white arc (5, 6) makes X[6][5] = 1, balanced by X[5][5] = -1.
        assert_eq!(e[(5, 4)], 1.0);
        assert_eq!(e[(4, 4)], -1.0);
        assert_eq!(e[(5, 5)], 0.0);
        // Exact left-multiply oracle.
        let im = as_integer_matrix(e).unwrap();
        assert!(left_multiply(&w.null_vector, &im).iter().all(|&v| v == 0));
    }

    #[test]
    fn witness_absent_iff_zfs_small_graphs() {
        for seed in 0..15 {
            let n = 3 + (seed as usize % 3);
            let g = Digraph::random(n, 0.35, 500 + seed).unwrap();
            for mask in 0u64..(1u64 << n) {
                let vl = VertexSet::from_bits(mask);
                let w = uncontrollable_witness(&g, &vl);
                assert_eq!(w.is_none(), is_zfs(&g, vl), "seed {seed} mask {mask}");
                if let Some(w) = w {
                    let im = as_integer_matrix(w.matrix.entries()).unwrap();
                    assert!(left_multiply(&w.null_vector, &im).iter().all(|&v| v == 0));
                    assert!(w.null_vector.iter().any(|&v| v != 0));
                    // Rank deficiency of [X U] under exact arithmetic.
                    let n_ = g.n();
                    let mut u_cols = Vec::new();
                    for v in vl.iter() {
                        let mut col = vec![0i128; n_];
                        col[v - 1] = 1;
                        u_cols.push(col);
                    }
                    let mut data = Vec::new();
                    for r in 0..n_ {
                        for c in 0..n_ {
                            data.push(im.at(r, c));
                        }
                        for col in &u_cols {
                            data.push(col[r]);
                        }
                    }
                    let aug = IntMatrix::new(n_, n_ + u_cols.len(), data);
                    assert!(integer_rank(&aug) < n_, "seed {seed} mask {mask}");
                }
            }
        }
    }

    #[test]
    fn witness_single_white_vertex() {
        let g = Digraph::new(1, &[]).unwrap();
        let w = uncontrollable_witness(&g, &VertexSet::EMPTY).unwrap();
        assert_eq!(w.null_vector, vec![1]);
        assert_eq!(w.matrix.entries()[(0, 0)], 0.0);
    }

    #[test]
    fn realify_real_and_imaginary_inputs() {
        // z real: x equals z and the zero pattern is untouched.
        let g = theta(&UndirectedGraph::path(3).unwrap());
        let w = uncontrollable_witness(&g, &VertexSet::EMPTY).unwrap();
        let z: Vec<Complex<f64>> = w
            .null_vector
            .iter()
            .map(|&v| Complex::new(v as f64, 0.0))
            .collect();
        let u = DMatrix::zeros(3, 0);
        let (xv, xhat) = realify_pbh_null(
            &z,
            Complex::new(0.0, 0.0),
            &w.matrix,
            &u,
            crate::DEFAULT_RESIDUAL_TOL,
        )
        .unwrap();
        for i in 0..3 {
            assert_eq!(xv[i] == 0.0, z[i] == Complex::new(0.0, 0.0));
        }
        let resid = xhat.entries().tr_mul(&xv);
        assert!(resid.iter().all(|&v| v.abs() < 1e-12));

        // Purely imaginary z keeps the same zero pattern.
        let zi: Vec<Complex<f64>> = w
            .null_vector
            .iter()
            .map(|&v| Complex::new(0.0, v as f64))
            .collect();
        let (xvi, _) = realify_pbh_null(
            &zi,
            Complex::new(0.0, 0.0),
            &w.matrix,
            &u,
            crate::DEFAULT_RESIDUAL_TOL,
        )
        .unwrap();
        for i in 0..3 {
            assert_eq!(xvi[i] == 0.0, zi[i].im == 0.0);
        }
    }

    /// Numeric oracle: smallest-singular-value left-null vector of a complex
    /// matrix.
    fn numeric_left_null(m: &DMatrix<Complex<f64>>) -> Vec<Complex<f64>> {
        let svd = m.clone().svd(true, false);
        let u = svd.u.as_ref().unwrap();
        let k = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        u.column(k).iter().copied().collect()
    }

    #[test]
    fn realify_numeric_eigenpairs() {
        for seed in 0..10u64 {
            let g = Digraph::random(4, 0.5, 900 + seed).unwrap();
            let x = sample_matrix(&g, SubclassSpec::Full, seed).unwrap();
            let eigs = x.entries().clone().complex_eigenvalues();
            let lambda = eigs[0];
            let pencil = DMatrix::from_fn(4, 4, |r, c| {
                let mut v = Complex::new(x.entries()[(r, c)], 0.0);
                if r == c {
                    v -= lambda;
                }
                v
            });
            let z = numeric_left_null(&pencil);
            let u = DMatrix::zeros(4, 0);
            let (xv, xhat) =
                realify_pbh_null(&z, lambda, &x, &u, crate::DEFAULT_RESIDUAL_TOL).unwrap();
            let resid = xhat.entries().tr_mul(&xv);
            let worst = resid.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            assert!(worst < 1e-9, "seed {seed}: residual {worst}");
            assert!(conforms(&g, xhat.entries(), SubclassSpec::Full).unwrap());
        }
    }

    #[test]
    fn realify_rejects_non_null_vector() {
        let g = theta(&UndirectedGraph::path(3).unwrap());
        let x = sample_matrix(&g, SubclassSpec::Full, 1).unwrap();
        let z = vec![Complex::new(1.0, 0.0); 3];
        let u = DMatrix::zeros(3, 0);
        let err = realify_pbh_null(&z, Complex::new(0.5, 0.0), &x, &u, 1e-9).unwrap_err();
        assert!(matches!(err, QualClassError::NotNullVector { .. }));
    }

    #[test]
    fn qss_witness_on_path() {
        let g = theta(&UndirectedGraph::path(3).unwrap());
        let w = qss_insufficiency_witness(&g).unwrap().unwrap();
        assert_eq!(w.vertex, 2);
        assert_eq!(w.null_vector, vec![1, 0, 1]);
        let e = w.matrix.entries();
        assert_eq!(e[(0, 1)], 1.0);
        assert_eq!(e[(2, 1)], -1.0);
        for i in 0..3 {
            assert_eq!(e[(i, i)], 0.0);
        }
        // Same-sign samples never cancel at the pivot column.
        for (i, spec) in [
            SubclassSpec::SymmetricSameSign(Sign::Positive),
            SubclassSpec::SymmetricSameSign(Sign::Negative),
        ]
        .iter()
        .enumerate()
        {
            for seed in 0..250u64 {
                let xp = sample_matrix(&g, *spec, 1000 * (i as u64 + 1) + seed).unwrap();
                let mut acc = 0.0;
                for row in 0..3 {
                    acc += w.null_vector[row] as f64 * xp.entries()[(row, w.vertex - 1)];
                }
                assert!(acc.abs() > 0.0, "seed {seed}");
            }
        }
    }

    #[test]
    fn qss_witness_none_for_degree_one() {
        let g = theta(&UndirectedGraph::path(2).unwrap());
        assert!(qss_insufficiency_witness(&g).unwrap().is_none());
    }

    #[test]
    fn rich_witness_from_qss_pair() {
        let g = theta(&UndirectedGraph::path(3).unwrap());
        let w = qss_insufficiency_witness(&g).unwrap().unwrap();
        let z: Vec<f64> = w.null_vector.iter().map(|&v| v as f64).collect();
        let xp = symmetric_rich_witness(&z, &w.matrix, 1e-12).unwrap();
        assert!(conforms(&g, xp.entries(), SubclassSpec::Symmetric).unwrap());
        // Exact cancellation, checkable in integer arithmetic.
        let im = as_integer_matrix(xp.entries()).unwrap();
        assert!(left_multiply(&w.null_vector, &im).iter().all(|&v| v == 0));
        // Bitwise symmetry.
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(xp.entries()[(r, c)], xp.entries()[(c, r)]);
            }
        }
    }

    #[test]
    fn rich_witness_fully_nonzero_vector() {
        // The empty leader set leaves everything white, so the witness null
        // vector is all ones; the reconstruction then only solves for the
        // diagonal of the base matrix.
        let g = theta(&UndirectedGraph::cycle(4).unwrap());
        let w = uncontrollable_witness(&g, &VertexSet::EMPTY).unwrap();
        assert!(w.null_vector.iter().all(|&v| v == 1));
        let z: Vec<f64> = w.null_vector.iter().map(|&v| v as f64).collect();
        let xp = symmetric_rich_witness(&z, &w.matrix, 1e-12).unwrap();
        assert!(conforms(&g, xp.entries(), SubclassSpec::Symmetric).unwrap());
        let im = as_integer_matrix(xp.entries()).unwrap();
        assert!(left_multiply(&w.null_vector, &im).iter().all(|&v| v == 0));
    }

    #[test]
    fn rich_witness_zero_vector_returns_base_sample() {
        let g = theta(&UndirectedGraph::cycle(4).unwrap());
        let x = sample_matrix(&g, SubclassSpec::Full, 9).unwrap();
        let xp = symmetric_rich_witness(&[0.0; 4], &x, 1e-12).unwrap();
        assert!(conforms(&g, xp.entries(), SubclassSpec::Symmetric).unwrap());
    }

    #[test]
    fn rich_witness_rejects_bad_input() {
        let g = theta(&UndirectedGraph::path(3).unwrap());
        let x = sample_matrix(&g, SubclassSpec::Full, 2).unwrap();
        let err = symmetric_rich_witness(&[1.0, 1.0, 1.0], &x, 1e-12).unwrap_err();
        assert!(matches!(err, QualClassError::NotLeftNull { .. }));
        let asym = example_graph_6v();
        let xa = sample_matrix(&asym, SubclassSpec::Full, 2).unwrap();
        assert_eq!(
            symmetric_rich_witness(&[0.0; 6], &xa, 1e-12).unwrap_err(),
            QualClassError::AsymmetricArcs
        );
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, -2.5, 4.0]);
        let text = serde_json::to_string(&matrix_to_json(&m)).unwrap();
        assert_eq!(text, r#"{"n":2,"rows":[[1.0,0.0],[-2.5,4.0]]}"#);
        let back = matrix_from_json(&text).unwrap();
        assert_eq!(m, back);
        assert!(matrix_from_json("{\"n\":2}").is_err());
        assert!(matrix_from_json("{\"n\":2,\"rows\":[[1,2],[3]]}").is_err());
    }
}
