//! Controllability of concrete pairs, minimum-leader search, and the
//! strong-structural check that ties the numeric side to zero forcing.
//!
//! A pair `(X, U)` is controllable iff `[X - lambda*I  U]` has full row rank
//! at every eigenvalue `lambda` of `X` (the PBH test). Numeric verdicts run
//! both PBH and the n-step reachability (Kalman) rank test and refuse to
//! guess when the two disagree. Witness certificates bypass floating point
//! entirely: they are integer matrices whose rank deficiency is checked by
//! exact elimination.

use std::error::Error;
use std::fmt;

use nalgebra::{Complex, DMatrix};

use crate::combinatorics::for_each_combination;
use crate::exact::{as_integer_matrix, integer_rank, left_multiply, IntMatrix};
use crate::graph::{Digraph, VertexSet};
use crate::qual_class::{
    sample_matrix, uncontrollable_witness, QualClassError, SubclassSpec, UncontrollabilityWitness,
};
use crate::zero_forcing::{derived_set, zero_forcing_number, ForcingChronicle};

/// An ordered leader set `v_1 < v_2 < ... < v_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeaderSet {
    vertices: Vec<usize>,
}

impl LeaderSet {
    /// Sorts and validates the given vertices against the ambient size `n`.
    pub fn new(mut vertices: Vec<usize>, n: usize) -> Result<Self, ControllabilityError> {
        vertices.sort_unstable();
        for pair in vertices.windows(2) {
            if pair[0] == pair[1] {
                return Err(ControllabilityError::DuplicateLeader { v: pair[0] });
            }
        }
        for &v in &vertices {
            if v == 0 || v > n {
                return Err(ControllabilityError::InvalidLeader { v, n });
            }
        }
        Ok(LeaderSet { vertices })
    }

    pub fn from_set(set: VertexSet) -> Self {
        LeaderSet {
            vertices: set.to_vec(),
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn to_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }
}

/// Errors raised by the controllability routines.
#[derive(Clone, Debug, PartialEq)]
pub enum ControllabilityError {
    NotSquare { rows: usize, cols: usize },
    InputRowMismatch { expected: usize, got: usize },
    InvalidLeader { v: usize, n: usize },
    DuplicateLeader { v: usize },
    /// The PBH and Kalman rank tests disagreed; the instance is too
    /// ill-conditioned to call numerically.
    NumericalAmbiguity { pbh: bool, kalman: bool },
    Subclass(QualClassError),
}

impl fmt::Display for ControllabilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControllabilityError::NotSquare { rows, cols } => {
                write!(f, "state matrix must be square, got {rows}x{cols}")
            }
            ControllabilityError::InputRowMismatch { expected, got } => {
                write!(f, "input matrix must have {expected} rows, got {got}")
            }
            ControllabilityError::InvalidLeader { v, n } => {
                write!(f, "leader {v} outside 1..={n}")
            }
            ControllabilityError::DuplicateLeader { v } => {
                write!(f, "duplicate leader {v}")
            }
            ControllabilityError::NumericalAmbiguity { pbh, kalman } => write!(
                f,
                "numerical ambiguity: PBH says {pbh}, Kalman says {kalman}"
            ),
            ControllabilityError::Subclass(e) => write!(f, "{e}"),
        }
    }
}

impl Error for ControllabilityError {}

impl From<QualClassError> for ControllabilityError {
    fn from(e: QualClassError) -> Self {
        ControllabilityError::Subclass(e)
    }
}

/// The 0/1 input matrix with column `j` equal to the standard basis vector at
/// the j-th leader.
pub fn leader_matrix(n: usize, leaders: &LeaderSet) -> DMatrix<f64> {
    let mut u = DMatrix::zeros(n, leaders.len());
    for (j, &v) in leaders.vertices().iter().enumerate() {
        assert!(v >= 1 && v <= n, "leader {v} outside 1..={n}");
        u[(v - 1, j)] = 1.0;
    }
    u
}

/// Numeric rank: singular values above `tol * sigma_max * max(rows, cols)`.
fn numeric_rank_real(m: &DMatrix<f64>, tol: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let sigma_max = sv.iter().copied().fold(0.0f64, f64::max);
    let threshold = tol * sigma_max * m.nrows().max(m.ncols()) as f64;
    sv.iter().filter(|&&s| s > threshold).count()
}

fn numeric_rank_complex(m: &DMatrix<Complex<f64>>, tol: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let sigma_max = sv.iter().copied().fold(0.0f64, f64::max);
    let threshold = tol * sigma_max * m.nrows().max(m.ncols()) as f64;
    sv.iter().filter(|&&s| s > threshold).count()
}

fn pbh_full_rank(x: &DMatrix<f64>, u: &DMatrix<f64>, tol: f64) -> bool {
    let n = x.nrows();
    let m = u.ncols();
    let eigs = x.complex_eigenvalues();
    for lambda in eigs.iter() {
        let pencil = DMatrix::from_fn(n, n + m, |r, c| {
            if c < n {
                let mut v = Complex::new(x[(r, c)], 0.0);
                if r == c {
                    v -= lambda;
                }
                v
            } else {
                Complex::new(u[(r, c - n)], 0.0)
            }
        });
        if numeric_rank_complex(&pencil, tol) < n {
            return false;
        }
    }
    true
}

/// The n-step reachability matrix `[U XU ... X^(n-1)U]`.
pub fn kalman_matrix(x: &DMatrix<f64>, u: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let m = u.ncols();
    let mut k = DMatrix::zeros(n, n * m);
    let mut block = u.clone();
    for i in 0..n {
        k.columns_mut(i * m, m).copy_from(&block);
        block = x * &block;
    }
    k
}

fn kalman_full_rank(x: &DMatrix<f64>, u: &DMatrix<f64>, tol: f64) -> bool {
    let n = x.nrows();
    let mut k = kalman_matrix(x, u);
    // Powers of X blow up the column norms; rescaling columns to unit norm
    // changes nothing about the rank but keeps the threshold meaningful.
    for mut col in k.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
    numeric_rank_real(&k, tol) == n
}

/// PBH controllability of the pair `(X, U)`, cross-checked against the Kalman
/// rank test. Disagreement between the two is reported as
/// [`ControllabilityError::NumericalAmbiguity`] rather than resolved silently.
pub fn is_controllable_pair(
    x: &DMatrix<f64>,
    u: &DMatrix<f64>,
    tol: f64,
) -> Result<bool, ControllabilityError> {
    let n = x.nrows();
    if x.ncols() != n {
        return Err(ControllabilityError::NotSquare {
            rows: x.nrows(),
            cols: x.ncols(),
        });
    }
    if u.nrows() != n {
        return Err(ControllabilityError::InputRowMismatch {
            expected: n,
            got: u.nrows(),
        });
    }
    assert!(tol > 0.0, "rank tolerance must be positive");
    if n == 0 {
        return Ok(true);
    }
    if u.ncols() == 0 {
        return Ok(false);
    }
    let pbh = pbh_full_rank(x, u, tol);
    let kalman = kalman_full_rank(x, u, tol);
    if pbh != kalman {
        return Err(ControllabilityError::NumericalAmbiguity { pbh, kalman });
    }
    Ok(pbh)
}

/// Exact certificate check for an uncontrollability witness: the integer
/// null vector annihilates `[X U]` and that matrix is rank deficient under
/// exact elimination. No floating point is involved.
pub fn certify_uncontrollable_exact(
    witness: &UncontrollabilityWitness,
    leaders: &LeaderSet,
) -> bool {
    let n = witness.matrix.n();
    let Some(xi) = as_integer_matrix(witness.matrix.entries()) else {
        return false;
    };
    let mut u_data = vec![0i128; n * leaders.len()];
    for (j, &v) in leaders.vertices().iter().enumerate() {
        u_data[(v - 1) * leaders.len() + j] = 1;
    }
    let ui = IntMatrix::new(n, leaders.len(), u_data);
    let aug = xi.hcat(&ui);
    let z = &witness.null_vector;
    z.iter().any(|&v| v != 0)
        && left_multiply(z, &aug).iter().all(|&v| v == 0)
        && integer_rank(&aug) < n
}

/// Smallest leader set making the single pair `(X, U(V; V_L))` controllable,
/// by cardinality-ascending exhaustive search. Meant for small `n`.
pub fn lmin_matrix(
    x: &DMatrix<f64>,
    tol: f64,
) -> Result<(usize, LeaderSet), ControllabilityError> {
    let n = x.nrows();
    if x.ncols() != n {
        return Err(ControllabilityError::NotSquare {
            rows: x.nrows(),
            cols: x.ncols(),
        });
    }
    for k in 1..=n {
        let mut found: Option<LeaderSet> = None;
        let mut failure: Option<ControllabilityError> = None;
        for_each_combination(n, k, &mut |combo| {
            let leaders = LeaderSet {
                vertices: combo.iter().map(|&i| i + 1).collect(),
            };
            let u = leader_matrix(n, &leaders);
            match is_controllable_pair(x, &u, tol) {
                Ok(true) => {
                    found = Some(leaders);
                    false
                }
                Ok(false) => true,
                Err(e) => {
                    failure = Some(e);
                    false
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if let Some(leaders) = found {
            return Ok((k, leaders));
        }
    }
    unreachable!("U = I is always controllable");
}

/// Minimum number of leaders controlling the whole qualitative class of `g`,
/// which equals the zero forcing number; the ZFS witness doubles as the
/// leader set.
pub fn lmin_graph(g: &Digraph) -> (usize, LeaderSet) {
    let res = zero_forcing_number(g);
    (res.zfn, LeaderSet::from_set(res.witness))
}

/// Outcome of a strong-structural-controllability check.
#[derive(Clone, Debug)]
pub enum VerdictOutcome {
    /// The leader set is a ZFS; the chronicle certifies it.
    Controllable { chronicle: ForcingChronicle },
    /// Not a ZFS; the witness is an exact rank-deficient member of the class.
    Uncontrollable { witness: UncontrollabilityWitness },
    /// The subclass is not sufficiently rich to decide the non-ZFS case.
    Unknown { reason: String },
}

/// Structured result of [`check_strong_structural`].
#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: VerdictOutcome,
    /// Matrices sampled for the numeric diagnostic.
    pub samples_checked: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Numeric disagreements, if any. These never override the combinatorial
    /// verdict; they flag implementation or conditioning trouble.
    pub diagnostics: Vec<String>,
}

impl Verdict {
    pub fn is_definite(&self) -> bool {
        !matches!(self.outcome, VerdictOutcome::Unknown { .. })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let (controllable, certificate, witness) = match &self.outcome {
            VerdictOutcome::Controllable { chronicle } => (
                serde_json::Value::Bool(true),
                serde_json::json!({ "chronicle": chronicle.to_json_value() }),
                serde_json::Value::Null,
            ),
            VerdictOutcome::Uncontrollable { witness } => (
                serde_json::Value::Bool(false),
                serde_json::Value::Null,
                witness.to_json_value(),
            ),
            VerdictOutcome::Unknown { reason } => (
                serde_json::Value::String("unknown".into()),
                serde_json::Value::Null,
                serde_json::json!({ "reason": reason }),
            ),
        };
        serde_json::json!({
            "controllable": controllable,
            "certificate": certificate,
            "witness": witness,
            "samples": self.samples_checked,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "diagnostics": self.diagnostics,
        })
    }
}

/// splitmix64 step, used to derive independent per-sample seeds.
fn derive_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Decides whether `leaders` controls the given subclass of `Q(G)`.
///
/// The verdict itself is combinatorial: a ZFS controls every subclass, and a
/// non-ZFS leader set fails the full class and the symmetric subclass (which
/// is sufficiently rich), with an exact witness attached. The same-sign
/// subclass is *not* sufficiently rich, so the non-ZFS case comes back as
/// `Unknown` there. For a ZFS, `num_samples` matrices from the subclass are
/// additionally run through the numeric pair test; failures are recorded as
/// diagnostics, never as a verdict change.
pub fn check_strong_structural(
    g: &Digraph,
    leaders: &LeaderSet,
    num_samples: usize,
    seed: u64,
    spec: SubclassSpec,
    tol: f64,
) -> Result<Verdict, ControllabilityError> {
    assert!(num_samples >= 1, "num_samples must be at least 1");
    if spec.requires_symmetric_arcs() && !g.has_symmetric_arcs() {
        return Err(QualClassError::AsymmetricArcs.into());
    }
    let lset = leaders.to_set();
    let (derived, chronicle) = derived_set(g, lset);

    if derived == g.vertex_set() {
        let u = leader_matrix(g.n(), leaders);
        let mut diagnostics = Vec::new();
        for i in 0..num_samples {
            let sample_seed = derive_seed(seed, i as u64);
            let xm = sample_matrix(g, spec, sample_seed)?;
            match is_controllable_pair(xm.entries(), &u, tol) {
                Ok(true) => {}
                Ok(false) => diagnostics.push(format!(
                    "sample {i} (seed {sample_seed}): numerically uncontrollable at tol {tol:e}"
                )),
                Err(e) => diagnostics.push(format!("sample {i} (seed {sample_seed}): {e}")),
            }
        }
        return Ok(Verdict {
            outcome: VerdictOutcome::Controllable { chronicle },
            samples_checked: num_samples,
            seed,
            tolerance: tol,
            diagnostics,
        });
    }

    let outcome = match spec {
        SubclassSpec::Full | SubclassSpec::Symmetric => {
            let witness = uncontrollable_witness(g, &lset)
                .expect("non-ZFS leader set always yields a witness");
            VerdictOutcome::Uncontrollable { witness }
        }
        SubclassSpec::SymmetricSameSign(_) => VerdictOutcome::Unknown {
            reason: "subclass not sufficiently rich".into(),
        },
    };
    Ok(Verdict {
        outcome,
        samples_checked: 0,
        seed,
        tolerance: tol,
        diagnostics: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{example_graph_6v, UndirectedGraph};
    use crate::DEFAULT_RANK_TOL;

    fn neg_laplacian(h: &UndirectedGraph) -> DMatrix<f64> {
        -h.laplacian()
    }

    #[test]
    fn leader_matrix_columns() {
        let l = LeaderSet::new(vec![2], 3).unwrap();
        let u = leader_matrix(3, &l);
        assert_eq!(u, DMatrix::from_column_slice(3, 1, &[0.0, 1.0, 0.0]));

        let l = LeaderSet::new(vec![3, 1], 3).unwrap();
        let u = leader_matrix(3, &l);
        assert_eq!(u.column(0), DMatrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]).column(0));
        assert_eq!(u.column(1), DMatrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]).column(0));

        let l = LeaderSet::new(vec![1, 5], 6).unwrap();
        let u = leader_matrix(6, &l);
        assert_eq!(u[(0, 0)], 1.0);
        assert_eq!(u[(4, 1)], 1.0);
        assert_eq!(u.sum(), 2.0);
    }

    #[test]
    fn leader_set_validation() {
        assert!(matches!(
            LeaderSet::new(vec![1, 1], 3),
            Err(ControllabilityError::DuplicateLeader { v: 1 })
        ));
        assert!(matches!(
            LeaderSet::new(vec![4], 3),
            Err(ControllabilityError::InvalidLeader { v: 4, n: 3 })
        ));
    }

    #[test]
    fn path_laplacian_single_terminal_leader() {
        let p3 = UndirectedGraph::path(3).unwrap();
        let x = neg_laplacian(&p3);
        let u = leader_matrix(3, &LeaderSet::new(vec![1], 3).unwrap());
        assert!(is_controllable_pair(&x, &u, DEFAULT_RANK_TOL).unwrap());
    }

    #[test]
    fn complete_laplacian_needs_more_than_one() {
        let k3 = UndirectedGraph::complete(3).unwrap();
        let x = neg_laplacian(&k3);
        for v in 1..=3 {
            let u = leader_matrix(3, &LeaderSet::new(vec![v], 3).unwrap());
            assert!(!is_controllable_pair(&x, &u, DEFAULT_RANK_TOL).unwrap());
        }
    }

    #[test]
    fn zero_matrix_with_identity_inputs() {
        let x = DMatrix::zeros(2, 2);
        let u = DMatrix::identity(2, 2);
        assert!(is_controllable_pair(&x, &u, DEFAULT_RANK_TOL).unwrap());
    }

    #[test]
    fn empty_input_matrix_is_uncontrollable() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let u = DMatrix::zeros(2, 0);
        assert!(!is_controllable_pair(&x, &u, DEFAULT_RANK_TOL).unwrap());
    }

    #[test]
    fn lmin_matrix_on_laplacians() {
        let p4 = UndirectedGraph::path(4).unwrap();
        let (k, leaders) = lmin_matrix(&neg_laplacian(&p4), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(k, 1);
        assert_eq!(leaders.vertices(), &[1]);

        let c5 = UndirectedGraph::cycle(5).unwrap();
        let (k, _) = lmin_matrix(&neg_laplacian(&c5), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(k, 2);

        let k4 = UndirectedGraph::complete(4).unwrap();
        let (k, _) = lmin_matrix(&neg_laplacian(&k4), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(k, 3);
    }

    #[test]
    fn lmin_graph_matches_zfn() {
        let g = example_graph_6v();
        let (k, leaders) = lmin_graph(&g);
        assert_eq!(k, 2);
        assert_eq!(leaders.vertices(), &[1, 5]);

        for n in 3..=6 {
            let cn = UndirectedGraph::cycle(n).unwrap().lift();
            assert_eq!(lmin_graph(&cn).0, 2);
            let kn = UndirectedGraph::complete(n).unwrap().lift();
            assert_eq!(lmin_graph(&kn).0, n - 1);
        }
    }

    #[test]
    fn lmin_matrix_never_exceeds_lmin_graph() {
        for seed in 0..8u64 {
            let g = Digraph::random(5, 0.4, 40 + seed).unwrap();
            let class_k = lmin_graph(&g).0;
            let x = sample_matrix(&g, SubclassSpec::Full, seed).unwrap();
            let (k, _) = lmin_matrix(x.entries(), DEFAULT_RANK_TOL).unwrap();
            assert!(k <= class_k, "seed {seed}: {k} > {class_k}");
        }
    }

    #[test]
    fn verdict_controllable_on_example() {
        let g = example_graph_6v();
        let leaders = LeaderSet::new(vec![1, 5], 6).unwrap();
        let v = check_strong_structural(&g, &leaders, 50, 7, SubclassSpec::Full, DEFAULT_RANK_TOL)
            .unwrap();
        match &v.outcome {
            VerdictOutcome::Controllable { chronicle } => {
                assert_eq!(chronicle.forces(), &[(1, 2), (2, 3), (3, 4), (5, 6)]);
            }
            other => panic!("expected controllable, got {other:?}"),
        }
        assert_eq!(v.samples_checked, 50);
        assert!(v.diagnostics.is_empty(), "{:?}", v.diagnostics);
    }

    #[test]
    fn verdict_uncontrollable_on_example() {
        let g = example_graph_6v();
        let leaders = LeaderSet::new(vec![1], 6).unwrap();
        let v = check_strong_structural(&g, &leaders, 10, 7, SubclassSpec::Full, DEFAULT_RANK_TOL)
            .unwrap();
        match &v.outcome {
            VerdictOutcome::Uncontrollable { witness } => {
                assert_eq!(witness.null_vector, vec![0, 0, 0, 0, 1, 1]);
                assert!(certify_uncontrollable_exact(witness, &leaders));
            }
            other => panic!("expected uncontrollable, got {other:?}"),
        }
        assert_eq!(v.samples_checked, 0);
    }

    #[test]
    fn verdict_all_leaders_trivially_controllable() {
        let g = example_graph_6v();
        let leaders = LeaderSet::new((1..=6).collect(), 6).unwrap();
        let v = check_strong_structural(&g, &leaders, 5, 1, SubclassSpec::Full, DEFAULT_RANK_TOL)
            .unwrap();
        match &v.outcome {
            VerdictOutcome::Controllable { chronicle } => assert!(chronicle.is_empty()),
            other => panic!("expected controllable, got {other:?}"),
        }
    }

    #[test]
    fn verdict_unknown_for_same_sign_non_zfs() {
        use crate::qual_class::Sign;
        let g = UndirectedGraph::path(4).unwrap().lift();
        let leaders = LeaderSet::new(vec![2], 4).unwrap();
        let v = check_strong_structural(
            &g,
            &leaders,
            5,
            1,
            SubclassSpec::SymmetricSameSign(Sign::Positive),
            DEFAULT_RANK_TOL,
        )
        .unwrap();
        assert!(!v.is_definite());
        let json = v.to_json_value();
        assert_eq!(json["controllable"], serde_json::json!("unknown"));
    }

    #[test]
    fn verdict_symmetric_subclass_attaches_full_witness() {
        let g = UndirectedGraph::path(4).unwrap().lift();
        let leaders = LeaderSet::new(vec![2], 4).unwrap();
        let v =
            check_strong_structural(&g, &leaders, 5, 1, SubclassSpec::Symmetric, DEFAULT_RANK_TOL)
                .unwrap();
        match &v.outcome {
            VerdictOutcome::Uncontrollable { witness } => {
                assert!(certify_uncontrollable_exact(witness, &leaders));
            }
            other => panic!("expected uncontrollable, got {other:?}"),
        }
    }

    #[test]
    fn verdict_rejects_symmetric_spec_on_asymmetric_graph() {
        let g = example_graph_6v();
        let leaders = LeaderSet::new(vec![1], 6).unwrap();
        let err = check_strong_structural(
            &g,
            &leaders,
            5,
            1,
            SubclassSpec::Symmetric,
            DEFAULT_RANK_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, ControllabilityError::Subclass(_)));
    }

    #[test]
    fn pbh_and_kalman_agree_on_samples() {
        for seed in 0..40u64 {
            let g = Digraph::random(6, 0.35, 700 + seed).unwrap();
            let x = sample_matrix(&g, SubclassSpec::Full, seed).unwrap();
            let leaders = LeaderSet::new(vec![1, 4], 6).unwrap();
            let u = leader_matrix(6, &leaders);
            // Ok(_) means the two tests agreed.
            is_controllable_pair(x.entries(), &u, DEFAULT_RANK_TOL).unwrap();
        }
    }
}
