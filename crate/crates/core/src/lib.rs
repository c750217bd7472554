//! Zero forcing sets and strong structural controllability of leader-follower
//! systems on directed graphs.
//!
//! A graph `G` fixes a *qualitative class* `Q(G)` of real matrices: the
//! off-diagonal entry `X[i][j]` is nonzero exactly when the arc `(j, i)`
//! exists, diagonals are free. A leader set `V_L` renders every system
//! `x' = Xx + Uu` with `X` in `Q(G)` controllable if and only if `V_L` is a
//! zero forcing set of `G`. This crate implements the combinatorial side
//! (color-change rule, derived sets, exact zero-forcing-number search, path
//! covers of ditrees), the matrix side (sampling from `Q(G)` and its
//! symmetric subclasses, constructive uncontrollability witnesses), and the
//! numeric cross-checks (PBH and Kalman rank tests, exact integer rank for
//! witness certificates).
//!
//! Vertices are 1-based throughout the public API. Graphs are capped at 64
//! vertices and the exact searches are meant for desk scale (`n <= ~20`).

pub mod controllability;
pub mod exact;
pub mod graph;
pub mod path_cover;
pub mod qual_class;
pub mod zero_forcing;

mod combinatorics;

pub use controllability::{
    certify_uncontrollable_exact, check_strong_structural, is_controllable_pair, kalman_matrix,
    leader_matrix, lmin_graph, lmin_matrix, ControllabilityError, LeaderSet, Verdict,
    VerdictOutcome,
};
pub use graph::{
    parse_digraph, parse_undirected, Digraph, GraphError, ParseError, UndirectedGraph, VertexSet,
    MAX_VERTICES,
};
pub use path_cover::{
    leaders_from_cover, minimal_path_cover, path_cover_number, PathCover, PathCoverError,
};
pub use qual_class::{
    conforms, matrix_from_json, matrix_to_json, qss_insufficiency_witness, realify_pbh_null,
    sample_matrix, symmetric_rich_witness, uncontrollable_witness, MatrixJsonError, PatternMatrix,
    QssWitness, QualClassError, Sign, SubclassSpec, UncontrollabilityWitness,
};
pub use zero_forcing::{
    applicable_forces, derived_set, enumerate_minimal_zfs, is_zfs, zero_forcing_number,
    zero_forcing_number_budgeted, ForcingChronicle, ZfnOutcome, ZfsSearchResult,
};

/// Default relative threshold for numeric rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Default residual bound accepted by the numeric witness constructions.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;
