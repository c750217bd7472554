//! The color-change rule, derived-set closure, zero-forcing-set decisions, and
//! the exact zero-forcing-number search.
//!
//! Vertices are black or white. The color-change rule says: a black vertex `u`
//! with exactly one white out-neighbor `v` forces `v` black. The derived set
//! of an initial black set is the unique fixpoint of applying the rule until
//! nothing changes (the rule is confluent, so the application order does not
//! matter). A set whose derived set is the whole vertex set is a zero forcing
//! set (ZFS), and the zero forcing number `Z(G)` is the size of a smallest
//! one. Finding `Z(G)` is NP-hard in general; the search here is an exact
//! cardinality-ascending enumeration meant for desk-scale graphs.

use std::error::Error;
use std::fmt;

use crate::combinatorics::for_each_combination;
use crate::graph::{Digraph, VertexSet};

/// An ordered record of forces `u -> v`, replayable from an initial coloring.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ForcingChronicle {
    forces: Vec<(usize, usize)>,
}

/// Errors raised when a chronicle fails to replay from a given coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChronicleError {
    ForcerNotBlack { step: usize, u: usize },
    TargetNotWhite { step: usize, v: usize },
    NotTheUniqueWhiteNeighbor { step: usize, u: usize, v: usize },
}

impl fmt::Display for ChronicleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChronicleError::ForcerNotBlack { step, u } => {
                write!(f, "step {step}: forcing vertex {u} is not black")
            }
            ChronicleError::TargetNotWhite { step, v } => {
                write!(f, "step {step}: target vertex {v} is not white")
            }
            ChronicleError::NotTheUniqueWhiteNeighbor { step, u, v } => {
                write!(
                    f,
                    "step {step}: {v} is not the unique white out-neighbor of {u}"
                )
            }
        }
    }
}

impl Error for ChronicleError {}

impl ForcingChronicle {
    pub fn new(forces: Vec<(usize, usize)>) -> Self {
        ForcingChronicle { forces }
    }

    pub fn forces(&self) -> &[(usize, usize)] {
        &self.forces
    }

    pub fn len(&self) -> usize {
        self.forces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forces.is_empty()
    }

    /// Replays the chronicle from `initial`, validating that every step is a
    /// legal force at the moment it is applied, and returns the final
    /// coloring.
    pub fn replay(&self, g: &Digraph, initial: VertexSet) -> Result<VertexSet, ChronicleError> {
        let mut black = initial;
        for (step, &(u, v)) in self.forces.iter().enumerate() {
            if !black.contains(u) {
                return Err(ChronicleError::ForcerNotBlack { step, u });
            }
            if black.contains(v) {
                return Err(ChronicleError::TargetNotWhite { step, v });
            }
            let whites = g.out_mask(u) & !black.bits();
            if whites.count_ones() != 1 || whites != VertexSet::singleton(v).bits() {
                return Err(ChronicleError::NotTheUniqueWhiteNeighbor { step, u, v });
            }
            black.insert(v);
        }
        Ok(black)
    }

    /// JSON representation: an array of `[u, v]` pairs.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.forces
                .iter()
                .map(|&(u, v)| serde_json::Value::from(vec![u, v]))
                .collect(),
        )
    }
}

/// All currently applicable forces `(u, v)`, sorted ascending.
///
/// A pair is applicable when `u` is black, `v` is white, and `v` is the only
/// white out-neighbor of `u`.
pub fn applicable_forces(g: &Digraph, black: VertexSet) -> Vec<(usize, usize)> {
    debug_assert!(black.is_subset(&g.vertex_set()));
    let mut out = Vec::new();
    for u in black.iter() {
        let whites = g.out_mask(u) & !black.bits();
        if whites.count_ones() == 1 {
            let v = whites.trailing_zeros() as usize + 1;
            out.push((u, v));
        }
    }
    out
}

/// Closure of `black` under the color-change rule, without a chronicle.
/// Sweeps until stable; confluence makes the result order-independent.
pub(crate) fn derived_mask(out_masks: &[u64], mut black: u64) -> u64 {
    loop {
        let mut changed = false;
        for (u, &mask) in out_masks.iter().enumerate() {
            if black & (1u64 << u) != 0 {
                let whites = mask & !black;
                if whites.count_ones() == 1 {
                    black |= whites;
                    changed = true;
                }
            }
        }
        if !changed {
            return black;
        }
    }
}

/// The derived set of `initial` together with a replayable chronicle.
///
/// Forces are applied one at a time, always the lexicographically smallest
/// applicable `(u, v)`, so the chronicle is deterministic.
pub fn derived_set(g: &Digraph, initial: VertexSet) -> (VertexSet, ForcingChronicle) {
    assert!(initial.is_subset(&g.vertex_set()), "coloring outside graph");
    let mut black = initial;
    let mut forces = Vec::new();
    loop {
        let mut next = None;
        for u in black.iter() {
            let whites = g.out_mask(u) & !black.bits();
            if whites.count_ones() == 1 {
                next = Some((u, whites.trailing_zeros() as usize + 1));
                break;
            }
        }
        match next {
            Some((u, v)) => {
                black.insert(v);
                forces.push((u, v));
            }
            None => break,
        }
    }
    (black, ForcingChronicle::new(forces))
}

/// Whether `z` is a zero forcing set: its derived set is all of `V`.
pub fn is_zfs(g: &Digraph, z: VertexSet) -> bool {
    assert!(z.is_subset(&g.vertex_set()), "coloring outside graph");
    derived_mask(g.out_masks(), z.bits()) == g.vertex_set().bits()
}

/// Result of the exact zero-forcing-number search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZfsSearchResult {
    /// The zero forcing number `Z(G)`.
    pub zfn: usize,
    /// The lexicographically least ZFS of size `zfn`.
    pub witness: VertexSet,
    /// Candidate subsets tested before the witness was found.
    pub subsets_examined: u64,
}

/// Outcome of a budgeted or size-capped search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZfnOutcome {
    /// The exact zero forcing number was determined.
    Exact(ZfsSearchResult),
    /// Every subset of size up to `max_size` was ruled out.
    NoneWithinMaxSize { max_size: usize, subsets_examined: u64 },
    /// The subset budget ran out at cardinality `lower_bound`, so
    /// `Z(G) >= lower_bound` is all that is known.
    BudgetExhausted { lower_bound: usize, subsets_examined: u64 },
}

/// Exact zero forcing number by cardinality-ascending enumeration.
///
/// Every vertex of in-degree 0 belongs to every ZFS (a white vertex with no
/// in-arcs can never be forced), so candidates always include them and the
/// enumeration runs over the remaining vertices only.
pub fn zero_forcing_number(g: &Digraph) -> ZfsSearchResult {
    match zero_forcing_number_budgeted(g, None, None) {
        ZfnOutcome::Exact(res) => res,
        _ => unreachable!("unbudgeted search always completes"),
    }
}

/// As [`zero_forcing_number`], but optionally stopping after `budget` subset
/// tests or after cardinality `max_size`.
pub fn zero_forcing_number_budgeted(
    g: &Digraph,
    budget: Option<u64>,
    max_size: Option<usize>,
) -> ZfnOutcome {
    let n = g.n();
    let full = g.vertex_set().bits();
    let out_masks = g.out_masks();

    let mandatory: VertexSet = (1..=n).filter(|&v| g.in_degree(v) == 0).collect();
    let free: Vec<usize> = (1..=n).filter(|&v| !mandatory.contains(v)).collect();
    let m = mandatory.len();

    let cap = max_size.unwrap_or(n).min(n);
    let mut examined: u64 = 0;
    for k in m..=cap {
        let mut found: Option<VertexSet> = None;
        let mut out_of_budget = false;
        for_each_combination(free.len(), k - m, &mut |combo| {
            if let Some(b) = budget {
                if examined >= b {
                    out_of_budget = true;
                    return false;
                }
            }
            examined += 1;
            let mut cand = mandatory;
            for &ix in combo {
                cand.insert(free[ix]);
            }
            if derived_mask(out_masks, cand.bits()) == full {
                found = Some(cand);
                return false;
            }
            true
        });
        if let Some(witness) = found {
            return ZfnOutcome::Exact(ZfsSearchResult {
                zfn: k,
                witness,
                subsets_examined: examined,
            });
        }
        if out_of_budget {
            return ZfnOutcome::BudgetExhausted {
                lower_bound: k,
                subsets_examined: examined,
            };
        }
    }
    ZfnOutcome::NoneWithinMaxSize {
        max_size: cap,
        subsets_examined: examined,
    }
}

/// Up to `limit` distinct zero forcing sets of minimum size, in lexicographic
/// order.
pub fn enumerate_minimal_zfs(g: &Digraph, limit: usize) -> Vec<VertexSet> {
    assert!(limit >= 1, "limit must be at least 1");
    let zfn = zero_forcing_number(g).zfn;
    let full = g.vertex_set().bits();
    let out_masks = g.out_masks();
    let mandatory: VertexSet = (1..=g.n()).filter(|&v| g.in_degree(v) == 0).collect();
    let free: Vec<usize> = (1..=g.n()).filter(|&v| !mandatory.contains(v)).collect();

    let mut found = Vec::new();
    for_each_combination(free.len(), zfn - mandatory.len(), &mut |combo| {
        let mut cand = mandatory;
        for &ix in combo {
            cand.insert(free[ix]);
        }
        if derived_mask(out_masks, cand.bits()) == full {
            found.push(cand);
        }
        found.len() < limit
    });
    found
}
