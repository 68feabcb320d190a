//! Built-in instances: the ply-stacking weighted MaxCut and the reference graphs.
//!
//! Spin convention for ply bits is `x = (1 − z)/2`, so bit `0` is spin `+1`.

use std::collections::HashSet;

use crate::error::{invalid, Error, Result};
use crate::graph::{Assignment, Graph};
use crate::scalar::{lit, Real};

/// Best known cut of `G40W`, used as a reference denominator only.
pub const G40W_REFERENCE_OPTIMUM: f64 = 641.0;
/// Cut of the alternating assignment on `G40W` as published.
pub const G40W_REFERENCE_ALTERNATING: f64 = 503.0;
/// Best known cut of `G40`, used by the extended check only.
pub const G40_REFERENCE_OPTIMUM: f64 = 53.0;
/// Pauli-rounded cut reported for `G40` from the exact relaxed state.
pub const G40_REFERENCE_PAULI_CUT: f64 = 51.0;

pub const FIXTURE_NAMES: [&str; 4] = ["G16", "G40", "G40W", "PETERSEN"];

/// Ply-adjacency constraints: a chain `(i, i+1)` over all plies plus explicit non-local pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct PlySpec<T> {
    pub num_plies: usize,
    /// Weight of `(i, i+1)` at index `i`; length `num_plies − 1`.
    pub local_weights: Vec<T>,
    /// `(i, j, w)` with `j > i + 1`.
    pub non_local: Vec<(usize, usize, T)>,
}

impl<T: Real> PlySpec<T> {
    pub fn num_constraints(&self) -> usize {
        self.local_weights.len() + self.non_local.len()
    }
}

/// One weighted edge per constraint; vertex `i` is ply `i`.
pub fn ply_to_graph<T: Real>(spec: &PlySpec<T>) -> Result<Graph<T>> {
    if spec.num_plies == 0 || spec.local_weights.len() + 1 != spec.num_plies {
        return Err(invalid(format!(
            "{} plies need {} local weights, got {}",
            spec.num_plies,
            spec.num_plies.saturating_sub(1),
            spec.local_weights.len()
        )));
    }
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(spec.num_constraints());
    let local = spec
        .local_weights
        .iter()
        .enumerate()
        .map(|(i, &w)| (i, i + 1, w));
    for (u, v, w) in local.chain(spec.non_local.iter().copied()) {
        if !(w >= T::one()) {
            return Err(invalid(format!("constraint ({u}, {v}) has weight below 1")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(invalid(format!("duplicate constraint ({u}, {v})")));
        }
        edges.push((u, v, w));
    }
    Graph::new(spec.num_plies, edges)
}

const PLY40_LOCAL: [u32; 39] = [
    16, 12, 12, 4, 4, 23, 7, 7, 2, 2, 10, 10, 13, 24, 6, 6, 22, 15, 1, 1, 19, 19, 9, 9, 18, 18, 25,
    5, 5, 17, 17, 21, 21, 11, 11, 3, 3, 8, 8,
];

const PLY40_NON_LOCAL: [(usize, usize, u32); 29] = [
    (0, 3, 14),
    (1, 3, 4),
    (3, 5, 19),
    (3, 6, 6),
    (3, 10, 1),
    (6, 8, 13),
    (6, 10, 9),
    (8, 10, 18),
    (10, 12, 3),
    (10, 13, 15),
    (10, 16, 2),
    (13, 16, 4),
    (14, 16, 18),
    (16, 20, 8),
    (17, 20, 7),
    (18, 20, 14),
    (20, 22, 7),
    (20, 24, 4),
    (22, 24, 17),
    (24, 26, 7),
    (24, 27, 5),
    (27, 29, 25),
    (29, 31, 10),
    (29, 33, 3),
    (31, 33, 6),
    (33, 35, 3),
    (33, 37, 16),
    (35, 37, 11),
    (37, 39, 22),
];

/// The 40-ply laminate instance.
pub fn reference_ply_spec<T: Real>() -> PlySpec<T> {
    PlySpec {
        num_plies: 40,
        local_weights: PLY40_LOCAL.iter().map(|&w| lit(w as f64)).collect(),
        non_local: PLY40_NON_LOCAL
            .iter()
            .map(|&(i, j, w)| (i, j, lit(w as f64)))
            .collect(),
    }
}

/// Edge-list text of a named fixture, byte-for-byte as shipped.
pub fn fixture_text(name: &str) -> Result<&'static str> {
    match name.to_ascii_uppercase().as_str() {
        "G16" => Ok(include_str!("../data/g16.txt")),
        "G40" => Ok(include_str!("../data/g40.txt")),
        "G40W" => Ok(include_str!("../data/g40w.txt")),
        "PETERSEN" => Ok(include_str!("../data/petersen.txt")),
        _ => Err(Error::NotFound(format!(
            "unknown fixture `{name}` (known: {})",
            FIXTURE_NAMES.join(", ")
        ))),
    }
}

/// Loads a named fixture. Names are case-insensitive.
pub fn fixture<T: Real>(name: &str) -> Result<Graph<T>> {
    Graph::parse_edge_list(fixture_text(name)?)
}

/// Reference optimum for fixtures whose optimum is known.
pub fn fixture_reference_optimum(name: &str) -> Option<f64> {
    match name.to_ascii_uppercase().as_str() {
        "G16" => Some(20.0),
        "PETERSEN" => Some(12.0),
        "G40" => Some(G40_REFERENCE_OPTIMUM),
        "G40W" => Some(G40W_REFERENCE_OPTIMUM),
        _ => None,
    }
}

/// `(+1, −1, +1, …)`, i.e. ply bits `0101…`.
pub fn alternating_assignment(n: usize) -> Result<Assignment> {
    if n == 0 {
        return Err(invalid("alternating assignment needs at least one vertex"));
    }
    Assignment::new((0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect())
}
