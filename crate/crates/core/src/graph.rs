//! Weighted undirected graphs, cut evaluation, and the classical helpers around them:
//! random regular instances, large-degree-first coloring and exhaustive MaxCut.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::scalar::{lit, Real};

/// Largest vertex count accepted by [`brute_force_maxcut`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 26;

const PAIRING_MAX_RESTARTS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge<T> {
    pub u: usize,
    pub v: usize,
    pub weight: T,
}

/// Simple weighted undirected graph stored as an edge list plus adjacency index.
///
/// Edges keep their insertion order (it fixes the Hamiltonian term order) and are normalized so
/// that `u < v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph<T> {
    num_vertices: usize,
    edges: Vec<Edge<T>>,
    adjacency: Vec<Vec<(usize, T)>>,
}

impl<T: Real> Graph<T> {
    pub fn new(
        num_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        let mut adjacency = vec![Vec::new(); num_vertices];
        for (a, b, w) in edges {
            if a >= num_vertices || b >= num_vertices {
                return Err(invalid(format!(
                    "edge ({a}, {b}) out of range for {num_vertices} vertices"
                )));
            }
            if a == b {
                return Err(invalid(format!("self-loop on vertex {a}")));
            }
            if !w.is_finite() {
                return Err(invalid(format!("non-finite weight on edge ({a}, {b})")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(invalid(format!("duplicate edge ({u}, {v})")));
            }
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
            list.push(Edge { u, v, weight: w });
        }
        Ok(Self {
            num_vertices,
            edges: list,
            adjacency,
        })
    }

    /// Unit-weight graph.
    pub fn unweighted(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(num_vertices, edges.iter().map(|&(u, v)| (u, v, T::one())))
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, T)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_weight(&self) -> T {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Edge list sorted by `(u, v)`; two graphs with the same edge set compare equal on this.
    pub fn sorted_edges(&self) -> Vec<(usize, usize, T)> {
        let mut out: Vec<_> = self.edges.iter().map(|e| (e.u, e.v, e.weight)).collect();
        out.sort_by_key(|a| (a.0, a.1));
        out
    }

    /// Parses the edge-list text format: `u v w` per line, optional `# vertices N` header,
    /// blank lines and other `#` comments ignored. A missing weight means 1.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let mut parts = comment.split_whitespace();
                if parts.next() == Some("vertices") {
                    let n = parts
                        .next()
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse {
                            line: line_no,
                            message: "malformed `# vertices N` header".into(),
                        })?;
                    declared = Some(n);
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `u v [w]`, found {} fields", fields.len()),
                });
            }
            let index = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad vertex index `{s}`"),
                })
            };
            let u = index(fields[0])?;
            let v = index(fields[1])?;
            let w = match fields.get(2) {
                Some(s) => s.parse::<T>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad weight `{s}`"),
                })?,
                None => T::one(),
            };
            edges.push((line_no, u, v, w));
        }
        let inferred = edges
            .iter()
            .map(|&(_, u, v, _)| u.max(v) + 1)
            .max()
            .unwrap_or(0);
        let n = declared.unwrap_or(inferred);
        for &(line, u, v, _) in &edges {
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line,
                    message: format!("edge ({u}, {v}) exceeds declared vertex count {n}"),
                });
            }
        }
        // Re-run construction edge by edge so duplicate/self-loop errors carry a line number.
        let mut seen = HashSet::new();
        for &(line, u, v, w) in &edges {
            if u == v {
                return Err(Error::Parse {
                    line,
                    message: format!("self-loop on vertex {u}"),
                });
            }
            if !w.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: "non-finite weight".into(),
                });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate edge ({u}, {v})"),
                });
            }
        }
        Self::new(n, edges.into_iter().map(|(_, u, v, w)| (u, v, w)))
    }

    pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_edge_list(&text)
    }

    /// Writes the edge-list format with a vertex header, edges sorted by `(u, v)`.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# vertices {}\n", self.num_vertices);
        for (u, v, w) in self.sorted_edges() {
            let _ = writeln!(out, "{u} {v} {w}");
        }
        out
    }
}

/// A ±1 spin per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<i8>);

impl Assignment {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|&&x| x != 1 && x != -1) {
            return Err(invalid(format!("assignment entry {bad} is not ±1")));
        }
        Ok(Self(values))
    }

    pub fn all_plus(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Bit `v` of `bits` set means vertex `v` takes −1 (the x = (1 − z)/2 convention).
    pub fn from_bits(bits: u64, n: usize) -> Self {
        Self(
            (0..n)
                .map(|v| if bits >> v & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> i8 {
        self.0[v]
    }

    /// Renders as a bit string, vertex 0 first, `0` for +1.
    pub fn to_bitstring(&self) -> String {
        self.0
            .iter()
            .map(|&x| if x == 1 { '0' } else { '1' })
            .collect()
    }
}

/// Sum over edges of `(w/2)(1 − m_u m_v)`.
pub fn cut_value<T: Real>(g: &Graph<T>, m: &Assignment) -> Result<T> {
    if m.len() != g.num_vertices() {
        return Err(invalid(format!(
            "assignment has {} entries, graph has {} vertices",
            m.len(),
            g.num_vertices()
        )));
    }
    Ok(g.edges()
        .iter()
        .filter(|e| m.get(e.u) != m.get(e.v))
        .map(|e| e.weight)
        .sum())
}

/// MaxCutGain: `cut / W − 1/2`.
pub fn maxcut_gain<T: Real>(g: &Graph<T>, cut: T) -> Result<T> {
    let w = g.total_weight();
    if g.num_edges() == 0 || w <= T::zero() {
        return Err(invalid("MaxCut gain needs positive total edge weight"));
    }
    Ok(cut / w - lit(0.5))
}

/// Exhaustive MaxCut by Gray-code enumeration.
///
/// Vertex 0 is pinned to +1 (cuts are invariant under a global flip). Among optimal
/// assignments the lexicographically smallest bit string (vertex 0 first, `0` ↔ +1) is returned,
/// independent of how the search space is split across threads.
pub fn brute_force_maxcut<T: Real>(g: &Graph<T>) -> Result<(Assignment, T)> {
    let n = g.num_vertices();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::SizeLimit(format!(
            "brute force limited to {BRUTE_FORCE_MAX_VERTICES} vertices, graph has {n}"
        )));
    }
    if n <= 1 {
        return Ok((Assignment::all_plus(n), T::zero()));
    }
    let free = n - 1;
    let prefix_bits = free.min(6);
    let suffix_bits = free - prefix_bits;
    let eps = T::epsilon() * lit::<T>(64.0) * (g.total_weight().abs() + T::one());

    // Bits are indexed by vertex; key puts vertex 0 in the most significant position so that
    // numeric order of keys is lexicographic order of bit strings.
    let key_of = |bits: u64| -> u64 { (0..n).fold(0u64, |k, v| (k << 1) | (bits >> v & 1)) };

    let best = (0..1u64 << prefix_bits)
        .into_par_iter()
        .map(|prefix| {
            // prefix occupies vertices 1..=prefix_bits, suffix vertices prefix_bits+1..n
            let mut bits = prefix << 1;
            let mut cut = cut_of_bits(g, bits);
            let mut best_bits = bits;
            let mut best_cut = cut;
            let mut best_key = key_of(bits);
            for step in 1u64..(1u64 << suffix_bits) {
                let flip = step.trailing_zeros() as usize + prefix_bits + 1;
                let was = bits >> flip & 1;
                let mut delta = T::zero();
                for &(u, w) in g.neighbors(flip) {
                    // after flipping, edge is cut iff bits differ
                    if (bits >> u & 1) == was {
                        delta += w;
                    } else {
                        delta -= w;
                    }
                }
                bits ^= 1 << flip;
                cut += delta;
                if cut > best_cut + eps {
                    best_cut = cut;
                    best_bits = bits;
                    best_key = key_of(bits);
                } else if (cut - best_cut).abs() <= eps {
                    let key = key_of(bits);
                    if key < best_key {
                        best_bits = bits;
                        best_key = key;
                    }
                }
            }
            (best_cut, best_key, best_bits)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(None::<(T, u64, u64)>, |acc, cand| match acc {
            None => Some(cand),
            Some(cur) => {
                if cand.0 > cur.0 + eps || ((cand.0 - cur.0).abs() <= eps && cand.1 < cur.1) {
                    Some(cand)
                } else {
                    Some(cur)
                }
            }
        })
        .expect("at least one chunk");

    let assignment = Assignment::from_bits(best.2, n);
    let value = cut_value(g, &assignment)?;
    Ok((assignment, value))
}

fn cut_of_bits<T: Real>(g: &Graph<T>, bits: u64) -> T {
    g.edges()
        .iter()
        .filter(|e| (bits >> e.u & 1) != (bits >> e.v & 1))
        .map(|e| e.weight)
        .sum()
}

/// Uniform-ish random `degree`-regular simple graph from the pairing (configuration) model,
/// restarting whenever a self-loop or repeated pair appears.
pub fn random_regular<T: Real>(n: usize, degree: usize, seed: u64) -> Result<Graph<T>> {
    if (n * degree) % 2 == 1 {
        return Err(invalid(format!(
            "n·degree must be even (n={n}, degree={degree})"
        )));
    }
    if degree >= n && !(n == 0 && degree == 0) {
        return Err(invalid(format!("degree {degree} must be below n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    'restart: for _ in 0..PAIRING_MAX_RESTARTS {
        points.shuffle(&mut rng);
        let mut seen = HashSet::with_capacity(points.len() / 2);
        let mut edges = Vec::with_capacity(points.len() / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'restart;
            }
            edges.push((u, v));
        }
        edges.sort_unstable();
        return Graph::unweighted(n, &edges);
    }
    Err(Error::Internal(format!(
        "pairing model failed after {PAIRING_MAX_RESTARTS} restarts (n={n}, degree={degree})"
    )))
}

/// Proper vertex coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    color_of: Vec<usize>,
    num_colors: usize,
}

impl Coloring {
    pub fn new(color_of: Vec<usize>) -> Self {
        let num_colors = color_of.iter().map(|&c| c + 1).max().unwrap_or(0);
        Self {
            color_of,
            num_colors,
        }
    }

    pub fn color_of(&self, v: usize) -> usize {
        self.color_of[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.color_of
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    /// Vertices of each color, ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_colors];
        for (v, &c) in self.color_of.iter().enumerate() {
            classes[c].push(v);
        }
        classes
    }

    pub fn is_proper<T: Real>(&self, g: &Graph<T>) -> bool {
        self.color_of.len() == g.num_vertices()
            && g.edges()
                .iter()
                .all(|e| self.color_of[e.u] != self.color_of[e.v])
    }
}

/// Large-degree-first greedy coloring. Ties in degree are broken by lower vertex index.
pub fn ldf_coloring<T: Real>(g: &Graph<T>) -> Coloring {
    let n = g.num_vertices();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    let mut color = vec![usize::MAX; n];
    let mut taken = vec![false; g.max_degree() + 1];
    for v in order {
        for &(u, _) in g.neighbors(v) {
            if color[u] != usize::MAX {
                taken[color[u]] = true;
            }
        }
        let c = taken
            .iter()
            .position(|&t| !t)
            .expect("degree+1 colors suffice");
        color[v] = c;
        for &(u, _) in g.neighbors(v) {
            if color[u] != usize::MAX {
                taken[color[u]] = false;
            }
        }
    }
    Coloring::new(color)
}
