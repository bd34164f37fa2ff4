//! Simple undirected graphs on at most 64 vertices, stored as adjacency bitrows.
//!
//! Besides the usual accessors this module carries the degree statistics the
//! rest of the crate is phrased in (`n_i` and `m_{i,j}`) and the guarded
//! two-edge swap `G - {ux, vy} + {uy, vx}` used by the descent search.

pub mod edge_list;
pub mod graph6;

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use edge_list::{parse_edge_list, write_edge_list, EdgeListError};
pub use graph6::{decode_graph6, encode_graph6, Graph6Error};

/// Largest vertex count a [`Graph`] can hold (one `u64` bitrow per vertex).
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("{0} vertices exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("vertex index {index} out of range for a graph on {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph is not connected")]
    NotConnected,
    #[error("invalid swap: {0}")]
    InvalidMove(SwapRejection),
}

/// Simple undirected graph with dense vertex indices `0..n`.
///
/// Row `v` holds the neighbourhood of `v` as a bitset; rows are kept
/// symmetric with an empty diagonal, and the edge count is cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    rows: Vec<u64>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

#[inline]
const fn bit(v: usize) -> u64 {
    1u64 << v
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph {
            rows: vec![0; n],
            m: 0,
        })
    }

    /// Builds a graph from explicit edges, rejecting loops and repeated pairs.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(a, b) in edges {
            for index in [a, b] {
                if index >= n {
                    return Err(GraphError::IndexOutOfRange { index, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if g.has_edge(a, b) {
                return Err(GraphError::DuplicateEdge(a.min(b), a.max(b)));
            }
            g.insert_edge(a, b);
        }
        Ok(g)
    }

    /// Builds a graph from raw bitrows. The caller guarantees symmetry, an
    /// empty diagonal and no bits at or above `rows.len()`.
    pub(crate) fn from_rows_unchecked(rows: Vec<u64>) -> Self {
        debug_assert!(!rows.is_empty() && rows.len() <= MAX_VERTICES);
        debug_assert!(rows.iter().enumerate().all(|(v, r)| r & bit(v) == 0));
        debug_assert!((0..rows.len())
            .all(|a| (0..rows.len()).all(|b| (rows[a] >> b & 1) == (rows[b] >> a & 1))));
        let m = rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2;
        Graph { rows, m }
    }

    fn insert_edge(&mut self, a: usize, b: usize) {
        self.rows[a] |= bit(b);
        self.rows[b] |= bit(a);
        self.m += 1;
    }

    fn remove_edge(&mut self, a: usize, b: usize) {
        self.rows[a] &= !bit(b);
        self.rows[b] &= !bit(a);
        self.m -= 1;
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn row(&self, v: usize) -> u64 {
        self.rows[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a] & bit(b) != 0
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> {
        BitIter(self.rows[v])
    }

    /// Edges as `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |a| {
            let upper = self.rows[a] & (u64::MAX << a << 1);
            BitIter(upper).map(move |b| (a, b))
        })
    }

    /// True iff every vertex is reachable from vertex 0.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let all = if n == 64 { u64::MAX } else { bit(n) - 1 };
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            for v in BitIter(frontier) {
                next |= self.rows[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == all
    }

    /// `k = m - n + 1`, the number of independent cycles of a connected graph.
    pub fn cyclomatic_number(&self) -> Result<usize, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::NotConnected);
        }
        Ok(self.m + 1 - self.n())
    }

    /// A graph is chemical when no vertex has degree above 4.
    pub fn is_chemical(&self) -> bool {
        self.max_degree() <= 4
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let mut counts = BTreeMap::new();
        for v in 0..self.n() {
            *counts.entry(self.degree(v)).or_insert(0) += 1;
        }
        DegreeProfile::from_counts(counts)
    }

    pub fn edge_class_counts(&self) -> EdgeClassCounts {
        let mut counts = EdgeClassCounts::default();
        for (a, b) in self.edges() {
            counts.add(self.degree(a), self.degree(b), 1);
        }
        counts
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n(), "permutation length mismatch");
        let mut rows = vec![0u64; self.n()];
        for (a, b) in self.edges() {
            rows[perm[a]] |= bit(perm[b]);
            rows[perm[b]] |= bit(perm[a]);
        }
        Graph { rows, m: self.m }
    }

    /// Checks every hypothesis of the degree-ordered two-edge swap and that
    /// the rewired graph stays connected.
    pub fn validate_swap(&self, mv: &SwapMove) -> Result<(), SwapRejection> {
        let SwapMove { u, x, v, y } = *mv;
        let n = self.n();
        if let Some(&index) = [u, x, v, y].iter().find(|&&i| i >= n) {
            return Err(SwapRejection::IndexOutOfRange(index));
        }
        if (bit(u) | bit(x) | bit(v) | bit(y)).count_ones() != 4 {
            return Err(SwapRejection::VerticesNotDistinct);
        }
        for (a, b) in [(u, x), (v, y)] {
            if !self.has_edge(a, b) {
                return Err(SwapRejection::NotEdge(a, b));
            }
        }
        for (a, b) in [(u, y), (v, x)] {
            if self.has_edge(a, b) {
                return Err(SwapRejection::AlreadyEdge(a, b));
            }
        }
        if self.degree(u) < self.degree(v) || self.degree(y) < self.degree(x) {
            return Err(SwapRejection::DegreeOrderViolated);
        }
        if !self.rewire_unchecked(mv).is_connected() {
            return Err(SwapRejection::Disconnects);
        }
        Ok(())
    }

    /// Returns `G - {ux, vy} + {uy, vx}` after [`Graph::validate_swap`] accepts the move.
    pub fn apply_swap(&self, mv: &SwapMove) -> Result<Graph, GraphError> {
        self.validate_swap(mv).map_err(GraphError::InvalidMove)?;
        Ok(self.rewire_unchecked(mv))
    }

    /// Rewires without the degree-order and connectivity guards; only the
    /// edge / non-edge structure is checked so the result stays simple.
    pub fn rewired(&self, mv: &SwapMove) -> Result<Graph, GraphError> {
        let SwapMove { u, x, v, y } = *mv;
        let n = self.n();
        if let Some(&index) = [u, x, v, y].iter().find(|&&i| i >= n) {
            return Err(GraphError::InvalidMove(SwapRejection::IndexOutOfRange(index)));
        }
        if (bit(u) | bit(x) | bit(v) | bit(y)).count_ones() != 4 {
            return Err(GraphError::InvalidMove(SwapRejection::VerticesNotDistinct));
        }
        for (a, b) in [(u, x), (v, y)] {
            if !self.has_edge(a, b) {
                return Err(GraphError::InvalidMove(SwapRejection::NotEdge(a, b)));
            }
        }
        for (a, b) in [(u, y), (v, x)] {
            if self.has_edge(a, b) {
                return Err(GraphError::InvalidMove(SwapRejection::AlreadyEdge(a, b)));
            }
        }
        Ok(self.rewire_unchecked(mv))
    }

    pub(crate) fn rewire_unchecked(&self, mv: &SwapMove) -> Graph {
        let mut g = self.clone();
        g.remove_edge(mv.u, mv.x);
        g.remove_edge(mv.v, mv.y);
        g.insert_edge(mv.u, mv.y);
        g.insert_edge(mv.v, mv.x);
        g
    }
}

/// Iterates the set bits of a word, lowest first.
#[derive(Clone, Copy)]
pub(crate) struct BitIter(pub(crate) u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

/// The rewiring `G - {ux, vy} + {uy, vx}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SwapMove {
    pub u: usize,
    pub x: usize,
    pub v: usize,
    pub y: usize,
}

impl SwapMove {
    pub fn new(u: usize, x: usize, v: usize, y: usize) -> Self {
        SwapMove { u, x, v, y }
    }

    /// The move that undoes this one on the rewired graph.
    pub fn inverse(&self) -> Self {
        SwapMove::new(self.u, self.y, self.v, self.x)
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.u, self.x, self.v, self.y]
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SwapRejection {
    #[error("vertex {0} out of range")]
    IndexOutOfRange(usize),
    #[error("u, x, v, y are not distinct")]
    VerticesNotDistinct,
    #[error("{0}-{1} is not an edge")]
    NotEdge(usize, usize),
    #[error("{0}-{1} is already an edge")]
    AlreadyEdge(usize, usize),
    #[error("requires d_u >= d_v and d_y >= d_x")]
    DegreeOrderViolated,
    #[error("rewired graph is disconnected")]
    Disconnects,
}

/// Vertex counts per degree, `n_i`, with the extreme degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub counts: BTreeMap<usize, usize>,
    pub max_degree: usize,
    pub min_degree: usize,
}

impl DegreeProfile {
    pub fn from_counts(counts: BTreeMap<usize, usize>) -> Self {
        debug_assert!(counts.values().all(|&c| c > 0), "zero count in degree profile");
        let max_degree = counts.keys().next_back().copied().unwrap_or(0);
        let min_degree = counts.keys().next().copied().unwrap_or(0);
        DegreeProfile {
            counts,
            max_degree,
            min_degree,
        }
    }

    pub fn count(&self, degree: usize) -> usize {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    pub fn vertex_count(&self) -> usize {
        self.counts.values().sum()
    }

    /// `sum_i i * n_i`, which is `2m` for any graph.
    pub fn degree_sum(&self) -> usize {
        self.counts.iter().map(|(d, c)| d * c).sum()
    }

    pub fn degree_set(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    pub fn is_almost_regular(&self) -> bool {
        self.max_degree - self.min_degree <= 1
    }
}

/// Edge counts per unordered degree class, `m_{i,j}` with `i <= j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeClassCounts {
    counts: BTreeMap<(usize, usize), usize>,
}

impl EdgeClassCounts {
    pub fn add(&mut self, i: usize, j: usize, count: usize) {
        if count > 0 {
            *self.counts.entry((i.min(j), i.max(j))).or_insert(0) += count;
        }
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.counts.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    pub fn classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// `sum_{j != i} m_{i,j} + 2 m_{i,i}`, the number of edge ends at degree-`i` vertices.
    pub fn incidences_at(&self, i: usize) -> usize {
        self.counts
            .iter()
            .map(|(&(a, b), &c)| match (a == i, b == i) {
                (true, true) => 2 * c,
                (true, false) | (false, true) => c,
                _ => 0,
            })
            .sum()
    }

    /// Recovers `n_i` from the class counts. Isolated vertices leave no trace
    /// in `m_{i,j}`, so this is only the full profile for graphs without them.
    pub fn implied_degree_profile(&self) -> DegreeProfile {
        let mut degrees = std::collections::BTreeSet::new();
        for &(a, b) in self.counts.keys() {
            degrees.insert(a);
            degrees.insert(b);
        }
        let counts = degrees
            .into_iter()
            .filter(|&d| d > 0)
            .map(|d| (d, self.incidences_at(d) / d))
            .filter(|&(_, c)| c > 0)
            .collect();
        DegreeProfile::from_counts(counts)
    }
}

impl FromIterator<((usize, usize), usize)> for EdgeClassCounts {
    fn from_iter<I: IntoIterator<Item = ((usize, usize), usize)>>(iter: I) -> Self {
        let mut counts = EdgeClassCounts::default();
        for ((i, j), c) in iter {
            counts.add(i, j, c);
        }
        counts
    }
}

// Serialized as {"2,3": 2, ...} so reports stay readable JSON objects.
impl Serialize for EdgeClassCounts {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.counts.len()))?;
        for (&(i, j), c) in &self.counts {
            map.serialize_entry(&format!("{i},{j}"), c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for EdgeClassCounts {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ClassVisitor;

        impl<'de> Visitor<'de> for ClassVisitor {
            type Value = EdgeClassCounts;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from \"i,j\" to edge counts")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut counts = EdgeClassCounts::default();
                while let Some((key, count)) = access.next_entry::<String, usize>()? {
                    let (i, j) = key
                        .split_once(',')
                        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                        .ok_or_else(|| de::Error::custom(format!("bad degree class key {key:?}")))?;
                    counts.add(i, j, count);
                }
                Ok(counts)
            }
        }

        deserializer.deserialize_map(ClassVisitor)
    }
}
