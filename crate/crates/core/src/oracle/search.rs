//! Row-by-row depth-first enumeration of connected graphs.
//!
//! Row `r` decides every pair `(r, j)` with `j > r` at once, so after row `r`
//! the degree of vertex `r` is final. The search keeps adjacency in `u16`
//! rows (hence the 16-vertex cap) and prunes with degree caps and floors,
//! remaining-capacity counting and a component-count connectivity bound.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{encode_graph6, EdgeClassCounts, Graph};
use crate::tolerance::MINIMUM_SLACK;

use super::{Collect, Symmetry};

pub(crate) const MAX_N: usize = 16;

/// Edge classes as sorted `(i, j, count)` triples with `i <= j`.
pub(crate) type ClassKey = Vec<(u8, u8, u16)>;

pub(crate) fn key_to_classes(key: &ClassKey) -> EdgeClassCounts {
    key.iter()
        .map(|&(i, j, c)| ((i as usize, j as usize), c as usize))
        .collect()
}

pub(crate) fn classes_to_key(classes: &EdgeClassCounts) -> ClassKey {
    classes
        .iter()
        .map(|((i, j), c)| (i as u8, j as u8, c as u16))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub(crate) struct Entry {
    /// Labeled graphs (within the symmetry mode) realizing this class profile.
    pub count: u64,
    /// `TI` evaluated from the class counts in sorted class order.
    pub ti: f64,
    /// First graph met in search order, as graph6.
    pub example: String,
}

/// Result of searching a set of subtrees.
#[derive(Clone, Debug, Default, PartialEq)]
pub(crate) struct Partial {
    pub visited: u64,
    pub entries: BTreeMap<ClassKey, Entry>,
    /// Lowest entry `ti`; `+inf` when nothing was recorded.
    pub best: f64,
}

impl Partial {
    pub fn new() -> Self {
        Partial {
            visited: 0,
            entries: BTreeMap::new(),
            best: f64::INFINITY,
        }
    }

    fn purge(&mut self) {
        let limit = self.best + MINIMUM_SLACK;
        self.entries.retain(|_, e| e.ti <= limit);
    }

    /// Folds `later` in; examples already present win, so merging subtree
    /// results in index order reproduces the sequential search.
    pub fn merge(&mut self, later: Partial, collect: Collect) {
        self.visited += later.visited;
        for (key, entry) in later.entries {
            self.best = self.best.min(entry.ti);
            self.entries
                .entry(key)
                .and_modify(|e| e.count += entry.count)
                .or_insert(entry);
        }
        if collect == Collect::Minimum {
            self.purge();
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Node {
    rows: [u16; MAX_N],
    deg: [u8; MAX_N],
    /// Next row to decide.
    row: u8,
    edges_left: u8,
    /// Degree ceiling for undecided rows.
    cap: u8,
}

pub(crate) struct Search {
    n: usize,
    floor: u8,
    ordered: bool,
    collect: Collect,
    stride: usize,
    table: Vec<f64>,
}

impl Search {
    /// `table` is the flat weight table from
    /// [`WeightFunction::degree_table`](crate::WeightFunction::degree_table)
    /// for maximum degree `cap`.
    pub fn new(n: usize, floor: usize, cap: usize, symmetry: Symmetry, collect: Collect, table: Vec<f64>) -> Self {
        assert!(n <= MAX_N && cap < n.max(2) && table.len() == (cap + 1) * (cap + 1));
        Search {
            n,
            floor: floor as u8,
            ordered: symmetry == Symmetry::DegreeOrdered,
            collect,
            stride: cap + 1,
            table,
        }
    }

    pub fn root(&self, m: usize, cap: usize) -> Node {
        Node {
            rows: [0; MAX_N],
            deg: [0; MAX_N],
            row: 0,
            edges_left: m as u8,
            cap: cap as u8,
        }
    }

    /// Expands nodes breadth-first, one row at a time, until there are at
    /// least `target` subtrees or nothing expands further. The result lists
    /// the subtrees in depth-first order.
    pub fn frontier(&self, root: Node, target: usize) -> Vec<Node> {
        let mut frontier = vec![root];
        loop {
            if frontier.len() >= target || frontier.iter().all(|n| self.is_terminal(n)) {
                return frontier;
            }
            let mut next = Vec::with_capacity(frontier.len() * 4);
            for node in frontier {
                if self.is_terminal(&node) {
                    next.push(node);
                } else {
                    self.for_each_child(&node, |child| next.push(child));
                }
            }
            frontier = next;
        }
    }

    fn is_terminal(&self, node: &Node) -> bool {
        node.edges_left == 0 || node.row as usize + 1 >= self.n
    }

    pub fn explore(&self, node: Node, out: &mut Partial) {
        if node.edges_left == 0 {
            self.leaf(&node, out);
        } else if (node.row as usize) + 1 < self.n {
            self.for_each_child(&node, |child| self.explore(child, out));
        }
    }

    fn for_each_child(&self, node: &Node, mut f: impl FnMut(Node)) {
        let n = self.n;
        let r = node.row as usize;
        let mut candidates: u16 = 0;
        for j in r + 1..n {
            if node.deg[j] < node.cap {
                candidates |= 1 << j;
            }
        }
        let base = node.deg[r];
        let lo = self.floor.saturating_sub(base) as u32;
        let hi = (node.cap - base)
            .min(node.edges_left)
            .min(candidates.count_ones() as u8) as u32;
        if lo > hi {
            return;
        }
        let mut sub = candidates;
        loop {
            let size = sub.count_ones();
            if (lo..=hi).contains(&size) {
                let child = self.apply(node, sub, size as u8);
                if self.feasible(&child) {
                    f(child);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & candidates;
        }
    }

    fn apply(&self, node: &Node, sub: u16, size: u8) -> Node {
        let r = node.row as usize;
        let mut child = *node;
        child.rows[r] |= sub;
        let mut bits = sub;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            child.rows[j] |= 1 << r;
            child.deg[j] += 1;
        }
        child.deg[r] += size;
        child.edges_left -= size;
        child.row += 1;
        if self.ordered {
            child.cap = child.deg[r];
        }
        child
    }

    /// Can the rows still undecided in `node` complete it to an admissible
    /// connected graph?
    fn feasible(&self, node: &Node) -> bool {
        let n = self.n;
        let start = node.row as usize;
        let finished = start - 1;
        let edges = node.edges_left as u32;
        let rest = (n - start) as u32;
        if edges > rest * rest.saturating_sub(1) / 2 {
            return false;
        }
        let (mut capacity, mut deficit) = (0u32, 0u32);
        for j in start..n {
            let d = node.deg[j];
            if d > node.cap {
                return false;
            }
            capacity += (node.cap - d) as u32;
            let need = self.floor.saturating_sub(d) as u32;
            if need > rest - 1 {
                return false;
            }
            deficit += need;
        }
        if capacity < 2 * edges || deficit > 2 * edges {
            return false;
        }

        // Every component must still be able to reach the rest, and the
        // remaining edges must be able to join all components.
        let finished_mask: u16 = if finished + 1 >= 16 { u16::MAX } else { (1 << (finished + 1)) - 1 };
        let all: u16 = if n == 16 { u16::MAX } else { (1 << n) - 1 };
        let mut unseen = all;
        let mut components = 0u32;
        let mut closed = false;
        while unseen != 0 {
            let comp = component_of(&node.rows, unseen.trailing_zeros() as usize);
            unseen &= !comp;
            components += 1;
            closed |= comp & !finished_mask == 0;
        }
        if components == 1 {
            return true;
        }
        !closed && components - 1 <= edges
    }

    fn leaf(&self, node: &Node, out: &mut Partial) {
        let n = self.n;
        let start = node.row as usize;
        for j in start..n {
            if node.deg[j] < self.floor || node.deg[j] > node.cap {
                return;
            }
            if self.ordered && j + 1 < n && node.deg[j] < node.deg[j + 1] {
                return;
            }
        }
        let all: u16 = if n == 16 { u16::MAX } else { (1 << n) - 1 };
        if component_of(&node.rows, 0) != all {
            return;
        }
        out.visited += 1;
        match self.collect {
            Collect::Minimum => {
                let quick = self.edge_sum(node);
                if quick > out.best + 2.0 * MINIMUM_SLACK {
                    return;
                }
                let key = self.class_key(node);
                let ti = self.key_ti(&key);
                if ti > out.best + MINIMUM_SLACK {
                    return;
                }
                self.record(node, key, ti, out);
                if ti < out.best {
                    out.best = ti;
                    out.purge();
                }
            }
            Collect::Histogram => {
                let key = self.class_key(node);
                let ti = self.key_ti(&key);
                out.best = out.best.min(ti);
                self.record(node, key, ti, out);
            }
        }
    }

    fn record(&self, node: &Node, key: ClassKey, ti: f64, out: &mut Partial) {
        out.entries
            .entry(key)
            .and_modify(|e| e.count += 1)
            .or_insert_with(|| Entry {
                count: 1,
                ti,
                example: encode_graph6(&self.to_graph(node)),
            });
    }

    fn edge_sum(&self, node: &Node) -> f64 {
        let mut total = 0.0;
        for a in 0..self.n {
            let da = node.deg[a] as usize * self.stride;
            let mut higher = node.rows[a] & !((2u32 << a) - 1) as u16;
            while higher != 0 {
                let b = higher.trailing_zeros() as usize;
                higher &= higher - 1;
                total += self.table[da + node.deg[b] as usize];
            }
        }
        total
    }

    fn class_key(&self, node: &Node) -> ClassKey {
        let mut counts = [[0u16; MAX_N]; MAX_N];
        for a in 0..self.n {
            let mut higher = node.rows[a] & !((2u32 << a) - 1) as u16;
            while higher != 0 {
                let b = higher.trailing_zeros() as usize;
                higher &= higher - 1;
                let (i, j) = (node.deg[a].min(node.deg[b]), node.deg[a].max(node.deg[b]));
                counts[i as usize][j as usize] += 1;
            }
        }
        let mut key = Vec::new();
        for (i, row) in counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate().skip(i) {
                if c > 0 {
                    key.push((i as u8, j as u8, c));
                }
            }
        }
        key
    }

    pub fn key_ti(&self, key: &ClassKey) -> f64 {
        key.iter().fold(0.0, |acc, &(i, j, c)| {
            acc + c as f64 * self.table[i as usize * self.stride + j as usize]
        })
    }

    fn to_graph(&self, node: &Node) -> Graph {
        Graph::from_rows_unchecked(node.rows[..self.n].iter().map(|&r| r as u64).collect())
    }
}

fn component_of(rows: &[u16; MAX_N], start: usize) -> u16 {
    let mut seen: u16 = 1 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = rows[v] & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen
}
