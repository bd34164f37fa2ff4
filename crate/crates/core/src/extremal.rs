//! Minimizing k-cyclic graphs: construction, certification and swap descent.
//!
//! For `k >= 3` and `n >= 5(k - 1)` a minimizer of `TI` under a weight with
//! property P* has degree set `{2, 3}` and edge classes
//! `m_{2,2} = n - 2k + 1`, `m_{2,3} = 2`, `m_{3,3} = 3k - 4`.
//! [`construct_minimizer`] builds one such graph from a Möbius ladder.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, SwapMove};
use crate::tolerance::{rel_close, CLOSED_FORM_REL, DESCENT_EPS};
use crate::weights::{closed_form_min, compute_ti, minimizer_class_counts, WeightError, WeightFunction};
use crate::{check_theorem_range, HypothesisViolated};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtremalError {
    #[error(transparent)]
    Hypothesis(#[from] HypothesisViolated),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("no connected {kind} graph with n = {n} and k = {k} exists")]
    Infeasible { n: usize, k: usize, kind: &'static str },
    #[error("gave up after {0} attempts to draw a graph within the degree bound")]
    RetriesExhausted(usize),
}

/// Builds a connected graph with degree set `{2, 3}` and edge classes
/// `(m_{2,2}, m_{2,3}, m_{3,3}) = (n - 2k + 1, 2, 3k - 4)`.
///
/// Start from the Möbius ladder on `2(k - 1)` vertices (the cycle
/// `0..2k-2` plus chords `i -- i + k - 1`), delete the chord `0 -- k - 1`
/// and reconnect its ends through a path over the remaining `n - 2k + 2`
/// vertices.
pub fn construct_minimizer(n: usize, k: usize) -> Result<Graph, HypothesisViolated> {
    check_theorem_range(n, k)?;
    let half = k - 1;
    let cubic = 2 * half;
    let mut edges: Vec<(usize, usize)> = (0..cubic).map(|i| (i, (i + 1) % cubic)).collect();
    edges.extend((1..half).map(|i| (i, i + half)));
    let mut previous = 0;
    for vertex in cubic..n {
        edges.push((previous, vertex));
        previous = vertex;
    }
    edges.push((previous, half));
    // k = 3 gives K4 minus a chord, still simple; the recipe never repeats a pair
    Ok(Graph::from_edge_list(n, &edges).expect("ladder construction is a simple graph"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalCertificate {
    pub n: usize,
    pub k: usize,
    pub hypotheses_ok: bool,
    pub degree_set_ok: bool,
    pub m22: usize,
    pub m23: usize,
    pub m33: usize,
    pub counts_ok: bool,
    pub connected_ok: bool,
    pub chemical_ok: bool,
    /// Per weight (by display name): does `TI` match the closed form?
    pub ti_matches_closed_form: BTreeMap<String, bool>,
    pub ti_values: BTreeMap<String, f64>,
}

impl ExtremalCertificate {
    pub fn passes(&self) -> bool {
        self.hypotheses_ok
            && self.degree_set_ok
            && self.counts_ok
            && self.connected_ok
            && self.chemical_ok
            && self.ti_matches_closed_form.values().all(|&ok| ok)
    }
}

/// Checks a connected graph against the minimizer structure and, per weight,
/// compares its `TI` with the closed-form minimum (relative 1e-9).
pub fn check_certificate(g: &Graph, weights: &[WeightFunction]) -> Result<ExtremalCertificate, ExtremalError> {
    let k = g.cyclomatic_number()?;
    let n = g.n();
    let hypotheses_ok = check_theorem_range(n, k).is_ok();
    let profile = g.degree_profile();
    let classes = g.edge_class_counts();
    let (m22, m23, m33) = (classes.get(2, 2), classes.get(2, 3), classes.get(3, 3));
    let counts_ok = hypotheses_ok
        && (m22, m23, m33) == minimizer_class_counts(n, k)
        && classes.classes() == 3;

    let mut ti_matches_closed_form = BTreeMap::new();
    let mut ti_values = BTreeMap::new();
    for w in weights {
        let ti = compute_ti(g, w)?.value;
        let matches = match closed_form_min(n, k, w) {
            Ok(expected) => rel_close(ti, expected, CLOSED_FORM_REL),
            Err(WeightError::Hypothesis(_)) => false,
            Err(e) => return Err(e.into()),
        };
        ti_matches_closed_form.insert(w.to_string(), matches);
        ti_values.insert(w.to_string(), ti);
    }

    Ok(ExtremalCertificate {
        n,
        k,
        hypotheses_ok,
        degree_set_ok: profile.degree_set() == [2, 3],
        m22,
        m23,
        m33,
        counts_ok,
        connected_ok: true,
        chemical_ok: g.is_chemical(),
        ti_matches_closed_form,
        ti_values,
    })
}

/// `TI(G*) - TI(G)` from the four rewired edges; every degree is unchanged,
/// so no other edge weight moves.
fn local_delta(degrees: &[usize], mv: &SwapMove, table: &impl Fn(usize, usize) -> f64) -> f64 {
    let (du, dx, dv, dy) = (degrees[mv.u], degrees[mv.x], degrees[mv.v], degrees[mv.y]);
    (table(du, dy) + table(dv, dx)) - (table(du, dx) + table(dv, dy))
}

fn weight_lookup(g: &Graph, w: &WeightFunction) -> Result<impl Fn(usize, usize) -> f64, WeightError> {
    let dmax = g.max_degree().max(1);
    let table = w.degree_table(dmax)?;
    let stride = dmax + 1;
    Ok(move |i: usize, j: usize| table[i * stride + j])
}

/// `TI(G*) - TI(G)` for a move that [`Graph::validate_swap`] accepts.
pub fn swap_delta(g: &Graph, mv: &SwapMove, w: &WeightFunction) -> Result<f64, ExtremalError> {
    g.validate_swap(mv).map_err(GraphError::InvalidMove)?;
    let lookup = weight_lookup(g, w)?;
    Ok(local_delta(&g.degrees(), mv, &lookup))
}

/// All moves satisfying the edge, non-edge and degree-order hypotheses,
/// in lexicographic `(u, x, v, y)` order. Connectivity is not checked here.
pub fn candidate_moves(g: &Graph) -> Vec<SwapMove> {
    let degrees = g.degrees();
    let mut moves = Vec::new();
    for u in 0..g.n() {
        for x in g.neighbors(u) {
            for v in 0..g.n() {
                if v == u || v == x || degrees[u] < degrees[v] || g.has_edge(v, x) {
                    continue;
                }
                for y in g.neighbors(v) {
                    if y != u && y != x && degrees[y] >= degrees[x] && !g.has_edge(u, y) {
                        moves.push(SwapMove::new(u, x, v, y));
                    }
                }
            }
        }
    }
    moves
}

/// Every fully valid move on `g` (connectivity included) with its delta.
pub fn valid_moves(g: &Graph, w: &WeightFunction) -> Result<Vec<(SwapMove, f64)>, ExtremalError> {
    let lookup = weight_lookup(g, w)?;
    let degrees = g.degrees();
    Ok(candidate_moves(g)
        .into_iter()
        .filter(|mv| g.validate_swap(mv).is_ok())
        .map(|mv| {
            let d = local_delta(&degrees, &mv, &lookup);
            (mv, d)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Among equally good moves take the smallest `(u, x, v, y)`.
    #[default]
    Lexicographic,
    /// Take the largest `(u, x, v, y)`.
    ReverseLexicographic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    #[serde(rename = "move")]
    pub mv: [usize; 4],
    pub delta: f64,
    pub ti: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Descent {
    pub graph: Graph,
    pub initial_ti: f64,
    pub trace: Vec<TraceStep>,
}

impl Descent {
    pub fn final_ti(&self) -> f64 {
        self.trace.last().map_or(self.initial_ti, |s| s.ti)
    }

    pub fn is_monotone(&self) -> bool {
        let mut previous = self.initial_ti;
        self.trace.iter().all(|s| {
            let ok = s.ti <= previous + DESCENT_EPS && s.delta <= 0.0;
            previous = s.ti;
            ok
        })
    }
}

/// Steepest descent over valid swaps: each step applies the valid move with
/// the most negative delta (ties by `tie_break`) and stops once no valid move
/// improves `TI` by more than 1e-9.
pub fn greedy_descent(start: &Graph, w: &WeightFunction, tie_break: TieBreak) -> Result<Descent, ExtremalError> {
    if !start.is_connected() {
        return Err(GraphError::NotConnected.into());
    }
    let initial_ti = compute_ti(start, w)?.value;
    let mut graph = start.clone();
    let mut trace = Vec::new();
    loop {
        let lookup = weight_lookup(&graph, w)?;
        let degrees = graph.degrees();
        let mut improving: Vec<(f64, SwapMove)> = candidate_moves(&graph)
            .into_iter()
            .map(|mv| (local_delta(&degrees, &mv, &lookup), mv))
            .filter(|&(d, _)| d < -DESCENT_EPS)
            .collect();
        improving.sort_by(|(da, ma), (db, mb)| {
            da.total_cmp(db).then_with(|| match tie_break {
                TieBreak::Lexicographic => ma.cmp(mb),
                TieBreak::ReverseLexicographic => mb.cmp(ma),
            })
        });
        let Some(&(delta, mv)) = improving
            .iter()
            .find(|(_, mv)| graph.validate_swap(mv).is_ok())
        else {
            break;
        };
        graph = graph.rewire_unchecked(&mv);
        trace.push(TraceStep {
            step: trace.len() + 1,
            mv: mv.as_array(),
            delta,
            ti: compute_ti(&graph, w)?.value,
        });
    }
    Ok(Descent {
        graph,
        initial_ti,
        trace,
    })
}

const RANDOM_RETRIES: usize = 100_000;

/// Random connected graph with `n` vertices and `n + k - 1` edges: a tree from
/// a random Prüfer sequence plus `k` uniformly drawn non-edges. With
/// `chemical`, draws repeat until the maximum degree is at most 4.
pub fn random_k_cyclic(n: usize, k: usize, seed: u64, chemical: bool) -> Result<Graph, ExtremalError> {
    let m = n + k - 1;
    let kind = if chemical { "chemical" } else { "simple" };
    if !(3..=crate::graph::MAX_VERTICES).contains(&n) || m > n * (n - 1) / 2 || (chemical && m > 2 * n) {
        return Err(ExtremalError::Infeasible { n, k, kind });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_RETRIES {
        let g = random_draw(n, k, &mut rng);
        if !chemical || g.is_chemical() {
            return Ok(g);
        }
    }
    Err(ExtremalError::RetriesExhausted(RANDOM_RETRIES))
}

fn random_draw(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Graph {
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut edges = prufer_tree(n, &prufer);
    let mut adjacency = vec![0u64; n];
    for &(a, b) in &edges {
        adjacency[a] |= 1 << b;
        adjacency[b] |= 1 << a;
    }
    let mut added = 0;
    while added < k {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b || adjacency[a] >> b & 1 == 1 {
            continue;
        }
        adjacency[a] |= 1 << b;
        adjacency[b] |= 1 << a;
        edges.push((a, b));
        added += 1;
    }
    // shuffle labels so the tree shape is not tied to the Prüfer ordering
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Graph::from_edge_list(n, &edges)
        .expect("random draw is simple")
        .permuted(&perm)
}

fn prufer_tree(n: usize, sequence: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &v in sequence {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in sequence {
        let leaf = (0..n).find(|&u| degree[u] == 1).expect("a leaf always exists");
        edges.push((leaf, v));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SwapRejection;
    use crate::weights::compute_ti;

    fn sorted_classes(g: &Graph) -> Vec<((usize, usize), usize)> {
        g.edge_class_counts().iter().collect()
    }

    #[test]
    fn minimizer_counts() {
        let g = construct_minimizer(10, 3).unwrap();
        assert_eq!((g.n(), g.m()), (10, 12));
        assert!(g.is_connected());
        assert_eq!(g.degree_profile().counts, BTreeMap::from([(2, 6), (3, 4)]));
        assert_eq!(sorted_classes(&g), vec![((2, 2), 5), ((2, 3), 2), ((3, 3), 5)]);
        assert!(g.is_chemical());

        let g = construct_minimizer(20, 4).unwrap();
        assert_eq!(sorted_classes(&g), vec![((2, 2), 13), ((2, 3), 2), ((3, 3), 8)]);

        assert_eq!(construct_minimizer(9, 3), Err(HypothesisViolated { n: 9, k: 3 }));
        assert!(construct_minimizer(30, 2).is_err());
    }

    #[test]
    fn minimizers_across_range() {
        for k in 3..=8 {
            for n in 5 * (k - 1)..5 * (k - 1) + 6 {
                let g = construct_minimizer(n, k).unwrap();
                assert_eq!(g.cyclomatic_number(), Ok(k));
                let cert = check_certificate(&g, &[WeightFunction::Sombor]).unwrap();
                assert!(cert.passes(), "{n} {k}: {cert:?}");
            }
        }
    }

    #[test]
    fn certificates() {
        let g = construct_minimizer(10, 3).unwrap();
        let cert = check_certificate(&g, &[WeightFunction::Sombor]).unwrap();
        assert!(cert.passes());
        assert!((cert.ti_values["sombor"] - 42.566_441_610_255_35).abs() < 1e-9);

        let g = construct_minimizer(13, 3).unwrap();
        let gsc = WeightFunction::GeneralSumConnectivity { alpha: 0.5 };
        let cert = check_certificate(&g, std::slice::from_ref(&gsc)).unwrap();
        assert!(cert.passes());
        // 2 sqrt 5 + 8 * 2 + 5 sqrt 6
        assert!((cert.ti_values[&gsc.to_string()] - 32.719_584_668_915_47).abs() < 1e-9);

        let c10 = Graph::from_edge_list(10, &(0..10).map(|i| (i, (i + 1) % 10)).collect::<Vec<_>>()).unwrap();
        let cert = check_certificate(&c10, &[WeightFunction::Sombor]).unwrap();
        assert!(!cert.passes());
        assert!(!cert.degree_set_ok);
        assert_eq!(cert.k, 1);

        let split = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            check_certificate(&split, &[]),
            Err(ExtremalError::Graph(GraphError::NotConnected))
        ));
    }

    // Two vertex-disjoint (2,3)-edges on a graph
    // where the rewiring keeps connectivity.
    fn two_cross_edges() -> Graph {
        Graph::from_edge_list(
            10,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 6), (6, 7), (7, 5), (1, 8), (8, 9), (9, 4)],
        )
        .unwrap()
    }

    #[test]
    fn swap_delta_values() {
        let g = two_cross_edges();
        let mv = SwapMove::new(4, 9, 6, 2);
        let delta = swap_delta(&g, &mv, &WeightFunction::Sombor).unwrap();
        // sqrt 8 + sqrt 18 - 2 sqrt 13
        assert!((delta - -0.140_034_739_062_503_342_229_998_9).abs() < 1e-14);
        let full = compute_ti(&g.apply_swap(&mv).unwrap(), &WeightFunction::Sombor).unwrap().value
            - compute_ti(&g, &WeightFunction::Sombor).unwrap().value;
        assert!((delta - full).abs() < 1e-9);

        assert!(matches!(
            swap_delta(&g, &SwapMove::new(0, 3, 1, 8), &WeightFunction::Sombor),
            Err(ExtremalError::Graph(GraphError::InvalidMove(SwapRejection::NotEdge(0, 3))))
        ));
    }

    #[test]
    fn equal_degree_moves_are_neutral() {
        let g = two_cross_edges();
        let degrees = g.degrees();
        let mut seen = 0;
        for (mv, delta) in valid_moves(&g, &WeightFunction::Sombor).unwrap() {
            if degrees[mv.u] == degrees[mv.v] || degrees[mv.x] == degrees[mv.y] {
                assert!(delta.abs() < 1e-12, "{mv:?} {delta}");
                seen += 1;
            } else {
                assert!(delta < -1e-12, "{mv:?} {delta}");
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn candidate_moves_respect_hypotheses() {
        let g = random_k_cyclic(12, 3, 7, false).unwrap();
        let moves = candidate_moves(&g);
        assert!(moves.windows(2).all(|w| w[0] < w[1]));
        for mv in &moves {
            match g.validate_swap(mv) {
                Ok(()) | Err(SwapRejection::Disconnects) => {}
                Err(other) => panic!("{mv:?} rejected: {other}"),
            }
        }
    }

    #[test]
    fn descent_from_minimizer_makes_no_moves() {
        let g = construct_minimizer(10, 3).unwrap();
        let d = greedy_descent(&g, &WeightFunction::Sombor, TieBreak::Lexicographic).unwrap();
        assert!(d.trace.is_empty());
        assert_eq!(d.graph, g);
        assert!((d.final_ti() - 42.566_441_610_255_35).abs() < 1e-9);
    }

    #[test]
    fn descent_is_monotone_and_bounded() {
        let w = WeightFunction::Sombor;
        let bound = closed_form_min(30, 3, &w).unwrap();
        for seed in 0..10 {
            let start = random_k_cyclic(30, 3, seed, true).unwrap();
            let d = greedy_descent(&start, &w, TieBreak::Lexicographic).unwrap();
            assert!(d.is_monotone());
            assert!(d.final_ti() >= bound - 1e-9);
            assert_eq!(d.graph.degrees(), start.degrees());
            assert_eq!(d.graph.cyclomatic_number(), Ok(3));
            let recomputed = compute_ti(&d.graph, &w).unwrap().value;
            assert!((recomputed - d.final_ti()).abs() < 1e-9);
            let other = greedy_descent(&start, &w, TieBreak::ReverseLexicographic).unwrap();
            assert!(other.is_monotone());
        }
    }

    #[test]
    fn descent_rejects_disconnected_start() {
        let split = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(greedy_descent(&split, &WeightFunction::Sombor, TieBreak::Lexicographic).is_err());
    }

    #[test]
    fn random_graphs() {
        let g = random_k_cyclic(10, 3, 1, false).unwrap();
        assert!(g.is_connected());
        assert_eq!(g.m(), 12);
        assert_eq!(g.cyclomatic_number(), Ok(3));
        assert_eq!(g, random_k_cyclic(10, 3, 1, false).unwrap());

        let tree = random_k_cyclic(5, 0, 3, false).unwrap();
        assert_eq!(tree.cyclomatic_number(), Ok(0));

        // m = 7 exceeds the 6 pairs available on 4 vertices
        assert!(matches!(random_k_cyclic(4, 4, 0, true), Err(ExtremalError::Infeasible { .. })));
        let dense = random_k_cyclic(5, 4, 0, true).unwrap();
        assert_eq!(dense.m(), 8);
        assert!(dense.is_chemical());
        assert!(matches!(random_k_cyclic(6, 8, 0, true), Err(ExtremalError::Infeasible { .. })));
        assert!(random_k_cyclic(2, 0, 0, false).is_err());
    }

    #[test]
    fn prufer_decoding() {
        // sequence [3, 3, 3] on 5 vertices is the star around 3 plus edge to 4
        let edges = prufer_tree(5, &[3, 3, 3]);
        let g = Graph::from_edge_list(5, &edges).unwrap();
        assert_eq!(g.degree(3), 4);
        assert!(g.is_connected());
    }
}
