//! Exhaustive verification by enumeration of connected graphs.
//!
//! [`enumerate_min`] visits every connected simple graph with `n` vertices
//! and `m` edges inside optional degree bounds and reports the exact minimum
//! of `TI` together with every edge-class profile attaining it. The lemma and
//! theorem checks below are thin layers over that search.
//!
//! Two labelings are available. [`Symmetry::Labeled`] visits every labeled
//! graph, so `graphs_visited` is an exact labeled count. [`Symmetry::DegreeOrdered`]
//! keeps only labelings with `d_0 >= d_1 >= ... >= d_{n-1}`; every graph has
//! such a labeling, so the minimum and the set of profiles are unchanged while
//! the search is far smaller.

mod checkpoint;
mod search;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DegreeProfile, EdgeClassCounts};
use crate::property::{check_property_pstar, GridSpec, Verdict};
use crate::tolerance::{rel_close, CLOSED_FORM_REL, MINIMUM_SLACK};
use crate::weights::{closed_form_min, minimizer_class_counts, WeightError, WeightFunction};
use crate::{check_theorem_range, HypothesisViolated};

pub use checkpoint::CHECKPOINT_VERSION;
use search::{key_to_classes, Partial, Search, MAX_N};

/// Largest vertex count the enumerator accepts.
pub const MAX_ENUMERATION_VERTICES: usize = MAX_N;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("no connected graph has n = {n}, m = {m} within the degree bounds: {reason}")]
    Infeasible { n: usize, m: usize, reason: String },
    #[error("n = {n} exceeds the enumeration cap of {cap} vertices")]
    CapExceeded { n: usize, cap: usize },
    #[error(transparent)]
    Hypothesis(#[from] HypothesisViolated),
    #[error("structural checks need k >= 1 and n >= 5(k - 1); got n = {n}, k = {k}")]
    LemmaRange { n: usize, k: usize },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("checkpoint does not match this run: {0}")]
    CheckpointMismatch(String),
    #[error("could not start worker pool: {0}")]
    Workers(String),
}

/// What the search retains per visited graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Collect {
    /// Only class profiles within the tie slack of the running minimum.
    #[default]
    Minimum,
    /// Every class profile with its labeled count.
    Histogram,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    #[default]
    Labeled,
    DegreeOrdered,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationSpec {
    pub n: usize,
    pub m: usize,
    pub max_degree: Option<usize>,
    pub min_degree: Option<usize>,
    pub weight: WeightFunction,
    #[serde(default)]
    pub collect: Collect,
    #[serde(default)]
    pub symmetry: Symmetry,
}

impl EnumerationSpec {
    pub fn new(n: usize, m: usize, weight: WeightFunction) -> Self {
        EnumerationSpec {
            n,
            m,
            max_degree: None,
            min_degree: None,
            weight,
            collect: Collect::Minimum,
            symmetry: Symmetry::Labeled,
        }
    }

    pub fn with_max_degree(mut self, d: usize) -> Self {
        self.max_degree = Some(d);
        self
    }

    pub fn with_min_degree(mut self, d: usize) -> Self {
        self.min_degree = Some(d);
        self
    }

    pub fn with_collect(mut self, collect: Collect) -> Self {
        self.collect = collect;
        self
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    /// Effective `(floor, cap)` on vertex degrees.
    fn degree_bounds(&self) -> (usize, usize) {
        let connected_floor = usize::from(self.n >= 2);
        let floor = self.min_degree.unwrap_or(0).max(connected_floor);
        let cap = self.max_degree.unwrap_or(usize::MAX).min(self.n.saturating_sub(1));
        (floor, cap)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let (n, m) = (self.n, self.m);
        if n > MAX_N {
            return Err(OracleError::CapExceeded { n, cap: MAX_N });
        }
        let infeasible = |reason: &str| {
            Err(OracleError::Infeasible {
                n,
                m,
                reason: reason.to_string(),
            })
        };
        if n == 0 {
            return infeasible("no vertices");
        }
        if m > n * (n - 1) / 2 {
            return infeasible("more edges than vertex pairs");
        }
        if m + 1 < n {
            return infeasible("fewer than n - 1 edges");
        }
        let (floor, cap) = self.degree_bounds();
        if floor > cap {
            return infeasible("minimum degree exceeds maximum degree");
        }
        if 2 * m > n * cap {
            return infeasible("degree sum exceeds n * max_degree");
        }
        if 2 * m < n * floor {
            return infeasible("degree sum below n * min_degree");
        }
        self.weight.validate()?;
        Ok(())
    }
}

/// Execution settings that do not change the result.
#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Worker threads; `None` uses rayon's default pool.
    pub workers: Option<usize>,
    pub checkpoint: Option<PathBuf>,
    /// Write the checkpoint once this many graphs were visited since the
    /// previous write (checked as each subtree completes).
    pub checkpoint_every: u64,
    /// Minimum number of independent subtrees to split the search into.
    /// Part of the checkpoint fingerprint.
    pub min_subtrees: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: None,
            checkpoint: None,
            checkpoint_every: 100_000_000,
            min_subtrees: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileClass {
    pub degree_profile: DegreeProfile,
    pub edge_classes: EdgeClassCounts,
    /// `TI` recomputed from `edge_classes`.
    pub ti: f64,
    /// Visited graphs with this profile (labeled or degree-ordered count).
    pub count: u64,
    pub example_graph6: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub spec: EnumerationSpec,
    /// `None` only when no graph satisfies the spec.
    pub min_value: Option<f64>,
    pub minimizer_profiles: Vec<ProfileClass>,
    pub example_minimizer: Option<String>,
    /// Graphs satisfying the spec, counted under `spec.symmetry`.
    pub graphs_visited: u64,
    /// Every class profile met; filled for [`Collect::Histogram`] only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Vec<ProfileClass>>,
    pub subtrees: usize,
    pub resumed_subtrees: usize,
    pub elapsed_seconds: f64,
}

pub fn enumerate_min(spec: &EnumerationSpec) -> Result<SearchResult, OracleError> {
    enumerate_with(spec, &RunOptions::default())
}

pub fn enumerate_with(spec: &EnumerationSpec, options: &RunOptions) -> Result<SearchResult, OracleError> {
    spec.validate()?;
    let started = Instant::now();
    let (floor, cap) = spec.degree_bounds();
    let table = spec.weight.degree_table(cap)?;
    let search = Search::new(spec.n, floor, cap, spec.symmetry, spec.collect, table);
    let frontier = search.frontier(search.root(spec.m, cap), options.min_subtrees.max(1));
    let subtrees = frontier.len();
    let fingerprint = checkpoint::fingerprint(spec, subtrees);

    let resumed = match &options.checkpoint {
        Some(path) => checkpoint::load(path, &fingerprint, subtrees)?,
        None => BTreeMap::new(),
    };
    let resumed_subtrees = resumed.len();
    let progress = Mutex::new((resumed, 0u64, None::<OracleError>));

    let run = || {
        frontier.par_iter().enumerate().for_each(|(index, node)| {
            if progress.lock().expect("progress lock").0.contains_key(&index) {
                return;
            }
            let mut partial = Partial::new();
            search.explore(*node, &mut partial);
            let mut guard = progress.lock().expect("progress lock");
            let (done, since_write, failure) = &mut *guard;
            *since_write += partial.visited;
            done.insert(index, partial);
            if let Some(path) = &options.checkpoint {
                if *since_write >= options.checkpoint_every && failure.is_none() {
                    *since_write = 0;
                    if let Err(e) = checkpoint::save(path, &fingerprint, subtrees, done) {
                        *failure = Some(e);
                    }
                }
            }
        });
    };
    match options.workers {
        Some(workers) => rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| OracleError::Workers(e.to_string()))?
            .install(run),
        None => run(),
    }

    let (done, _, failure) = progress.into_inner().expect("progress lock");
    if let Some(e) = failure {
        return Err(e);
    }
    if let Some(path) = &options.checkpoint {
        checkpoint::save(path, &fingerprint, subtrees, &done)?;
    }

    let mut total = Partial::new();
    for (_, partial) in done {
        total.merge(partial, Collect::Histogram);
    }
    Ok(summarize(spec, &search, total, subtrees, resumed_subtrees, started))
}

fn summarize(
    spec: &EnumerationSpec,
    search: &Search,
    total: Partial,
    subtrees: usize,
    resumed_subtrees: usize,
    started: Instant,
) -> SearchResult {
    let profiles: Vec<ProfileClass> = total
        .entries
        .iter()
        .map(|(key, e)| {
            let edge_classes = key_to_classes(key);
            ProfileClass {
                degree_profile: edge_classes.implied_degree_profile(),
                ti: search.key_ti(key),
                edge_classes,
                count: e.count,
                example_graph6: e.example.clone(),
            }
        })
        .collect();
    let min_value = profiles.iter().map(|p| p.ti).min_by(f64::total_cmp);
    let minimizer_profiles: Vec<ProfileClass> = match min_value {
        Some(min) => profiles
            .iter()
            .filter(|p| p.ti <= min + MINIMUM_SLACK)
            .cloned()
            .collect(),
        None => Vec::new(),
    };
    let example_minimizer = minimizer_profiles
        .iter()
        .min_by(|a, b| a.ti.total_cmp(&b.ti))
        .map(|p| p.example_graph6.clone());
    SearchResult {
        spec: spec.clone(),
        min_value,
        minimizer_profiles,
        example_minimizer,
        graphs_visited: total.visited,
        histogram: (spec.collect == Collect::Histogram).then_some(profiles),
        subtrees,
        resumed_subtrees,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    }
}

fn spread(profile: &DegreeProfile) -> usize {
    profile.max_degree - profile.min_degree
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileWitness {
    pub n: usize,
    pub m: usize,
    pub weight: String,
    pub degree_profile: DegreeProfile,
    pub edge_classes: EdgeClassCounts,
    pub example_graph6: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlmostRegularCase {
    pub n: usize,
    pub m: usize,
    pub weight: String,
    pub min_value: f64,
    pub minimizing_profiles: usize,
    /// Some minimizing profile has `max degree - min degree <= 1`.
    pub some_almost_regular: bool,
    /// Every minimizing profile does.
    pub all_almost_regular: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlmostRegularReport {
    pub n_max: usize,
    pub weights: Vec<String>,
    /// Weights left out because they failed grid certification of P*.
    pub skipped_weights: Vec<String>,
    pub cases: Vec<AlmostRegularCase>,
    /// Minimizing profiles that are not almost regular.
    pub violations: Vec<ProfileWitness>,
    /// Every case has at least one almost-regular minimizer.
    pub pass: bool,
    /// Every minimizing profile of every case is almost regular.
    pub strict_pass: bool,
}

/// Largest `n` accepted by [`verify_almost_regular_minimizers`].
pub const ALMOST_REGULAR_MAX_N: usize = 8;

/// For every `n <= n_max` and every `m` from `n - 1` to `n(n - 1)/2`, finds
/// the minimizing class profiles of each P*-certified weight and checks that
/// they are almost regular.
pub fn verify_almost_regular_minimizers(
    n_max: usize,
    weights: &[WeightFunction],
    options: &RunOptions,
) -> Result<AlmostRegularReport, OracleError> {
    if n_max > ALMOST_REGULAR_MAX_N {
        return Err(OracleError::CapExceeded {
            n: n_max,
            cap: ALMOST_REGULAR_MAX_N,
        });
    }
    let mut certified = Vec::new();
    let mut skipped_weights = Vec::new();
    for w in weights {
        match check_property_pstar(w, &GridSpec::default()) {
            Ok(report) if report.pstar_holds == Verdict::Pass => certified.push(w.clone()),
            _ => skipped_weights.push(w.to_string()),
        }
    }

    let mut cases = Vec::new();
    let mut violations = Vec::new();
    for n in 2..=n_max {
        for m in n - 1..=n * (n - 1) / 2 {
            // One histogram serves every weight: each profile is re-scored.
            let spec = EnumerationSpec::new(n, m, WeightFunction::Sombor)
                .with_collect(Collect::Histogram)
                .with_symmetry(Symmetry::DegreeOrdered);
            let result = enumerate_with(&spec, options)?;
            let histogram = result.histogram.unwrap_or_default();
            for w in &certified {
                let scored: Vec<(f64, &ProfileClass)> = histogram
                    .iter()
                    .map(|p| Ok((crate::weights::ti_from_classes(&p.edge_classes, w)?, p)))
                    .collect::<Result<_, WeightError>>()?;
                let min = scored.iter().map(|s| s.0).min_by(f64::total_cmp).unwrap_or(f64::NAN);
                let minimizers: Vec<&ProfileClass> = scored
                    .iter()
                    .filter(|s| s.0 <= min + MINIMUM_SLACK)
                    .map(|s| s.1)
                    .collect();
                let regular = minimizers.iter().filter(|p| spread(&p.degree_profile) <= 1).count();
                for p in minimizers.iter().filter(|p| spread(&p.degree_profile) > 1) {
                    violations.push(ProfileWitness {
                        n,
                        m,
                        weight: w.to_string(),
                        degree_profile: p.degree_profile.clone(),
                        edge_classes: p.edge_classes.clone(),
                        example_graph6: p.example_graph6.clone(),
                    });
                }
                cases.push(AlmostRegularCase {
                    n,
                    m,
                    weight: w.to_string(),
                    min_value: min,
                    minimizing_profiles: minimizers.len(),
                    some_almost_regular: regular > 0,
                    all_almost_regular: regular == minimizers.len(),
                });
            }
        }
    }
    Ok(AlmostRegularReport {
        n_max,
        weights: certified.iter().map(ToString::to_string).collect(),
        skipped_weights,
        pass: cases.iter().all(|c| c.some_almost_regular),
        strict_pass: violations.is_empty(),
        cases,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructuralViolation {
    pub degree_profile: DegreeProfile,
    pub edge_classes: EdgeClassCounts,
    pub degree_two_vertices: usize,
    pub degree_two_edges: usize,
    pub example_graph6: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructuralReport {
    pub n: usize,
    pub k: usize,
    /// Labeled graphs with minimum degree >= 2 and maximum degree >= 4.
    pub graphs_checked: u64,
    pub profiles_checked: usize,
    pub violations: Vec<StructuralViolation>,
    pub pass: bool,
}

/// Checks that every connected `(n, n + k - 1)` graph with minimum degree at
/// least 2 and maximum degree at least 4 has at least four vertices of
/// degree 2 and at least one edge joining two of them.
pub fn verify_structural_lemmas(n: usize, k: usize, options: &RunOptions) -> Result<StructuralReport, OracleError> {
    if k == 0 || n < 5 * (k - 1) {
        return Err(OracleError::LemmaRange { n, k });
    }
    let spec = EnumerationSpec::new(n, n + k - 1, WeightFunction::Sombor)
        .with_min_degree(2)
        .with_collect(Collect::Histogram);
    let result = enumerate_with(&spec, options)?;
    let mut report = StructuralReport {
        n,
        k,
        graphs_checked: 0,
        profiles_checked: 0,
        violations: Vec::new(),
        pass: true,
    };
    for p in result.histogram.unwrap_or_default() {
        if p.degree_profile.max_degree < 4 {
            continue;
        }
        report.graphs_checked += p.count;
        report.profiles_checked += 1;
        let n2 = p.degree_profile.count(2);
        let m22 = p.edge_classes.get(2, 2);
        if n2 < 4 || m22 < 1 {
            report.violations.push(StructuralViolation {
                degree_profile: p.degree_profile,
                edge_classes: p.edge_classes,
                degree_two_vertices: n2,
                degree_two_edges: m22,
                example_graph6: p.example_graph6,
            });
        }
    }
    report.pass = report.violations.is_empty();
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphClass {
    /// Maximum degree at most 4.
    Chemical,
    /// Minimum degree at least 2 (maximum degree then at most `2m - 2(n - 1)`).
    Delta2,
    /// Every connected graph.
    All,
}

impl GraphClass {
    pub fn spec(self, n: usize, k: usize, weight: WeightFunction) -> EnumerationSpec {
        let m = n + k - 1;
        let base = EnumerationSpec::new(n, m, weight);
        match self {
            GraphClass::Chemical => base.with_max_degree(4),
            GraphClass::Delta2 => base.with_min_degree(2).with_max_degree(2 * m - 2 * (n - 1)),
            GraphClass::All => base,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub spec: EnumerationSpec,
    pub class: GraphClass,
    pub k: usize,
    pub min_value: Option<f64>,
    pub closed_form: f64,
    #[serde(rename = "match")]
    pub matches: bool,
    /// Every minimizing profile has degree set {2, 3} and the predicted class counts.
    pub profiles_match: bool,
    pub minimizer_profiles: Vec<ProfileClass>,
    pub example_minimizer_graph6: Option<String>,
    pub graphs_visited: u64,
    pub subtrees: usize,
    pub resumed_subtrees: usize,
    pub elapsed_seconds: f64,
    pub pass: bool,
}

/// Enumerates the class and compares its minimum and minimizers with the
/// closed form and the predicted structure.
pub fn verify_theorem(
    n: usize,
    k: usize,
    weight: &WeightFunction,
    class: GraphClass,
    symmetry: Symmetry,
    options: &RunOptions,
) -> Result<TheoremReport, OracleError> {
    check_theorem_range(n, k)?;
    let closed_form = closed_form_min(n, k, weight)?;
    let spec = class.spec(n, k, weight.clone()).with_symmetry(symmetry);
    let result = enumerate_with(&spec, options)?;
    let matches = result
        .min_value
        .is_some_and(|min| rel_close(min, closed_form, CLOSED_FORM_REL));
    let (m22, m23, m33) = minimizer_class_counts(n, k);
    let expected: EdgeClassCounts = [((2, 2), m22), ((2, 3), m23), ((3, 3), m33)].into_iter().collect();
    let profiles_match = !result.minimizer_profiles.is_empty()
        && result
            .minimizer_profiles
            .iter()
            .all(|p| p.degree_profile.degree_set() == [2, 3] && p.edge_classes == expected);
    Ok(TheoremReport {
        spec: result.spec,
        class,
        k,
        min_value: result.min_value,
        closed_form,
        matches,
        profiles_match,
        example_minimizer_graph6: result.example_minimizer,
        minimizer_profiles: result.minimizer_profiles,
        graphs_visited: result.graphs_visited,
        subtrees: result.subtrees,
        resumed_subtrees: result.resumed_subtrees,
        elapsed_seconds: result.elapsed_seconds,
        pass: matches && profiles_match,
    })
}
