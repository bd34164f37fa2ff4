//! Vertex-degree-based topological indices `TI(G) = sum_{uv in E} I(d_u, d_v)`
//! on k-cyclic graphs.
//!
//! The crate evaluates indices for a family of edge-weight functions, checks
//! the monotonicity properties that make the minimum over k-cyclic graphs
//! predictable, builds and certifies the minimizing graphs, and confirms the
//! minimum independently by exhaustive enumeration and swap descent.
//!
//! Module map:
//!
//! | module      | contents                                                         |
//! |-------------|------------------------------------------------------------------|
//! | [`graph`]   | bitrow graphs, degree statistics, guarded edge swaps, graph6     |
//! | [`weights`] | edge-weight functions, `TI`, exponential `TI`, closed-form minimum |
//! | [`property`]| grid certification of properties P and P*, parameter sweeps      |
//! | [`extremal`]| minimizer construction, certificates, swap descent               |
//! | [`oracle`]  | exhaustive enumeration and lemma / theorem checks                |

#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod extremal;
pub mod graph;
pub mod oracle;
pub mod property;
pub mod tolerance;
pub mod weights;

use serde::Serialize;
use thiserror::Error;

pub use graph::{DegreeProfile, EdgeClassCounts, Graph, GraphError, SwapMove, SwapRejection};
pub use weights::{IndexValue, WeightError, WeightFunction};

/// Raised when `(n, k)` lies outside `k >= 3, n >= 5(k - 1)`, the range in
/// which the minimizer structure is known.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq, Serialize)]
#[error("requires k >= 3 and n >= 5(k - 1); got n = {n}, k = {k}")]
pub struct HypothesisViolated {
    pub n: usize,
    pub k: usize,
}

pub fn check_theorem_range(n: usize, k: usize) -> Result<(), HypothesisViolated> {
    if k >= 3 && n >= 5 * (k - 1) {
        Ok(())
    } else {
        Err(HypothesisViolated { n, k })
    }
}
