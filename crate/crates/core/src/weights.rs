//! Edge-weight functions `I(x, y)` and the indices built from them.
//!
//! | family                       | `I(x, y)`              |
//! |------------------------------|------------------------|
//! | Sombor                       | `sqrt(x^2 + y^2)`      |
//! | general Sombor (alpha)       | `(x^2 + y^2)^alpha`    |
//! | p-Sombor (p)                 | `(x^p + y^p)^(1/p)`    |
//! | general sum-connectivity (a) | `(x + y)^alpha`        |
//! | general Randic (alpha)       | `(x y)^alpha`          |
//! | exponential of `J`           | `exp(J(x, y))`         |
//! | custom                       | dense table on `1..=dmax` |
//!
//! Weights are defined on `x, y >= 1` and are positive there.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::graph6::encode_graph6;
use crate::graph::{EdgeClassCounts, Graph};
use crate::{check_theorem_range, HypothesisViolated};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("weight arguments must be >= 1, got ({x}, {y})")]
    Domain { x: f64, y: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("exp(I({x}, {y})) overflows f64")]
    Overflow { x: f64, y: f64 },
    #[error("custom weight table: {0}")]
    Table(String),
    #[error(transparent)]
    Hypothesis(#[from] HypothesisViolated),
}

/// A user-supplied weight over integer degrees, `table[i - 1][j - 1] = I(i, j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCustomWeight")]
pub struct CustomWeight {
    pub name: String,
    pub table: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawCustomWeight {
    name: String,
    table: Vec<Vec<f64>>,
}

impl TryFrom<RawCustomWeight> for CustomWeight {
    type Error = WeightError;

    fn try_from(raw: RawCustomWeight) -> Result<Self, WeightError> {
        CustomWeight::new(raw.name, raw.table)
    }
}

impl CustomWeight {
    /// Validates the table: square, finite, positive and symmetric to 1e-12.
    pub fn new(name: impl Into<String>, table: Vec<Vec<f64>>) -> Result<Self, WeightError> {
        let d = table.len();
        if d == 0 {
            return Err(WeightError::Table("empty table".into()));
        }
        if let Some(i) = table.iter().position(|row| row.len() != d) {
            return Err(WeightError::Table(format!("row {} has length {}, expected {d}", i + 1, table[i].len())));
        }
        for (i, row) in table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v <= 0.0 {
                    return Err(WeightError::Table(format!("I({}, {}) = {v} is not positive and finite", i + 1, j + 1)));
                }
                if (v - table[j][i]).abs() > 1e-12 * v.abs().max(1.0) {
                    return Err(WeightError::Table(format!("I({}, {}) != I({}, {})", i + 1, j + 1, j + 1, i + 1)));
                }
            }
        }
        Ok(CustomWeight {
            name: name.into(),
            table,
        })
    }

    pub fn dmax(&self) -> usize {
        self.table.len()
    }

    fn lookup(&self, x: f64, y: f64) -> Result<f64, WeightError> {
        let index = |t: f64| -> Option<usize> {
            (t.fract() == 0.0 && t >= 1.0 && t <= self.dmax() as f64).then(|| t as usize - 1)
        };
        match (index(x), index(y)) {
            (Some(i), Some(j)) => Ok(self.table[i][j]),
            _ => Err(WeightError::Domain { x, y }),
        }
    }
}

/// A symmetric edge-weight function `I(x, y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightFunction {
    Sombor,
    GeneralSombor { alpha: f64 },
    PSombor { p: f64 },
    GeneralSumConnectivity { alpha: f64 },
    GeneralRandic { alpha: f64 },
    Exponential { inner: Box<WeightFunction> },
    Custom(CustomWeight),
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFunction::Sombor => write!(f, "sombor"),
            WeightFunction::GeneralSombor { alpha } => write!(f, "general_sombor(alpha={alpha})"),
            WeightFunction::PSombor { p } => write!(f, "p_sombor(p={p})"),
            WeightFunction::GeneralSumConnectivity { alpha } => {
                write!(f, "general_sum_connectivity(alpha={alpha})")
            }
            WeightFunction::GeneralRandic { alpha } => write!(f, "general_randic(alpha={alpha})"),
            WeightFunction::Exponential { inner } => write!(f, "exp({inner})"),
            WeightFunction::Custom(c) => write!(f, "custom({})", c.name),
        }
    }
}

fn nonzero_finite(name: &str, value: f64) -> Result<(), WeightError> {
    if value == 0.0 || !value.is_finite() {
        Err(WeightError::Parameter(format!("{name} must be finite and non-zero, got {value}")))
    } else {
        Ok(())
    }
}

impl WeightFunction {
    pub fn exponential(inner: WeightFunction) -> Self {
        WeightFunction::Exponential {
            inner: Box::new(inner),
        }
    }

    /// Checks the parameter domain of this weight (and of any inner weight).
    pub fn validate(&self) -> Result<(), WeightError> {
        match self {
            WeightFunction::Sombor | WeightFunction::Custom(_) => Ok(()),
            WeightFunction::GeneralSombor { alpha }
            | WeightFunction::GeneralSumConnectivity { alpha }
            | WeightFunction::GeneralRandic { alpha } => nonzero_finite("alpha", *alpha),
            WeightFunction::PSombor { p } => nonzero_finite("p", *p),
            WeightFunction::Exponential { inner } => inner.validate(),
        }
    }

    /// Whether the weight is defined between integer degrees (custom tables are not).
    pub fn supports_real_arguments(&self) -> bool {
        match self {
            WeightFunction::Custom(_) => false,
            WeightFunction::Exponential { inner } => inner.supports_real_arguments(),
            _ => true,
        }
    }

    /// Largest degree the weight can be evaluated at, if bounded.
    pub fn max_argument(&self) -> Option<usize> {
        match self {
            WeightFunction::Custom(c) => Some(c.dmax()),
            WeightFunction::Exponential { inner } => inner.max_argument(),
            _ => None,
        }
    }

    /// Evaluates `I(x, y)` for `x, y >= 1`.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64, WeightError> {
        // NaN fails this comparison too
        if !(x >= 1.0 && y >= 1.0) {
            return Err(WeightError::Domain { x, y });
        }
        self.validate()?;
        self.eval_in_domain(x, y)
    }

    fn eval_in_domain(&self, x: f64, y: f64) -> Result<f64, WeightError> {
        Ok(match self {
            WeightFunction::Sombor => x.hypot(y),
            WeightFunction::GeneralSombor { alpha } => (x * x + y * y).powf(*alpha),
            WeightFunction::PSombor { p } => (x.powf(*p) + y.powf(*p)).powf(p.recip()),
            WeightFunction::GeneralSumConnectivity { alpha } => (x + y).powf(*alpha),
            WeightFunction::GeneralRandic { alpha } => (x * y).powf(*alpha),
            WeightFunction::Exponential { inner } => {
                let value = inner.eval_in_domain(x, y)?.exp();
                if !value.is_finite() {
                    return Err(WeightError::Overflow { x, y });
                }
                value
            }
            WeightFunction::Custom(c) => c.lookup(x, y)?,
        })
    }

    /// Table of `I(i, j)` for `1 <= i, j <= max_degree`, laid out as
    /// `table[i * (max_degree + 1) + j]`; row and column 0 are unused.
    pub fn degree_table(&self, max_degree: usize) -> Result<Vec<f64>, WeightError> {
        self.validate()?;
        let stride = max_degree + 1;
        let mut table = vec![0.0; stride * stride];
        for i in 1..=max_degree {
            for j in i..=max_degree {
                let v = self.eval_in_domain(i as f64, j as f64)?;
                table[i * stride + j] = v;
                table[j * stride + i] = v;
            }
        }
        Ok(table)
    }
}

/// An index value together with what produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexValue {
    pub value: f64,
    pub index: WeightFunction,
    pub graph_digest: String,
}

/// First 16 hex digits of the SHA-256 of the graph's graph6 encoding.
pub fn graph_digest(g: &Graph) -> String {
    let digest = Sha256::digest(encode_graph6(g).as_bytes());
    hex::encode(&digest[..8])
}

/// `TI(G) = sum over edges uv of I(d_u, d_v)`; zero on edgeless graphs.
pub fn compute_ti(g: &Graph, w: &WeightFunction) -> Result<IndexValue, WeightError> {
    w.validate()?;
    let degrees = g.degrees();
    let mut value = 0.0;
    for (a, b) in g.edges() {
        value += w.eval_in_domain(degrees[a] as f64, degrees[b] as f64)?;
    }
    Ok(IndexValue {
        value,
        index: w.clone(),
        graph_digest: graph_digest(g),
    })
}

/// `TI` from the class counts alone: `sum_{i <= j} m_{i,j} I(i, j)`.
pub fn ti_from_classes(classes: &EdgeClassCounts, w: &WeightFunction) -> Result<f64, WeightError> {
    w.validate()?;
    classes.iter().try_fold(0.0, |acc, ((i, j), count)| {
        Ok(acc + count as f64 * w.eval_in_domain(i as f64, j as f64)?)
    })
}

/// `e^TI(G) = sum over edges of exp(I(d_u, d_v))`.
pub fn compute_exponential_ti(g: &Graph, w: &WeightFunction) -> Result<IndexValue, WeightError> {
    compute_ti(g, &WeightFunction::exponential(w.clone()))
}

/// `2 I(2,3) + (n - 2k + 1) I(2,2) + (3k - 4) I(3,3)`, the minimum of `TI`
/// over k-cyclic graphs on `n` vertices for weights with property P*.
pub fn closed_form_min(n: usize, k: usize, w: &WeightFunction) -> Result<f64, WeightError> {
    check_theorem_range(n, k)?;
    let (m22, m23, m33) = minimizer_class_counts(n, k);
    Ok(m23 as f64 * w.eval(2.0, 3.0)? + m22 as f64 * w.eval(2.0, 2.0)? + m33 as f64 * w.eval(3.0, 3.0)?)
}

/// `(m_{2,2}, m_{2,3}, m_{3,3}) = (n - 2k + 1, 2, 3k - 4)` for the minimizer.
pub fn minimizer_class_counts(n: usize, k: usize) -> (usize, usize, usize) {
    (n + 1 - 2 * k, 2, 3 * k - 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerance::rel_close;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    fn k4() -> Graph {
        Graph::from_edge_list(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn sombor_values() {
        let w = WeightFunction::Sombor;
        assert!((w.eval(2.0, 3.0).unwrap() - 13f64.sqrt()).abs() < 1e-15);
        assert!((w.eval(2.0, 3.0).unwrap() - 3.605551).abs() < 1e-6);
    }

    #[test]
    fn families_coincide_at_special_parameters() {
        let sombor = WeightFunction::Sombor;
        let gs = WeightFunction::GeneralSombor { alpha: 0.5 };
        let ps = WeightFunction::PSombor { p: 2.0 };
        for x in 1..=20 {
            for y in 1..=20 {
                let (x, y) = (x as f64 * 0.7 + 0.3, y as f64 * 1.3);
                let s = sombor.eval(x, y).unwrap();
                assert!(rel_close(gs.eval(x, y).unwrap(), s, 1e-12));
                assert!(rel_close(ps.eval(x, y).unwrap(), s, 1e-12));
            }
        }
    }

    #[test]
    fn domain_and_parameter_errors() {
        let w = WeightFunction::Sombor;
        assert!(matches!(w.eval(0.5, 2.0), Err(WeightError::Domain { .. })));
        assert!(matches!(w.eval(f64::NAN, 2.0), Err(WeightError::Domain { .. })));
        for bad in [
            WeightFunction::GeneralSombor { alpha: 0.0 },
            WeightFunction::PSombor { p: 0.0 },
            WeightFunction::GeneralSumConnectivity { alpha: 0.0 },
            WeightFunction::GeneralRandic { alpha: f64::NAN },
            WeightFunction::exponential(WeightFunction::PSombor { p: 0.0 }),
        ] {
            assert!(matches!(bad.eval(2.0, 2.0), Err(WeightError::Parameter(_))), "{bad}");
        }
    }

    #[test]
    fn ti_examples() {
        let c4 = cycle(4);
        let ti = compute_ti(&c4, &WeightFunction::Sombor).unwrap();
        assert!((ti.value - 8.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((ti.value - 11.313708).abs() < 1e-6);
        assert_eq!(ti.graph_digest.len(), 16);

        let gsc1 = WeightFunction::GeneralSumConnectivity { alpha: 1.0 };
        assert_eq!(compute_ti(&k4(), &gsc1).unwrap().value, 36.0);

        let edgeless = Graph::empty(5).unwrap();
        assert_eq!(compute_ti(&edgeless, &WeightFunction::Sombor).unwrap().value, 0.0);
    }

    #[test]
    fn exponential_index() {
        // 4 exp(sqrt 8), 40-digit reference value
        let expected = 67.675_314_714_231_586_786_138_597_130_508_626;
        let e = compute_exponential_ti(&cycle(4), &WeightFunction::Sombor).unwrap();
        assert!(rel_close(e.value, expected, 1e-14));
        assert_eq!(e.index, WeightFunction::exponential(WeightFunction::Sombor));

        let edgeless = Graph::empty(3).unwrap();
        assert_eq!(compute_exponential_ti(&edgeless, &WeightFunction::Sombor).unwrap().value, 0.0);

        let k2 = Graph::from_edge_list(2, &[(0, 1)]).unwrap();
        let gsc1 = WeightFunction::GeneralSumConnectivity { alpha: 1.0 };
        let e = compute_exponential_ti(&k2, &gsc1).unwrap();
        assert!(rel_close(e.value, 2f64.exp(), 1e-15));

        let huge = WeightFunction::GeneralSumConnectivity { alpha: 12.0 };
        assert!(matches!(
            compute_exponential_ti(&k2, &huge),
            Err(WeightError::Overflow { .. })
        ));
    }

    #[test]
    fn closed_forms() {
        // (2n + 5k - 10) sqrt 2 + 2 sqrt 13 at (10, 3)
        let sombor = closed_form_min(10, 3, &WeightFunction::Sombor).unwrap();
        assert!(rel_close(sombor, 25.0 * 2f64.sqrt() + 2.0 * 13f64.sqrt(), 1e-12));
        assert!((sombor - 42.566_441_610_255_35).abs() < 1e-10);

        // 2 * 5^a + 5 * 4^a + 5 * 6^a at a = 1/2
        let gsc = closed_form_min(10, 3, &WeightFunction::GeneralSumConnectivity { alpha: 0.5 }).unwrap();
        assert!((gsc - 26.719_584_668_915_47).abs() < 1e-10);

        // 2 * 13^a + 5 * 8^a + 5 * 18^a at a = 3/4
        let gs = closed_form_min(10, 3, &WeightFunction::GeneralSombor { alpha: 0.75 }).unwrap();
        assert!((gs - 81.171_051_837_759_62).abs() < 1e-10);

        let ps = closed_form_min(10, 3, &WeightFunction::PSombor { p: 1.5 }).unwrap();
        assert!((ps - 47.701_404_284_581_34).abs() < 1e-10);

        assert!(matches!(
            closed_form_min(9, 3, &WeightFunction::Sombor),
            Err(WeightError::Hypothesis(HypothesisViolated { n: 9, k: 3 }))
        ));
        assert!(closed_form_min(10, 2, &WeightFunction::Sombor).is_err());
    }

    #[test]
    fn custom_tables() {
        let table = vec![vec![1.0, 2.0], vec![2.0, 5.0]];
        let w = WeightFunction::Custom(CustomWeight::new("toy", table).unwrap());
        assert_eq!(w.eval(1.0, 2.0).unwrap(), 2.0);
        assert!(matches!(w.eval(1.5, 2.0), Err(WeightError::Domain { .. })));
        assert!(matches!(w.eval(3.0, 1.0), Err(WeightError::Domain { .. })));
        assert!(!w.supports_real_arguments());
        assert_eq!(w.max_argument(), Some(2));

        assert!(CustomWeight::new("asym", vec![vec![1.0, 2.0], vec![3.0, 1.0]]).is_err());
        assert!(CustomWeight::new("neg", vec![vec![-1.0]]).is_err());
        assert!(CustomWeight::new("ragged", vec![vec![1.0, 2.0], vec![2.0]]).is_err());
    }

    #[test]
    fn serialized_identity() {
        let w = WeightFunction::GeneralSombor { alpha: 0.75 };
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"family":"general_sombor","alpha":0.75}"#);
        assert_eq!(serde_json::to_string(&WeightFunction::Sombor).unwrap(), r#"{"family":"sombor"}"#);
        let e = WeightFunction::exponential(WeightFunction::PSombor { p: 1.5 });
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"family":"exponential","inner":{"family":"p_sombor","p":1.5}}"#);
        assert_eq!(serde_json::from_str::<WeightFunction>(&json).unwrap(), e);

        let custom = r#"{"family":"custom","name":"t","table":[[1.0,2.0],[2.0,1.0]]}"#;
        assert!(serde_json::from_str::<WeightFunction>(custom).is_ok());
        let bad = r#"{"family":"custom","name":"t","table":[[1.0,2.0],[3.0,1.0]]}"#;
        assert!(serde_json::from_str::<WeightFunction>(bad).is_err());
    }

    #[test]
    fn degree_table_layout() {
        let t = WeightFunction::Sombor.degree_table(4).unwrap();
        assert_eq!(t.len(), 25);
        assert_eq!(t[2 * 5 + 3], 13f64.sqrt());
        assert_eq!(t[3 * 5 + 2], 13f64.sqrt());
    }
}
