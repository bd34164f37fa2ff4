//! Grid certification of properties P and P* for edge-weight functions.
//!
//! Property P: `I(x, y)` is non-decreasing in `x`, and for every `a >= b` the
//! difference `h(x) = I(a, x) - I(b, x)` is non-increasing in `x`.
//! Property P*: P, plus `H(a, b) > 0` for all integers `a > b + 1 >= 2`, where
//!
//! ```text
//! H(a, b) = a [I(a, a) - I(a - 1, a)] - b [I(b + 1, b) - I(b, b)].
//! ```
//!
//! The checks sample a finite grid, so a `Pass` certifies the grid only.
//! Integer pairs `a >= b` range over `1..=dmax`; `x` ranges over the integers
//! `1..=dmax` merged with a real grid of spacing `continuous_step` (integers
//! only for weights that are not defined between degrees).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tolerance::PROPERTY_EPS;
use crate::weights::{WeightError, WeightFunction};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropertyError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("H(a, b) needs a > b + 1 >= 2, got a = {a}, b = {b}")]
    HDomain { a: usize, b: usize },
    #[error("probe needs y >= z > 0 and y - z >= 1, got y = {y}, z = {z}")]
    ProbeDomain { y: f64, z: f64 },
    #[error("invalid sweep: {0}")]
    Sweep(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dmax: usize,
    pub continuous_step: f64,
    pub strictness_tolerance: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            dmax: 50,
            continuous_step: 0.05,
            strictness_tolerance: PROPERTY_EPS,
        }
    }
}

impl GridSpec {
    pub fn new(dmax: usize, continuous_step: f64, strictness_tolerance: f64) -> Result<Self, PropertyError> {
        let grid = GridSpec {
            dmax,
            continuous_step,
            strictness_tolerance,
        };
        grid.validate()?;
        Ok(grid)
    }

    // Negated comparisons so NaN parameters are rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), PropertyError> {
        if self.dmax < 4 {
            return Err(PropertyError::Grid(format!("dmax must be at least 4, got {}", self.dmax)));
        }
        if !(self.continuous_step > 0.0 && self.continuous_step.is_finite()) {
            return Err(PropertyError::Grid(format!(
                "continuous_step must be positive, got {}",
                self.continuous_step
            )));
        }
        if !(self.strictness_tolerance >= 0.0) {
            return Err(PropertyError::Grid(format!(
                "tolerance must be non-negative, got {}",
                self.strictness_tolerance
            )));
        }
        Ok(())
    }

    /// Sorted sample points in `[1, dmax]`: the integers plus `1 + i * step`.
    pub fn x_grid(&self, real_arguments: bool) -> Vec<f64> {
        let top = self.dmax as f64;
        let mut points: Vec<f64> = (1..=self.dmax).map(|d| d as f64).collect();
        if real_arguments {
            let steps = ((top - 1.0) / self.continuous_step + 1e-9).floor() as usize;
            points.extend((1..=steps).map(|i| 1.0 + i as f64 * self.continuous_step));
            points.sort_by(f64::total_cmp);
            points.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        }
        points
    }

    /// Violation threshold at a given magnitude: `eps * max(1, |scale|)`.
    fn slack(&self, scale: f64) -> f64 {
        self.strictness_tolerance * scale.abs().max(1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// A concrete violation that can be re-evaluated with [`Counterexample::reproduce`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Counterexample {
    /// `I(next_x, y) < I(x, y)`.
    NotIncreasing { x: f64, next_x: f64, y: f64, value: f64, next_value: f64 },
    /// `h(next_x) > h(x)` for `h(t) = I(a, t) - I(b, t)`.
    DifferenceNotDecreasing { a: usize, b: usize, x: f64, next_x: f64, h: f64, next_h: f64 },
    /// `H(a, b) <= 0`.
    HNotPositive { a: usize, b: usize, value: f64 },
    /// `phi(next_x) >= phi(x)` for `phi(t) = I(t, y) - I(t, y - z)`.
    NotStrictlyDecreasing { y: f64, z: f64, x: f64, next_x: f64, phi: f64, next_phi: f64 },
    /// The weight could not be evaluated at a grid point.
    EvaluationFailed { x: f64, y: f64, message: String },
}

impl Counterexample {
    /// Recomputes the two compared quantities (or `H`, paired with 0).
    pub fn reproduce(&self, w: &WeightFunction) -> Result<(f64, f64), PropertyError> {
        Ok(match *self {
            Counterexample::NotIncreasing { x, next_x, y, .. } => (w.eval(x, y)?, w.eval(next_x, y)?),
            Counterexample::DifferenceNotDecreasing { a, b, x, next_x, .. } => {
                (difference(w, a, b, x)?, difference(w, a, b, next_x)?)
            }
            Counterexample::HNotPositive { a, b, .. } => (compute_h(w, a, b)?, 0.0),
            Counterexample::NotStrictlyDecreasing { y, z, x, next_x, .. } => {
                (probe(w, x, y, z)?, probe(w, next_x, y, z)?)
            }
            Counterexample::EvaluationFailed { x, y, .. } => (w.eval(x, y)?, 0.0),
        })
    }
}

fn difference(w: &WeightFunction, a: usize, b: usize, x: f64) -> Result<f64, WeightError> {
    Ok(w.eval(a as f64, x)? - w.eval(b as f64, x)?)
}

fn probe(w: &WeightFunction, x: f64, y: f64, z: f64) -> Result<f64, WeightError> {
    Ok(w.eval(x, y)? - w.eval(x, y - z)?)
}

/// Outcome of the property-P scan, with the tightest margins seen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyPCheck {
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    /// Smallest `I(x', y) - I(x, y)` over consecutive grid points.
    pub min_increase: f64,
    /// Largest `h(x') - h(x)` over consecutive grid points and pairs `a > b`.
    pub max_difference_step: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub weight: WeightFunction,
    pub p_holds: Verdict,
    pub pstar_holds: Verdict,
    pub counterexample: Option<Counterexample>,
    pub checked_domain: GridSpec,
    /// Always `"grid"`: verdicts hold on the sampled points only.
    pub certification: String,
    pub min_increase: f64,
    pub max_difference_step: f64,
    /// Smallest `H(a, b)` over the integer range, when it was evaluated.
    pub min_h: Option<f64>,
}

/// `H(a, b) = a [I(a, a) - I(a - 1, a)] - b [I(b + 1, b) - I(b, b)]` for `a > b + 1 >= 2`.
pub fn compute_h(w: &WeightFunction, a: usize, b: usize) -> Result<f64, PropertyError> {
    if b < 1 || a <= b + 1 {
        return Err(PropertyError::HDomain { a, b });
    }
    let (af, bf) = (a as f64, b as f64);
    let upper = w.eval(af, af)? - w.eval(af - 1.0, af)?;
    let lower = w.eval(bf + 1.0, bf)? - w.eval(bf, bf)?;
    Ok(af * upper - bf * lower)
}

fn evaluation_failure(x: f64, y: f64, err: WeightError) -> PropertyPCheck {
    PropertyPCheck {
        verdict: Verdict::Inconclusive,
        counterexample: Some(Counterexample::EvaluationFailed {
            x,
            y,
            message: err.to_string(),
        }),
        min_increase: f64::NAN,
        max_difference_step: f64::NAN,
    }
}

/// Grid check of property P. Scans monotonicity in `x` for every grid `y`,
/// then `h` for every integer pair `a > b` (the case `a = b` is `h = 0`);
/// the first violation in scan order is reported.
pub fn check_property_p(w: &WeightFunction, grid: &GridSpec) -> Result<PropertyPCheck, PropertyError> {
    grid.validate()?;
    w.validate()?;
    let xs = grid.x_grid(w.supports_real_arguments());

    let mut min_increase = f64::INFINITY;
    for &y in &xs {
        let mut prev: Option<(f64, f64)> = None;
        for &x in &xs {
            let value = match w.eval(x, y) {
                Ok(v) => v,
                Err(e) => return Ok(evaluation_failure(x, y, e)),
            };
            if let Some((px, pv)) = prev {
                let increase = value - pv;
                min_increase = min_increase.min(increase);
                if increase < -grid.slack(value) {
                    return Ok(PropertyPCheck {
                        verdict: Verdict::Fail,
                        counterexample: Some(Counterexample::NotIncreasing {
                            x: px,
                            next_x: x,
                            y,
                            value: pv,
                            next_value: value,
                        }),
                        min_increase,
                        max_difference_step: f64::NAN,
                    });
                }
            }
            prev = Some((x, value));
        }
    }

    // rows[d - 1][i] = I(d, xs[i])
    let rows = (1..=grid.dmax)
        .map(|d| xs.iter().map(|&x| w.eval(d as f64, x).map_err(|e| (d, x, e))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>();
    let rows = match rows {
        Ok(r) => r,
        Err((d, x, e)) => return Ok(evaluation_failure(d as f64, x, e)),
    };

    let mut max_step = f64::NEG_INFINITY;
    for a in 2..=grid.dmax {
        for b in 1..a {
            let (ra, rb) = (&rows[a - 1], &rows[b - 1]);
            for i in 1..xs.len() {
                let h = ra[i - 1] - rb[i - 1];
                let next_h = ra[i] - rb[i];
                let step = next_h - h;
                max_step = max_step.max(step);
                if step > grid.slack(ra[i]) {
                    return Ok(PropertyPCheck {
                        verdict: Verdict::Fail,
                        counterexample: Some(Counterexample::DifferenceNotDecreasing {
                            a,
                            b,
                            x: xs[i - 1],
                            next_x: xs[i],
                            h,
                            next_h,
                        }),
                        min_increase,
                        max_difference_step: max_step,
                    });
                }
            }
        }
    }

    Ok(PropertyPCheck {
        verdict: Verdict::Pass,
        counterexample: None,
        min_increase,
        max_difference_step: max_step,
    })
}

/// Property P* on the grid: P, then `H(a, b) > eps` for all `2 <= b + 1 < a <= dmax`.
/// The reported `H` violation is the lexicographically smallest `(a, b)`.
pub fn check_property_pstar(w: &WeightFunction, grid: &GridSpec) -> Result<PropertyReport, PropertyError> {
    let p = check_property_p(w, grid)?;
    let mut report = PropertyReport {
        weight: w.clone(),
        p_holds: p.verdict,
        pstar_holds: p.verdict,
        counterexample: p.counterexample,
        checked_domain: *grid,
        certification: "grid".to_string(),
        min_increase: p.min_increase,
        max_difference_step: p.max_difference_step,
        min_h: None,
    };
    if p.verdict != Verdict::Pass {
        return Ok(report);
    }

    let mut min_h = f64::INFINITY;
    for a in 3..=grid.dmax {
        for b in 1..a - 1 {
            let h = match compute_h(w, a, b) {
                Ok(h) => h,
                Err(PropertyError::Weight(e)) => {
                    report.pstar_holds = Verdict::Inconclusive;
                    report.counterexample = Some(Counterexample::EvaluationFailed {
                        x: a as f64,
                        y: b as f64,
                        message: e.to_string(),
                    });
                    return Ok(report);
                }
                Err(e) => return Err(e),
            };
            min_h = min_h.min(h);
            if h <= grid.slack(w.eval(a as f64, a as f64)?) {
                report.pstar_holds = Verdict::Fail;
                report.counterexample = Some(Counterexample::HNotPositive { a, b, value: h });
                report.min_h = Some(min_h);
                return Ok(report);
            }
        }
    }
    report.min_h = Some(min_h);
    report.pstar_holds = Verdict::Pass;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub weight: WeightFunction,
    pub y: f64,
    pub z: f64,
    pub verdict: Verdict,
    /// Largest `phi(x') - phi(x)` over consecutive grid points; negative on a strict pass.
    pub strict_margin: f64,
    pub counterexample: Option<Counterexample>,
}

/// Checks that `phi(x) = I(x, y) - I(x, y - z)` is strictly decreasing on the grid.
pub fn difference_probe_decreasing(
    w: &WeightFunction,
    y: f64,
    z: f64,
    grid: &GridSpec,
) -> Result<ProbeReport, PropertyError> {
    grid.validate()?;
    if !(z > 0.0 && y >= z && y - z >= 1.0) {
        return Err(PropertyError::ProbeDomain { y, z });
    }
    let xs = grid.x_grid(w.supports_real_arguments());
    let phis = xs
        .iter()
        .map(|&x| probe(w, x, y, z))
        .collect::<Result<Vec<_>, _>>()?;
    let mut margin = f64::NEG_INFINITY;
    let mut counterexample = None;
    for i in 1..xs.len() {
        let step = phis[i] - phis[i - 1];
        margin = margin.max(step);
        if counterexample.is_none() && step >= -grid.slack(w.eval(xs[i], y)?) {
            counterexample = Some(Counterexample::NotStrictlyDecreasing {
                y,
                z,
                x: xs[i - 1],
                next_x: xs[i],
                phi: phis[i - 1],
                next_phi: phis[i],
            });
        }
    }
    Ok(ProbeReport {
        weight: w.clone(),
        y,
        z,
        verdict: if counterexample.is_none() { Verdict::Pass } else { Verdict::Fail },
        strict_margin: margin,
        counterexample,
    })
}

/// One-parameter index families that can be swept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexFamily {
    GeneralSombor,
    PSombor,
    GeneralSumConnectivity,
    GeneralRandic,
}

/// A parameter interval with open/closed ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterRange {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl ParameterRange {
    pub fn contains(&self, t: f64) -> bool {
        let above = if self.lo_closed { t >= self.lo } else { t > self.lo };
        let below = if self.hi_closed { t <= self.hi } else { t < self.hi };
        above && below
    }
}

impl IndexFamily {
    pub fn with_parameter(self, t: f64) -> WeightFunction {
        match self {
            IndexFamily::GeneralSombor => WeightFunction::GeneralSombor { alpha: t },
            IndexFamily::PSombor => WeightFunction::PSombor { p: t },
            IndexFamily::GeneralSumConnectivity => WeightFunction::GeneralSumConnectivity { alpha: t },
            IndexFamily::GeneralRandic => WeightFunction::GeneralRandic { alpha: t },
        }
    }

    /// Parameter interval on which the family is known to have property P*.
    pub fn known_pstar_range(self) -> Option<ParameterRange> {
        match self {
            IndexFamily::GeneralSombor => Some(ParameterRange {
                lo: 0.5,
                hi: 1.0,
                lo_closed: true,
                hi_closed: false,
            }),
            IndexFamily::PSombor => Some(ParameterRange {
                lo: 1.0,
                hi: 2.0,
                lo_closed: false,
                hi_closed: true,
            }),
            IndexFamily::GeneralSumConnectivity => Some(ParameterRange {
                lo: 0.0,
                hi: 1.0,
                lo_closed: false,
                hi_closed: false,
            }),
            IndexFamily::GeneralRandic => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub parameter: f64,
    /// Whether the parameter lies in the family's known P* range.
    pub in_known_range: bool,
    pub report: PropertyReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: IndexFamily,
    pub samples: Vec<SweepSample>,
    /// Maximal runs of consecutive samples where P* passed, as `[first, last]`.
    pub certified_runs: Vec<[f64; 2]>,
    pub known_range: Option<ParameterRange>,
}

impl SweepReport {
    pub fn all_pass(&self) -> bool {
        self.samples.iter().all(|s| s.report.pstar_holds == Verdict::Pass)
    }
}

/// Parameters `lo, lo + step, ...` up to `hi`, rounded to 12 decimals.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn sweep_points(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, PropertyError> {
    if !(lo < hi) || !(step > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return Err(PropertyError::Sweep(format!("need lo < hi and step > 0, got [{lo}, {hi}] step {step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count)
        .map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Runs [`check_property_pstar`] at each sampled parameter, in parallel.
pub fn sweep_parameters(
    family: IndexFamily,
    lo: f64,
    hi: f64,
    step: f64,
    grid: &GridSpec,
) -> Result<SweepReport, PropertyError> {
    grid.validate()?;
    let points = sweep_points(lo, hi, step)?;
    let known_range = family.known_pstar_range();
    let samples = points
        .par_iter()
        .map(|&t| {
            let w = family.with_parameter(t);
            w.validate()?;
            Ok(SweepSample {
                parameter: t,
                in_known_range: known_range.is_some_and(|r| r.contains(t)),
                report: check_property_pstar(&w, grid)?,
            })
        })
        .collect::<Result<Vec<_>, PropertyError>>()?;

    let mut certified_runs: Vec<[f64; 2]> = Vec::new();
    let mut open = false;
    for s in &samples {
        if s.report.pstar_holds == Verdict::Pass {
            match (open, certified_runs.last_mut()) {
                (true, Some(run)) => run[1] = s.parameter,
                _ => certified_runs.push([s.parameter, s.parameter]),
            }
            open = true;
        } else {
            open = false;
        }
    }
    Ok(SweepReport {
        family,
        samples,
        certified_runs,
        known_range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::CustomWeight;

    fn coarse() -> GridSpec {
        GridSpec::new(12, 0.25, PROPERTY_EPS).unwrap()
    }

    #[test]
    fn grid_points() {
        let g = GridSpec::new(4, 0.5, 0.0).unwrap();
        assert_eq!(g.x_grid(true), vec![1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]);
        assert_eq!(g.x_grid(false), vec![1.0, 2.0, 3.0, 4.0]);
        let g = GridSpec::new(4, 0.7, 0.0).unwrap();
        assert_eq!(g.x_grid(true).len(), 4 + 4);
        assert!(GridSpec::new(3, 0.1, 0.0).is_err());
        assert!(GridSpec::new(10, 0.0, 0.0).is_err());
        assert!(GridSpec::new(10, 0.1, -1.0).is_err());
    }

    #[test]
    fn h_values() {
        // 3 (sqrt 18 - sqrt 13) - (sqrt 5 - sqrt 2), 40-digit reference value
        let h = compute_h(&WeightFunction::Sombor, 3, 1).unwrap();
        assert!((h - 1.089_413_819_839_192_912_250_05).abs() < 1e-14);

        let linear = WeightFunction::GeneralSumConnectivity { alpha: 1.0 };
        assert_eq!(compute_h(&linear, 4, 2).unwrap(), 2.0);
        for b in 1..10 {
            for a in b + 2..20 {
                assert_eq!(compute_h(&linear, a, b).unwrap(), (a - b) as f64);
            }
        }

        assert_eq!(compute_h(&linear, 3, 2), Err(PropertyError::HDomain { a: 3, b: 2 }));
        assert_eq!(compute_h(&linear, 3, 0), Err(PropertyError::HDomain { a: 3, b: 0 }));
    }

    #[test]
    fn property_p_verdicts() {
        let grid = coarse();
        assert_eq!(check_property_p(&WeightFunction::Sombor, &grid).unwrap().verdict, Verdict::Pass);
        let gs = WeightFunction::GeneralSombor { alpha: 0.75 };
        assert_eq!(check_property_p(&gs, &grid).unwrap().verdict, Verdict::Pass);

        let decreasing = WeightFunction::GeneralSumConnectivity { alpha: -1.0 };
        let check = check_property_p(&decreasing, &grid).unwrap();
        assert_eq!(check.verdict, Verdict::Fail);
        assert!(matches!(
            check.counterexample,
            Some(Counterexample::NotIncreasing { x, next_x, y, .. }) if x == 1.0 && next_x == 1.25 && y == 1.0
        ));

        // (x y)^a with a > 0 is increasing but h(x) = (a^t - b^t) x^t grows with x.
        let randic = WeightFunction::GeneralRandic { alpha: 0.5 };
        let check = check_property_p(&randic, &grid).unwrap();
        assert_eq!(check.verdict, Verdict::Fail);
        assert!(matches!(
            check.counterexample,
            Some(Counterexample::DifferenceNotDecreasing { a: 2, b: 1, .. })
        ));
    }

    #[test]
    fn pstar_requires_p() {
        let grid = coarse();
        let report = check_property_pstar(&WeightFunction::GeneralSumConnectivity { alpha: -1.0 }, &grid).unwrap();
        assert_eq!(report.p_holds, Verdict::Fail);
        assert_eq!(report.pstar_holds, Verdict::Fail);

        let report = check_property_pstar(&WeightFunction::Sombor, &grid).unwrap();
        assert_eq!(report.pstar_holds, Verdict::Pass);
        assert!(report.min_h.unwrap() > 0.0);
        assert_eq!(report.certification, "grid");
    }

    #[test]
    fn h_failure_is_lexicographically_minimal() {
        // I(i, j) = f(i) + f(j) with f increasing has constant h, so P holds;
        // a large first increment of f makes H(3, 1) = 3 * 0.1 - 10 negative.
        let f = |d: usize| if d == 1 { 1.0 } else { 11.0 + 0.1 * (d - 2) as f64 };
        let table: Vec<Vec<f64>> = (1..=6).map(|i| (1..=6).map(|j| f(i) + f(j)).collect()).collect();
        let w = WeightFunction::Custom(CustomWeight::new("steep_start", table).unwrap());
        let grid = GridSpec::new(6, 0.5, PROPERTY_EPS).unwrap();
        let report = check_property_pstar(&w, &grid).unwrap();
        assert_eq!(report.p_holds, Verdict::Pass);
        assert_eq!(report.pstar_holds, Verdict::Fail);
        let Some(Counterexample::HNotPositive { a: 3, b: 1, value }) = report.counterexample else {
            panic!("unexpected counterexample {:?}", report.counterexample);
        };
        assert!((value + 9.7).abs() < 1e-12);
        let (again, _) = report.counterexample.as_ref().unwrap().reproduce(&w).unwrap();
        assert!((again - value).abs() <= 1e-12);
    }

    #[test]
    fn probes() {
        let grid = GridSpec::default();
        let gs = WeightFunction::GeneralSombor { alpha: 0.75 };
        let r = difference_probe_decreasing(&gs, 5.0, 2.0, &grid).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.strict_margin < 0.0);

        let ps = WeightFunction::PSombor { p: 2.0 };
        assert_eq!(difference_probe_decreasing(&ps, 4.0, 1.0, &grid).unwrap().verdict, Verdict::Pass);

        let linear = WeightFunction::GeneralSumConnectivity { alpha: 1.0 };
        let r = difference_probe_decreasing(&linear, 4.0, 1.0, &grid).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.strict_margin.abs() < 1e-12);

        assert!(matches!(
            difference_probe_decreasing(&gs, 1.5, 1.0, &grid),
            Err(PropertyError::ProbeDomain { .. })
        ));
        assert!(difference_probe_decreasing(&gs, 3.0, 0.0, &grid).is_err());
    }

    #[test]
    fn sweep_point_generation() {
        let pts = sweep_points(0.5, 0.99, 0.01).unwrap();
        assert_eq!(pts.len(), 50);
        assert_eq!(pts[0], 0.5);
        assert_eq!(*pts.last().unwrap(), 0.99);
        assert_eq!(pts[17], 0.67);
        assert_eq!(sweep_points(1.05, 2.0, 0.05).unwrap().len(), 20);
        assert!(sweep_points(1.0, 1.0, 0.1).is_err());
        assert!(sweep_points(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sweep_summary() {
        let grid = coarse();
        let report = sweep_parameters(IndexFamily::GeneralSumConnectivity, 0.25, 1.5, 0.25, &grid).unwrap();
        let params: Vec<_> = report.samples.iter().map(|s| s.parameter).collect();
        assert_eq!(params, vec![0.25, 0.5, 0.75, 1.0, 1.25, 1.5]);
        assert!(report.samples[0].in_known_range);
        assert!(!report.samples[3].in_known_range);
        // alpha > 1 makes (a + x)^alpha - (b + x)^alpha increasing: P fails
        assert_eq!(report.samples[4].report.pstar_holds, Verdict::Fail);
        assert_eq!(report.certified_runs[0][0], 0.25);

        assert!(matches!(
            sweep_parameters(IndexFamily::PSombor, -1.0, 1.0, 0.5, &grid),
            Err(PropertyError::Weight(WeightError::Parameter(_)))
        ));
    }

    #[test]
    fn report_serializes() {
        let report = check_property_pstar(&WeightFunction::Sombor, &coarse()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["pstar_holds"], "pass");
        assert_eq!(json["weight"]["family"], "sombor");
        assert_eq!(json["checked_domain"]["dmax"], 12);
    }
}
