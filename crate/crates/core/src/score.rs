//! Floating-point evaluation of the fused score and its min-max rescaling.
//!
//! The raw score of an item with overall rating `x` and consensus `y` is
//!
//! ```text
//! raw = min(5, x + (y - 0.5) * alpha) - (1 - y) * x / beta - (5 - x) / delta
//!       \_____________ term1 ______/   \____ term2 ____/   \__ term3 __/
//! ```
//!
//! `term1` shifts the rating up or down around the neutral consensus of 0.5
//! and is capped at five stars, `term2` penalizes disagreement harder at high
//! ratings, and `term3` separates ratings that would otherwise tie.
//!
//! See [`crate::exact`] for the integer-backed path used when equality of
//! scores matters.

use serde::Serialize;

use crate::error::{Error, Result};

/// Upper bound of the star scale; also the cap applied to `term1`.
pub const MAX_STARS: f64 = 5.0;
/// Lower bound of the star scale.
pub const MIN_STARS: f64 = 1.0;

/// Tolerance within which a raw score slightly outside the scale range is
/// clamped instead of rejected.
pub const RESCALE_TOLERANCE: f64 = 1e-9;

/// Points per axis of the fallback grid used to locate the raw minimum when
/// the analytic corner is not guaranteed to be the minimum.
pub const GRID_RATING_POINTS: usize = 401;
pub const GRID_CONSENSUS_POINTS: usize = 101;

fn finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}

/// Coefficients of the three score terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Weights {
    alpha: f64,
    beta: f64,
    delta: f64,
}

impl Weights {
    pub const DEFAULT_ALPHA: f64 = 0.5;
    pub const DEFAULT_BETA: f64 = 10.0;
    pub const DEFAULT_DELTA: f64 = 100.0;

    pub fn new(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        let alpha = finite("alpha", alpha)?;
        let beta = finite("beta", beta)?;
        let delta = finite("delta", delta)?;
        if alpha < 0.0 {
            return Err(Error::InvalidWeights(format!(
                "alpha must be >= 0, got {alpha}"
            )));
        }
        if beta <= 0.0 {
            return Err(Error::InvalidWeights(format!(
                "beta must be > 0, got {beta}"
            )));
        }
        if delta <= 0.0 {
            return Err(Error::InvalidWeights(format!(
                "delta must be > 0, got {delta}"
            )));
        }
        Ok(Self { alpha, beta, delta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

impl Default for Weights {
    fn default() -> Self {
        Self {
            alpha: Self::DEFAULT_ALPHA,
            beta: Self::DEFAULT_BETA,
            delta: Self::DEFAULT_DELTA,
        }
    }
}

/// An overall platform rating in `[1, 5]` stars.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct RatingValue(f64);

impl RatingValue {
    pub fn new(stars: f64) -> Result<Self> {
        let stars = finite("rating", stars)?;
        if !(MIN_STARS..=MAX_STARS).contains(&stars) {
            return Err(Error::OutOfDomain {
                what: "rating",
                value: stars,
                range: "[1, 5]",
            });
        }
        Ok(Self(stars))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Degree of agreement among an item's reviews, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct ConsensusValue(f64);

impl ConsensusValue {
    pub fn new(value: f64) -> Result<Self> {
        let value = finite("consensus", value)?;
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::OutOfDomain {
                what: "consensus",
                value,
                range: "[0, 1]",
            });
        }
        Ok(Self(value))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Term-level view of one score evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoreBreakdown {
    pub term1: f64,
    pub term2: f64,
    pub term3: f64,
    pub raw: f64,
    /// Present only when rescaling was requested.
    pub scaled: Option<f64>,
}

/// Affine target of the min-max rescaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleRange {
    r_min: f64,
    r_max: f64,
    t_min: f64,
    t_max: f64,
}

impl ScaleRange {
    pub fn new(r_min: f64, r_max: f64, t_min: f64, t_max: f64) -> Result<Self> {
        let r_min = finite("r_min", r_min)?;
        let r_max = finite("r_max", r_max)?;
        let t_min = finite("t_min", t_min)?;
        let t_max = finite("t_max", t_max)?;
        if r_min >= r_max {
            return Err(Error::DegenerateRange(format!(
                "r_min ({r_min}) must be below r_max ({r_max})"
            )));
        }
        if t_min >= t_max {
            return Err(Error::DegenerateRange(format!(
                "t_min ({t_min}) must be below t_max ({t_max})"
            )));
        }
        Ok(Self {
            r_min,
            r_max,
            t_min,
            t_max,
        })
    }

    /// Maps `[r_min, 5]` onto the star scale `[1, 5]`.
    pub fn onto_stars(r_min: f64) -> Result<Self> {
        Self::new(r_min, MAX_STARS, MIN_STARS, MAX_STARS)
    }

    /// The range implied by `weights`: the raw minimum up to the five-star cap.
    pub fn for_weights(weights: &Weights) -> Result<Self> {
        Self::onto_stars(analytic_min(weights).value)
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }
}

impl Default for ScaleRange {
    fn default() -> Self {
        Self {
            r_min: 0.61,
            r_max: MAX_STARS,
            t_min: MIN_STARS,
            t_max: MAX_STARS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    On,
    Off,
}

impl Scaling {
    pub fn is_on(self) -> bool {
        matches!(self, Scaling::On)
    }
}

/// Evaluates the three terms and their difference. `scaled` is left unset.
pub fn compute_raw(x: RatingValue, y: ConsensusValue, w: &Weights) -> ScoreBreakdown {
    let (x, y) = (x.get(), y.get());
    let term1 = MAX_STARS.min(x + (y - 0.5) * w.alpha);
    let term2 = (1.0 - y) * x / w.beta;
    let term3 = (MAX_STARS - x) / w.delta;
    ScoreBreakdown {
        term1,
        term2,
        term3,
        raw: term1 - term2 - term3,
        scaled: None,
    }
}

/// Validating wrapper over [`compute_raw`] for unchecked inputs.
pub fn compute_raw_checked(x: f64, y: f64, w: &Weights) -> Result<ScoreBreakdown> {
    Ok(compute_raw(
        RatingValue::new(x)?,
        ConsensusValue::new(y)?,
        w,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MinMethod {
    /// Evaluated at the `(x = 1, y = 0)` corner.
    Analytic,
    /// Minimum over the dense fallback grid.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinEstimate {
    pub value: f64,
    pub method: MinMethod,
}

/// Smallest raw score reachable under `w`.
///
/// With `beta >= 1` the raw score is non-decreasing in `x` at `y = 0`, so the
/// `(1, 0)` corner is the minimum. Otherwise the minimum is searched on a
/// 401 x 101 grid with step 0.01 on both axes.
pub fn analytic_min(w: &Weights) -> MinEstimate {
    if w.beta >= 1.0 {
        let corner = compute_raw(RatingValue(MIN_STARS), ConsensusValue(0.0), w);
        return MinEstimate {
            value: corner.raw,
            method: MinMethod::Analytic,
        };
    }
    MinEstimate {
        value: grid_min(w),
        method: MinMethod::Grid,
    }
}

fn grid_min(w: &Weights) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..GRID_RATING_POINTS {
        let x = RatingValue((100 + i) as f64 / 100.0);
        for j in 0..GRID_CONSENSUS_POINTS {
            let y = ConsensusValue(j as f64 / 100.0);
            best = best.min(compute_raw(x, y, w).raw);
        }
    }
    best
}

/// Min-max rescaling of `raw` from `[r_min, r_max]` onto `[t_min, t_max]`.
///
/// Inputs within [`RESCALE_TOLERANCE`] of the range are clamped onto it.
pub fn rescale(raw: f64, range: &ScaleRange) -> Result<f64> {
    let raw = finite("raw score", raw)?;
    if raw < range.r_min - RESCALE_TOLERANCE || raw > range.r_max + RESCALE_TOLERANCE {
        return Err(Error::OutOfScaleRange {
            raw,
            r_min: range.r_min,
            r_max: range.r_max,
        });
    }
    let raw = raw.clamp(range.r_min, range.r_max);
    let scaled = (range.t_max - range.t_min) * (raw - range.r_min) / (range.r_max - range.r_min)
        + range.t_min;
    Ok(scaled.clamp(range.t_min, range.t_max))
}

/// Raw score followed, when `scaling` is on, by rescaling onto `[1, 5]` with
/// the range derived from `w`.
pub fn compute(
    x: RatingValue,
    y: ConsensusValue,
    w: &Weights,
    scaling: Scaling,
) -> Result<ScoreBreakdown> {
    let mut breakdown = compute_raw(x, y, w);
    if scaling.is_on() {
        let range = ScaleRange::for_weights(w)?;
        breakdown.scaled = Some(rescale(breakdown.raw, &range)?);
    }
    Ok(breakdown)
}

#[cfg(test)]
mod tests {
    use super::*;

    macro_rules! assert_close {
        ($a:expr, $b:expr) => {
            assert_close!($a, $b, 1e-12)
        };
        ($a:expr, $b:expr, $tol:expr) => {{
            let (a, b): (f64, f64) = ($a, $b);
            assert!((a - b).abs() <= $tol, "{a} != {b} (tol {})", $tol);
        }};
    }

    fn raw(x: f64, y: f64) -> f64 {
        compute_raw_checked(x, y, &Weights::default()).unwrap().raw
    }

    #[test]
    fn reported_spot_values() {
        assert_close!(raw(4.0, 1.0), 4.240);
        assert_close!(raw(4.0, 0.0), 3.340);
        assert_close!(raw(5.0, 0.0), 4.25);
        assert_close!(raw(2.0, 0.0), 1.52);
    }

    #[test]
    fn clamp_binds_at_top_corner() {
        let b = compute_raw_checked(5.0, 1.0, &Weights::default()).unwrap();
        assert_eq!(b.term1, 5.0);
        assert_eq!(b.term2, 0.0);
        assert_eq!(b.term3, 0.0);
        assert_eq!(b.raw, 5.0);
    }

    #[test]
    fn neutral_consensus_breakdown() {
        let b = compute_raw_checked(4.0, 0.5, &Weights::default()).unwrap();
        assert_close!(b.term1, 4.0);
        assert_close!(b.term2, 0.2);
        assert_close!(b.term3, 0.01);
        assert_close!(b.raw, 3.79);
    }

    #[test]
    fn rejects_out_of_domain_inputs() {
        let w = Weights::default();
        assert!(matches!(
            compute_raw_checked(6.0, 0.5, &w),
            Err(Error::OutOfDomain { what: "rating", .. })
        ));
        assert!(matches!(
            compute_raw_checked(0.99, 0.5, &w),
            Err(Error::OutOfDomain { what: "rating", .. })
        ));
        assert!(matches!(
            compute_raw_checked(3.0, -0.01, &w),
            Err(Error::OutOfDomain {
                what: "consensus",
                ..
            })
        ));
        assert!(matches!(
            compute_raw_checked(f64::NAN, 0.5, &w),
            Err(Error::NonFinite { what: "rating", .. })
        ));
        assert!(matches!(
            compute_raw_checked(3.0, f64::INFINITY, &w),
            Err(Error::NonFinite {
                what: "consensus",
                ..
            })
        ));
    }

    #[test]
    fn rejects_invalid_weights() {
        assert!(Weights::new(-0.1, 10.0, 100.0).is_err());
        assert!(Weights::new(0.5, 0.0, 100.0).is_err());
        assert!(Weights::new(0.5, 10.0, -1.0).is_err());
        assert!(Weights::new(f64::NAN, 10.0, 100.0).is_err());
        assert!(Weights::new(0.0, 10.0, 100.0).is_ok());
    }

    #[test]
    fn default_weights() {
        let w = Weights::default();
        assert_eq!((w.alpha(), w.beta(), w.delta()), (0.5, 10.0, 100.0));
    }

    #[test]
    fn analytic_min_defaults_and_zero_alpha() {
        let m = analytic_min(&Weights::default());
        assert_eq!(m.method, MinMethod::Analytic);
        assert_close!(m.value, 0.61);

        let m = analytic_min(&Weights::new(0.0, 10.0, 100.0).unwrap());
        assert_close!(m.value, 0.86);
    }

    #[test]
    fn small_beta_falls_back_to_grid() {
        let w = Weights::new(0.5, 0.5, 100.0).unwrap();
        let m = analytic_min(&w);
        assert_eq!(m.method, MinMethod::Grid);
        // min over corners: (1,0) -> 0.75 - 2 - 0.04; (5,0) -> 4.75 - 10 - 0
        assert_close!(m.value, -5.25);
    }

    #[test]
    fn rescale_endpoints_and_interior() {
        let r = ScaleRange::default();
        assert_close!(rescale(5.0, &r).unwrap(), 5.0);
        assert_close!(rescale(0.61, &r).unwrap(), 1.0);
        // 4 * 3.63 / 4.39 + 1, done by hand as 14.52 / 4.39 + 1
        assert_close!(rescale(4.24, &r).unwrap(), 14.52 / 4.39 + 1.0);
        assert_close!(rescale(4.24, &r).unwrap(), 4.3075, 1e-4);
    }

    #[test]
    fn rescale_tolerance_and_errors() {
        let r = ScaleRange::default();
        assert_eq!(rescale(0.61 - 5e-10, &r).unwrap(), 1.0);
        assert_eq!(rescale(5.0 + 5e-10, &r).unwrap(), 5.0);
        assert!(matches!(
            rescale(0.6, &r),
            Err(Error::OutOfScaleRange { .. })
        ));
        assert!(matches!(
            rescale(5.01, &r),
            Err(Error::OutOfScaleRange { .. })
        ));
        assert!(matches!(
            ScaleRange::new(1.0, 1.0, 1.0, 5.0),
            Err(Error::DegenerateRange(_))
        ));
    }

    #[test]
    fn compute_with_and_without_scaling() {
        let w = Weights::default();
        let x = RatingValue::new(4.0).unwrap();
        let b = compute(x, ConsensusValue::new(1.0).unwrap(), &w, Scaling::Off).unwrap();
        assert_eq!(b.scaled, None);
        assert_close!(b.raw, 4.24);

        let b = compute(
            RatingValue::new(1.0).unwrap(),
            ConsensusValue::new(0.0).unwrap(),
            &w,
            Scaling::On,
        )
        .unwrap();
        assert_close!(b.scaled.unwrap(), 1.0);

        let b = compute(x, ConsensusValue::new(0.0).unwrap(), &w, Scaling::On).unwrap();
        let composed = rescale(
            compute_raw(x, ConsensusValue(0.0), &w).raw,
            &ScaleRange::default(),
        )
        .unwrap();
        assert_close!(b.scaled.unwrap(), composed, 1e-12);
        assert_close!(b.scaled.unwrap(), 3.487, 5e-4);
    }

    #[test]
    fn non_monotone_in_rating_inside_clamp() {
        // documented quirk: at y = 0.8 the clamp binds from x = 4.85 on and
        // term2 keeps growing with x
        assert!(raw(4.9, 0.8) > raw(5.0, 0.8));
    }
}
