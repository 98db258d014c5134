//! Exact evaluation over decimal inputs.
//!
//! Ratings and consensus values are carried as integer thousandths
//! ([`Millis`]) and the weights as exact decimals, so every term of the score
//! is a rational number computed without rounding. On the 0.1 x 0.2 grid with
//! the default weights each term is an integer number of thousandths.
//!
//! Display values are obtained by rounding half away from zero to three
//! decimals, see [`round_ratio`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::score::{MinMethod, Weights, GRID_CONSENSUS_POINTS, GRID_RATING_POINTS};

pub type Exact = Ratio<i128>;

/// Decimal places accepted when converting weights to exact decimals.
const WEIGHT_SCALE: i128 = 1_000_000;

/// Relative slack allowed when deciding that a float is a decimal literal.
const REPRESENTABLE_EPS: f64 = 1e-9;

/// A quantity in integer thousandths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Millis(pub i64);

impl Millis {
    pub const fn from_raw(thousandths: i64) -> Self {
        Self(thousandths)
    }

    pub fn raw(self) -> i64 {
        self.0
    }

    /// Interprets `value` as a decimal with at most three places.
    ///
    /// Returns `None` when `value` is not within float noise of a multiple
    /// of 0.001.
    pub fn from_f64_exact(value: f64) -> Option<Self> {
        if !value.is_finite() {
            return None;
        }
        let scaled = value * 1000.0;
        let nearest = scaled.round();
        if (scaled - nearest).abs() > REPRESENTABLE_EPS * scaled.abs().max(1.0) {
            return None;
        }
        if nearest.abs() > i64::MAX as f64 / 2.0 {
            return None;
        }
        Some(Self(nearest as i64))
    }

    /// Rounds `value` to thousandths, half away from zero.
    pub fn round_f64(value: f64) -> Self {
        Self((value * 1000.0).round() as i64)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    pub fn to_exact(self) -> Exact {
        Exact::new(self.0 as i128, 1000)
    }

    /// Shortest rendering that keeps at least one decimal: `4.3`, `0.0`,
    /// `3.613`.
    pub fn short(self) -> String {
        let full = self.to_string();
        let trimmed = full.trim_end_matches('0');
        if trimmed.ends_with('.') {
            format!("{trimmed}0")
        } else {
            trimmed.to_owned()
        }
    }
}

impl fmt::Display for Millis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:03}", abs / 1000, abs % 1000)
    }
}

impl FromStr for Millis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value: f64 = s.trim().parse().map_err(|_| Error::Precision {
            what: "decimal",
            value: f64::NAN,
        })?;
        Self::from_f64_exact(value).ok_or(Error::Precision {
            what: "decimal",
            value,
        })
    }
}

impl Serialize for Millis {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        // keeps the trailing zeros so JSON matches the CSV text
        let number =
            serde_json::Number::from_str(&self.to_string()).map_err(serde::ser::Error::custom)?;
        number.serialize(serializer)
    }
}

/// Rounds an exact value to thousandths, half away from zero.
pub fn round_ratio(value: &Exact) -> Millis {
    let scaled = value * Exact::from_integer(1000);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let twice = 2 * r.abs();
    let q = match twice.cmp(scaled.denom()) {
        Ordering::Less => q,
        _ => q + scaled.numer().signum(),
    };
    Millis(q as i64)
}

/// `value` in thousandths when it is an exact multiple of 0.001.
pub fn exact_millis(value: &Exact) -> Option<Millis> {
    let scaled = value * Exact::from_integer(1000);
    scaled.is_integer().then(|| Millis(*scaled.numer() as i64))
}

pub fn to_f64(value: &Exact) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

fn exact_decimal(what: &'static str, value: f64) -> Result<Exact> {
    let scaled = value * WEIGHT_SCALE as f64;
    let nearest = scaled.round();
    if !value.is_finite() || (scaled - nearest).abs() > REPRESENTABLE_EPS * scaled.abs().max(1.0) {
        return Err(Error::Precision { what, value });
    }
    Ok(Exact::new(nearest as i128, WEIGHT_SCALE))
}

/// Weights as exact decimals with up to six places.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactWeights {
    pub alpha: Exact,
    pub beta: Exact,
    pub delta: Exact,
}

impl ExactWeights {
    pub fn from_weights(w: &Weights) -> Result<Self> {
        Ok(Self {
            alpha: exact_decimal("alpha", w.alpha())?,
            beta: exact_decimal("beta", w.beta())?,
            delta: exact_decimal("delta", w.delta())?,
        })
    }
}

impl Default for ExactWeights {
    fn default() -> Self {
        Self {
            alpha: Exact::new(1, 2),
            beta: Exact::from_integer(10),
            delta: Exact::from_integer(100),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactBreakdown {
    pub term1: Exact,
    pub term2: Exact,
    pub term3: Exact,
    pub raw: Exact,
    pub scaled: Option<Exact>,
}

impl ExactBreakdown {
    /// Every field rounded to thousandths for display.
    pub fn rounded(&self) -> RoundedBreakdown {
        RoundedBreakdown {
            term1: round_ratio(&self.term1),
            term2: round_ratio(&self.term2),
            term3: round_ratio(&self.term3),
            raw: round_ratio(&self.raw),
            scaled: self.scaled.as_ref().map(round_ratio),
        }
    }

    /// `[term1, term2, term3, raw]` when all four are whole thousandths.
    pub fn terms_in_millis(&self) -> Option<[Millis; 4]> {
        Some([
            exact_millis(&self.term1)?,
            exact_millis(&self.term2)?,
            exact_millis(&self.term3)?,
            exact_millis(&self.raw)?,
        ])
    }
}

/// A breakdown rounded to three decimals, the unit of display and of
/// distinctness comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RoundedBreakdown {
    pub term1: Millis,
    pub term2: Millis,
    pub term3: Millis,
    pub raw: Millis,
    pub scaled: Option<Millis>,
}

fn check_millis(
    what: &'static str,
    value: Millis,
    lo: i64,
    hi: i64,
    range: &'static str,
) -> Result<()> {
    if (lo..=hi).contains(&value.0) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            what,
            value: value.to_f64(),
            range,
        })
    }
}

/// Exact counterpart of [`crate::score::compute_raw`].
pub fn compute_raw_exact(x: Millis, y: Millis, w: &ExactWeights) -> Result<ExactBreakdown> {
    check_millis("rating", x, 1000, 5000, "[1, 5]")?;
    check_millis("consensus", y, 0, 1000, "[0, 1]")?;
    Ok(compute_unchecked(x.to_exact(), y.to_exact(), w))
}

fn compute_unchecked(x: Exact, y: Exact, w: &ExactWeights) -> ExactBreakdown {
    let five = Exact::from_integer(5);
    let one = Exact::from_integer(1);
    let half = Exact::new(1, 2);

    let term1 = (x + (y - half) * w.alpha).min(five);
    let term2 = (one - y) * x / w.beta;
    let term3 = (five - x) / w.delta;
    let raw = term1 - term2 - term3;
    ExactBreakdown {
        term1,
        term2,
        term3,
        raw,
        scaled: None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactMin {
    pub value: Exact,
    pub method: MinMethod,
}

/// Exact counterpart of [`crate::score::analytic_min`].
pub fn analytic_min_exact(w: &ExactWeights) -> ExactMin {
    if w.beta >= Exact::from_integer(1) {
        let corner = compute_unchecked(Exact::from_integer(1), Exact::zero(), w);
        return ExactMin {
            value: corner.raw,
            method: MinMethod::Analytic,
        };
    }
    let mut best: Option<Exact> = None;
    for i in 0..GRID_RATING_POINTS as i128 {
        let x = Exact::new(100 + i, 100);
        for j in 0..GRID_CONSENSUS_POINTS as i128 {
            let raw = compute_unchecked(x, Exact::new(j, 100), w).raw;
            if best.as_ref().is_none_or(|b| raw < *b) {
                best = Some(raw);
            }
        }
    }
    ExactMin {
        value: best.expect("grid is nonempty"),
        method: MinMethod::Grid,
    }
}

/// Exact rescaling of `raw` from `[r_min, r_max]` onto `[t_min, t_max]`.
pub fn rescale_exact(
    raw: &Exact,
    r_min: &Exact,
    r_max: &Exact,
    t_min: &Exact,
    t_max: &Exact,
) -> Result<Exact> {
    if r_min >= r_max {
        return Err(Error::DegenerateRange(format!(
            "r_min ({}) must be below r_max ({})",
            to_f64(r_min),
            to_f64(r_max)
        )));
    }
    if t_min >= t_max {
        return Err(Error::DegenerateRange(format!(
            "t_min ({}) must be below t_max ({})",
            to_f64(t_min),
            to_f64(t_max)
        )));
    }
    if raw < r_min || raw > r_max {
        return Err(Error::OutOfScaleRange {
            raw: to_f64(raw),
            r_min: to_f64(r_min),
            r_max: to_f64(r_max),
        });
    }
    Ok((t_max - t_min) * (raw - r_min) / (r_max - r_min) + t_min)
}

/// Raw score plus, when `scaled`, the rescaled value onto `[1, 5]` with the
/// range derived from `w`.
pub fn compute_exact(
    x: Millis,
    y: Millis,
    w: &ExactWeights,
    scaled: bool,
) -> Result<ExactBreakdown> {
    let mut breakdown = compute_raw_exact(x, y, w)?;
    if scaled {
        let r_min = analytic_min_exact(w).value;
        let value = rescale_exact(
            &breakdown.raw,
            &r_min,
            &Exact::from_integer(5),
            &Exact::from_integer(1),
            &Exact::from_integer(5),
        )?;
        breakdown.scaled = Some(value);
    }
    Ok(breakdown)
}
