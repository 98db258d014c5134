//! Parameter sweeps over the (rating, consensus) plane and the
//! differentiation analysis of the resulting scores.
//!
//! The four standard panels:
//!
//! | panel | varied axis              | fixed axis                     | scaling |
//! |-------|--------------------------|--------------------------------|---------|
//! | A     | rating 1.0..=5.0 step .1 | consensus 0, 0.2, .., 1.0      | off     |
//! | B     | consensus, 50 pts in 0..=1 | rating 1, 2, 3, 4, 5         | off     |
//! | C     | as A                     | as A                           | on      |
//! | D     | as B                     | as B                           | on      |

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    analytic_min_exact, compute_raw_exact, rescale_exact, round_ratio, Exact, ExactWeights, Millis,
    RoundedBreakdown,
};
use crate::score::{
    compute_raw, rescale, ConsensusValue, RatingValue, ScaleRange, Scaling, ScoreBreakdown, Weights,
};

/// Column header of the sweep CSV.
pub const SWEEP_CSV_HEADER: &str = "panel,x,y,term1,term2,term3,raw,scaled";

/// Which axis a sweep walks along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    /// Consensus varies along the grid; ratings are held fixed.
    VaryConsensus,
    /// Rating varies along the grid; consensus values are held fixed.
    VaryRating,
}

impl FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vary-consensus" => Ok(Self::VaryConsensus),
            "vary-rating" => Ok(Self::VaryRating),
            other => Err(Error::InvalidSweep(format!(
                "unknown mode {other:?}, expected vary-consensus or vary-rating"
            ))),
        }
    }
}

/// Distinct-count a grid is expected to reach, carried so reports can show
/// any divergence next to the achieved count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReferenceCount {
    pub n_pairs: usize,
    pub n_distinct: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub label: String,
    pub mode: SweepMode,
    pub fixed_values: Vec<f64>,
    pub grid: Vec<f64>,
    pub scaling: Scaling,
    pub weights: Weights,
    pub reference: Option<ReferenceCount>,
}

impl SweepSpec {
    pub fn new(
        label: impl Into<String>,
        mode: SweepMode,
        fixed_values: Vec<f64>,
        grid: Vec<f64>,
        scaling: Scaling,
        weights: Weights,
    ) -> Result<Self> {
        let spec = Self {
            label: label.into(),
            mode,
            fixed_values,
            grid,
            scaling,
            weights,
            reference: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.fixed_values.is_empty() {
            return Err(Error::InvalidSweep("fixed values must not be empty".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::InvalidSweep("grid must not be empty".into()));
        }
        if let Some(w) = self
            .grid
            .windows(2)
            .find(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
        {
            return Err(Error::InvalidSweep(format!(
                "grid must be strictly increasing, found {} then {}",
                w[0], w[1]
            )));
        }
        type AxisCheck = fn(f64) -> Result<()>;
        let (grid_check, fixed_check): (AxisCheck, AxisCheck) = match self.mode {
            SweepMode::VaryConsensus => (check_consensus, check_rating),
            SweepMode::VaryRating => (check_rating, check_consensus),
        };
        self.grid.iter().try_for_each(|&v| grid_check(v))?;
        self.fixed_values.iter().try_for_each(|&v| fixed_check(v))?;
        Ok(())
    }

    pub fn n_pairs(&self) -> usize {
        self.fixed_values.len() * self.grid.len()
    }

    /// `(x, y)` pairs, fixed values outer and grid inner.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.fixed_values.iter().flat_map(move |&fixed| {
            self.grid.iter().map(move |&g| match self.mode {
                SweepMode::VaryConsensus => (fixed, g),
                SweepMode::VaryRating => (g, fixed),
            })
        })
    }
}

fn check_rating(v: f64) -> Result<()> {
    RatingValue::new(v).map(drop)
}

fn check_consensus(v: f64) -> Result<()> {
    ConsensusValue::new(v).map(drop)
}

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let last = (n - 1) as f64;
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        end
                    } else {
                        start + (end - start) * i as f64 / last
                    }
                })
                .collect()
        }
    }
}

/// Points `start, start + step, ..` up to `end`, all taken in thousandths so
/// decimal steps do not drift.
pub fn decimal_range(start: Millis, step: Millis, end: Millis) -> Result<Vec<f64>> {
    if step.raw() <= 0 {
        return Err(Error::InvalidSweep(format!(
            "step must be positive, got {step}"
        )));
    }
    if end < start {
        return Err(Error::InvalidSweep(format!(
            "range end {end} is below start {start}"
        )));
    }
    Ok((start.raw()..=end.raw())
        .step_by(step.raw() as usize)
        .map(|m| m as f64 / 1000.0)
        .collect())
}

/// The standard figure panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Panel {
    A,
    B,
    C,
    D,
}

impl Panel {
    pub const ALL: [Panel; 4] = [Panel::A, Panel::B, Panel::C, Panel::D];

    /// Pairs and distinct scores expected on the 6 x 41 rating sweep.
    pub const RATING_SWEEP_REFERENCE: ReferenceCount = ReferenceCount {
        n_pairs: 246,
        n_distinct: 240,
    };

    pub fn label(self) -> &'static str {
        match self {
            Panel::A => "A",
            Panel::B => "B",
            Panel::C => "C",
            Panel::D => "D",
        }
    }

    pub fn spec(self) -> SweepSpec {
        let scaling = match self {
            Panel::A | Panel::B => Scaling::Off,
            Panel::C | Panel::D => Scaling::On,
        };
        match self {
            Panel::A | Panel::C => SweepSpec {
                label: self.label().to_owned(),
                mode: SweepMode::VaryRating,
                fixed_values: (0..=5).map(|i| i as f64 / 5.0).collect(),
                grid: (10..=50).map(|i| i as f64 / 10.0).collect(),
                scaling,
                weights: Weights::default(),
                reference: Some(Self::RATING_SWEEP_REFERENCE),
            },
            Panel::B | Panel::D => SweepSpec {
                label: self.label().to_owned(),
                mode: SweepMode::VaryConsensus,
                fixed_values: (1..=5).map(f64::from).collect(),
                grid: linspace(0.0, 1.0, 50),
                scaling,
                weights: Weights::default(),
                reference: None,
            },
        }
    }
}

impl FromStr for Panel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Panel::A),
            "B" | "b" => Ok(Panel::B),
            "C" | "c" => Ok(Panel::C),
            "D" | "d" => Ok(Panel::D),
            other => Err(Error::InvalidSweep(format!(
                "unknown panel {other:?}, expected one of A, B, C, D"
            ))),
        }
    }
}

pub fn default_panel_specs() -> [SweepSpec; 4] {
    Panel::ALL.map(Panel::spec)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: RatingValue,
    pub y: ConsensusValue,
    pub breakdown: ScoreBreakdown,
    /// Display values: exact-path rounding when the inputs are decimal,
    /// otherwise the floating values rounded.
    pub rounded: RoundedBreakdown,
}

struct ExactContext {
    weights: ExactWeights,
    r_min: Exact,
}

fn exact_context(weights: &Weights) -> Option<ExactContext> {
    let weights = ExactWeights::from_weights(weights).ok()?;
    let r_min = analytic_min_exact(&weights).value;
    Some(ExactContext { weights, r_min })
}

fn exact_rounded(ctx: &ExactContext, x: f64, y: f64, scaled: bool) -> Option<RoundedBreakdown> {
    let (xm, ym) = (Millis::from_f64_exact(x)?, Millis::from_f64_exact(y)?);
    let mut breakdown = compute_raw_exact(xm, ym, &ctx.weights).ok()?;
    if scaled {
        let five = Exact::from_integer(5);
        breakdown.scaled = Some(
            rescale_exact(
                &breakdown.raw,
                &ctx.r_min,
                &five,
                &Exact::from_integer(1),
                &five,
            )
            .ok()?,
        );
    }
    Some(breakdown.rounded())
}

fn float_rounded(b: &ScoreBreakdown) -> RoundedBreakdown {
    RoundedBreakdown {
        term1: Millis::round_f64(b.term1),
        term2: Millis::round_f64(b.term2),
        term3: Millis::round_f64(b.term3),
        raw: Millis::round_f64(b.raw),
        scaled: b.scaled.map(Millis::round_f64),
    }
}

/// Evaluates one pair the same way a sweep row is evaluated.
pub fn evaluate_row(x: f64, y: f64, weights: &Weights, scaling: Scaling) -> Result<SweepRow> {
    let (xv, yv) = (RatingValue::new(x)?, ConsensusValue::new(y)?);
    let mut breakdown = compute_raw(xv, yv, weights);
    if scaling.is_on() {
        breakdown.scaled = Some(rescale(breakdown.raw, &ScaleRange::for_weights(weights)?)?);
    }
    let rounded = exact_context(weights)
        .and_then(|ctx| exact_rounded(&ctx, x, y, scaling.is_on()))
        .unwrap_or_else(|| float_rounded(&breakdown));
    Ok(SweepRow {
        x: xv,
        y: yv,
        breakdown,
        rounded,
    })
}

/// Evaluates every pair of `spec`, fixed values outer and grid inner.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let range = match spec.scaling {
        Scaling::On => Some(ScaleRange::for_weights(&spec.weights)?),
        Scaling::Off => None,
    };
    let exact = exact_context(&spec.weights);

    spec.pairs()
        .map(|(x, y)| {
            let (xv, yv) = (RatingValue::new(x)?, ConsensusValue::new(y)?);
            let mut breakdown = compute_raw(xv, yv, &spec.weights);
            if let Some(range) = &range {
                breakdown.scaled = Some(rescale(breakdown.raw, range)?);
            }
            let rounded = exact
                .as_ref()
                .and_then(|ctx| exact_rounded(ctx, x, y, range.is_some()))
                .unwrap_or_else(|| float_rounded(&breakdown));
            Ok(SweepRow {
                x: xv,
                y: yv,
                breakdown,
                rounded,
            })
        })
        .collect()
}

/// Writes `rows` as sweep CSV under the given panel label and returns the
/// number of data rows written.
pub fn emit_sweep_csv<W: Write>(panel: &str, rows: &[SweepRow], mut sink: W) -> io::Result<usize> {
    writeln!(sink, "{SWEEP_CSV_HEADER}")?;
    for row in rows {
        let r = &row.rounded;
        let scaled = r.scaled.map(|s| s.to_string()).unwrap_or_default();
        writeln!(
            sink,
            "{panel},{},{},{},{},{},{},{scaled}",
            Millis::round_f64(row.x.get()),
            Millis::round_f64(row.y.get()),
            r.term1,
            r.term2,
            r.term3,
            r.raw,
        )?;
    }
    sink.flush()?;
    Ok(rows.len())
}

/// One CSV-shaped record, used for the JSON rendering of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord<'a> {
    pub panel: &'a str,
    pub x: Millis,
    pub y: Millis,
    pub term1: Millis,
    pub term2: Millis,
    pub term3: Millis,
    pub raw: Millis,
    pub scaled: Option<Millis>,
}

pub fn sweep_records<'a>(panel: &'a str, rows: &[SweepRow]) -> Vec<SweepRecord<'a>> {
    rows.iter()
        .map(|row| SweepRecord {
            panel,
            x: Millis::round_f64(row.x.get()),
            y: Millis::round_f64(row.y.get()),
            term1: row.rounded.term1,
            term2: row.rounded.term2,
            term3: row.rounded.term3,
            raw: row.rounded.raw,
            scaled: row.rounded.scaled,
        })
        .collect()
}

/// A (rating, consensus) pair in thousandths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GridPair {
    pub x: Millis,
    pub y: Millis,
}

impl fmt::Display for GridPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x.short(), self.y.short())
    }
}

/// Pairs sharing one score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollisionGroup {
    /// The shared score at three decimals.
    pub raw: Millis,
    pub members: Vec<GridPair>,
}

/// How two scores were judged equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Comparison {
    /// Exact values rounded to three decimals.
    ThreeDecimals,
    /// Exact rescaled values, no rounding.
    ExactScaled,
    /// Sorted doubles chained within `epsilon`.
    Float { epsilon: f64 },
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comparison::ThreeDecimals => f.write_str("exact three-decimal equality"),
            Comparison::ExactScaled => f.write_str("exact equality of rescaled scores"),
            Comparison::Float { epsilon } => write!(f, "floating comparison within {epsilon:e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferentiationReport {
    pub n_pairs: usize,
    pub n_distinct: usize,
    pub percent: f64,
    /// Ordered by ascending score; members in sweep order.
    pub collisions: Vec<CollisionGroup>,
    pub reference: Option<ReferenceCount>,
    pub comparison: Comparison,
}

impl DifferentiationReport {
    fn from_groups<K: Ord>(
        keyed: impl IntoIterator<Item = (K, Millis, GridPair)>,
        reference: Option<ReferenceCount>,
        comparison: Comparison,
    ) -> Self {
        let mut groups: BTreeMap<K, (Millis, Vec<GridPair>)> = BTreeMap::new();
        let mut n_pairs = 0;
        for (key, shown, pair) in keyed {
            n_pairs += 1;
            groups
                .entry(key)
                .or_insert_with(|| (shown, Vec::new()))
                .1
                .push(pair);
        }
        let n_distinct = groups.len();
        let collisions = groups
            .into_values()
            .filter(|(_, members)| members.len() > 1)
            .map(|(raw, members)| CollisionGroup { raw, members })
            .collect();
        Self {
            n_pairs,
            n_distinct,
            percent: percent(n_distinct, n_pairs),
            collisions,
            reference,
            comparison,
        }
    }

    /// True when a reference count is attached and the achieved distinct
    /// count differs from it.
    pub fn diverges(&self) -> bool {
        self.reference
            .is_some_and(|r| r.n_pairs != self.n_pairs || r.n_distinct != self.n_distinct)
    }

    /// `"246 pairs, 235 distinct, 95.5%"`
    pub fn summary_line(&self) -> String {
        format!(
            "{} pairs, {} distinct, {:.1}%",
            self.n_pairs, self.n_distinct, self.percent
        )
    }

    /// Explanation printed when the achieved count differs from the
    /// reference.
    pub fn divergence_note(&self) -> Option<String> {
        let reference = self.reference.filter(|_| self.diverges())?;
        Some(format!(
            "note: expected {} distinct of {} pairs ({:.1}%), achieved {} distinct of {} ({:.1}%) \
             under {}",
            reference.n_distinct,
            reference.n_pairs,
            percent(reference.n_distinct, reference.n_pairs),
            self.n_distinct,
            self.n_pairs,
            self.percent,
            self.comparison,
        ))
    }

    pub fn find_group(&self, pair: GridPair) -> Option<&CollisionGroup> {
        self.collisions.iter().find(|g| g.members.contains(&pair))
    }

    /// Two CSV sections separated by a blank line: the summary, then one
    /// line per collision member.
    pub fn write_csv<W: Write>(&self, mut sink: W) -> io::Result<()> {
        writeln!(
            sink,
            "n_pairs,n_distinct,percent,reference_pairs,reference_distinct"
        )?;
        let (rp, rd) = match self.reference {
            Some(r) => (r.n_pairs.to_string(), r.n_distinct.to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(
            sink,
            "{},{},{:.1},{rp},{rd}",
            self.n_pairs, self.n_distinct, self.percent
        )?;
        writeln!(sink)?;
        writeln!(sink, "group,raw,x,y")?;
        for (i, group) in self.collisions.iter().enumerate() {
            for member in &group.members {
                writeln!(sink, "{},{},{},{}", i + 1, group.raw, member.x, member.y)?;
            }
        }
        sink.flush()
    }
}

impl fmt::Display for DifferentiationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        if let Some(note) = self.divergence_note() {
            writeln!(f, "{note}")?;
        }
        if self.collisions.is_empty() {
            return writeln!(f, "no collisions");
        }
        writeln!(f, "collisions:")?;
        for group in &self.collisions {
            write!(f, "  {}:", group.raw)?;
            for member in &group.members {
                write!(f, " {member}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

fn exact_pairs(spec: &SweepSpec) -> Result<(ExactWeights, Vec<GridPair>)> {
    spec.validate()?;
    let weights = ExactWeights::from_weights(&spec.weights)?;
    let pairs = spec
        .pairs()
        .map(|(x, y)| {
            let xm = Millis::from_f64_exact(x).ok_or(Error::Precision {
                what: "rating",
                value: x,
            })?;
            let ym = Millis::from_f64_exact(y).ok_or(Error::Precision {
                what: "consensus",
                value: y,
            })?;
            Ok(GridPair { x: xm, y: ym })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((weights, pairs))
}

/// Counts distinct raw scores at three decimals over every pair of `spec`.
///
/// Requires every grid and fixed value to be a whole number of thousandths
/// and the weights to be short decimals; otherwise returns
/// [`Error::Precision`]. See [`differentiation_report_approx`] for arbitrary
/// grids.
pub fn differentiation_report(spec: &SweepSpec) -> Result<DifferentiationReport> {
    let (weights, pairs) = exact_pairs(spec)?;
    let keyed = pairs
        .into_iter()
        .map(|pair| {
            let raw = round_ratio(&compute_raw_exact(pair.x, pair.y, &weights)?.raw);
            Ok((raw, raw, pair))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DifferentiationReport::from_groups(
        keyed,
        spec.reference,
        Comparison::ThreeDecimals,
    ))
}

/// Groups pairs by their exact rescaled score, before any display rounding.
///
/// Rescaling is strictly increasing, so on grids whose raw scores are whole
/// thousandths this yields the same groups as [`differentiation_report`].
pub fn differentiation_report_scaled(spec: &SweepSpec) -> Result<DifferentiationReport> {
    let (weights, pairs) = exact_pairs(spec)?;
    let r_min = analytic_min_exact(&weights).value;
    let five = Exact::from_integer(5);
    let one = Exact::from_integer(1);
    let keyed = pairs
        .into_iter()
        .map(|pair| {
            let raw = compute_raw_exact(pair.x, pair.y, &weights)?.raw;
            let scaled = rescale_exact(&raw, &r_min, &five, &one, &five)?;
            let shown = round_ratio(&scaled);
            Ok((scaled, shown, pair))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DifferentiationReport::from_groups(
        keyed,
        spec.reference,
        Comparison::ExactScaled,
    ))
}

/// Floating counterpart of [`differentiation_report`] for arbitrary grids.
///
/// Scores are sorted and chained: a score within `epsilon` of the previous
/// one joins its group. With `epsilon = 0` only bit-equal doubles collide.
/// Pair coordinates are reported rounded to thousandths; members of a group
/// appear in ascending score order.
pub fn differentiation_report_approx(
    spec: &SweepSpec,
    epsilon: f64,
) -> Result<DifferentiationReport> {
    spec.validate()?;
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidSweep(format!(
            "epsilon must be finite and non-negative, got {epsilon}"
        )));
    }
    let mut scored = spec
        .pairs()
        .enumerate()
        .map(|(i, (x, y))| {
            let raw = compute_raw(RatingValue::new(x)?, ConsensusValue::new(y)?, &spec.weights).raw;
            let pair = GridPair {
                x: Millis::round_f64(x),
                y: Millis::round_f64(y),
            };
            Ok((raw, i, pair))
        })
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut group = 0usize;
    let mut leader = Millis::default();
    let mut previous: Option<f64> = None;
    let mut keyed = Vec::with_capacity(scored.len());
    for (raw, _, pair) in scored {
        if previous.is_none_or(|p| raw - p > epsilon) {
            group += 1;
            leader = Millis::round_f64(raw);
        }
        previous = Some(raw);
        keyed.push((group, leader, pair));
    }
    Ok(DifferentiationReport::from_groups(
        keyed,
        spec.reference,
        Comparison::Float { epsilon },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(mode: SweepMode, fixed: Vec<f64>, grid: Vec<f64>, scaling: Scaling) -> SweepSpec {
        SweepSpec::new("custom", mode, fixed, grid, scaling, Weights::default()).unwrap()
    }

    fn gp(x: i64, y: i64) -> GridPair {
        GridPair {
            x: Millis(x),
            y: Millis(y),
        }
    }

    #[test]
    fn vary_consensus_at_rating_four() {
        let rows = run_sweep(&spec(
            SweepMode::VaryConsensus,
            vec![4.0],
            vec![0.0, 0.5, 1.0],
            Scaling::Off,
        ))
        .unwrap();
        let raws: Vec<_> = rows.iter().map(|r| r.rounded.raw).collect();
        assert_eq!(raws, [Millis(3340), Millis(3790), Millis(4240)]);
        assert!(rows.iter().all(|r| r.rounded.scaled.is_none()));
    }

    #[test]
    fn vary_rating_at_zero_consensus() {
        let rows = run_sweep(&spec(
            SweepMode::VaryRating,
            vec![0.0],
            vec![2.0, 5.0],
            Scaling::Off,
        ))
        .unwrap();
        let raws: Vec<_> = rows.iter().map(|r| r.rounded.raw).collect();
        assert_eq!(raws, [Millis(1520), Millis(4250)]);
        assert_eq!((rows[0].x.get(), rows[0].y.get()), (2.0, 0.0));
    }

    #[test]
    fn scaled_maximum() {
        let rows = run_sweep(&spec(
            SweepMode::VaryConsensus,
            vec![5.0],
            vec![1.0],
            Scaling::On,
        ))
        .unwrap();
        assert_eq!(rows[0].breakdown.scaled, Some(5.0));
        assert_eq!(rows[0].rounded.scaled, Some(Millis(5000)));
    }

    #[test]
    fn ordering_fixed_outer_grid_inner() {
        let s = spec(
            SweepMode::VaryRating,
            vec![0.0, 1.0],
            vec![1.0, 2.0, 3.0],
            Scaling::Off,
        );
        let pairs: Vec<_> = s.pairs().collect();
        assert_eq!(
            pairs,
            [
                (1.0, 0.0),
                (2.0, 0.0),
                (3.0, 0.0),
                (1.0, 1.0),
                (2.0, 1.0),
                (3.0, 1.0)
            ]
        );
    }

    #[test]
    fn spec_validation() {
        let w = Weights::default();
        let bad = |mode, fixed: Vec<f64>, grid: Vec<f64>| {
            SweepSpec::new("x", mode, fixed, grid, Scaling::Off, w).is_err()
        };
        assert!(bad(SweepMode::VaryRating, vec![0.0], vec![2.0, 1.0]));
        assert!(bad(SweepMode::VaryRating, vec![0.0], vec![1.0, 1.0]));
        assert!(bad(SweepMode::VaryRating, vec![], vec![1.0]));
        assert!(bad(SweepMode::VaryRating, vec![0.0], vec![]));
        assert!(bad(SweepMode::VaryRating, vec![1.5], vec![1.0]));
        assert!(bad(SweepMode::VaryConsensus, vec![0.5], vec![0.0]));
        assert!(bad(
            SweepMode::VaryConsensus,
            vec![3.0],
            vec![0.0, f64::NAN]
        ));
    }

    #[test]
    fn panel_shapes() {
        let [a, b, c, d] = default_panel_specs();
        assert_eq!(a.grid.len(), 41);
        assert_eq!(b.grid.len(), 50);
        assert_eq!(a.n_pairs(), 246);
        assert_eq!(b.n_pairs(), 250);
        assert_eq!(
            (a.scaling, b.scaling, c.scaling, d.scaling),
            (Scaling::Off, Scaling::Off, Scaling::On, Scaling::On)
        );
        assert_eq!(a.fixed_values, [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]);
        assert_eq!((b.grid[0], b.grid[49]), (0.0, 1.0));
        assert_eq!((a.grid[0], a.grid[40]), (1.0, 5.0));
    }

    #[test]
    fn decimal_range_has_no_drift() {
        let r = decimal_range(Millis(1000), Millis(100), Millis(5000)).unwrap();
        assert_eq!(r.len(), 41);
        assert_eq!(r[33], 4.3);
        assert!(decimal_range(Millis(0), Millis(0), Millis(1000)).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 1.0, 50);
        assert_eq!(v.len(), 50);
        assert_eq!(v[49], 1.0);
        assert_eq!(linspace(0.3, 1.0, 1), [0.3]);
    }

    #[test]
    fn known_collision() {
        let s = spec(
            SweepMode::VaryRating,
            vec![0.0, 0.2],
            vec![4.1, 4.3],
            Scaling::Off,
        );
        let report = differentiation_report(&s).unwrap();
        assert_eq!(report.n_pairs, 4);
        assert_eq!(report.n_distinct, 3);
        assert_eq!(
            report.collisions,
            [CollisionGroup {
                raw: Millis(3613),
                members: vec![gp(4300, 0), gp(4100, 200)],
            }]
        );
    }

    #[test]
    fn single_pair_report() {
        let s = spec(SweepMode::VaryRating, vec![0.5], vec![3.0], Scaling::Off);
        let report = differentiation_report(&s).unwrap();
        assert_eq!(
            (report.n_pairs, report.n_distinct, report.percent),
            (1, 1, 100.0)
        );
        assert_eq!(report.summary_line(), "1 pairs, 1 distinct, 100.0%");
        assert!(!report.diverges());
    }

    #[test]
    fn non_thousandths_grid_is_a_precision_error() {
        let [_, b, _, _] = default_panel_specs();
        assert!(matches!(
            differentiation_report(&b),
            Err(Error::Precision {
                what: "consensus",
                ..
            })
        ));
        assert!(differentiation_report_approx(&b, 0.0).is_ok());
    }

    #[test]
    fn approx_report_with_tolerance() {
        let s = spec(
            SweepMode::VaryRating,
            vec![0.0, 0.2],
            vec![4.1, 4.3],
            Scaling::Off,
        );
        let report = differentiation_report_approx(&s, 1e-9).unwrap();
        assert_eq!(report.n_distinct, 3);
        assert_eq!(report.collisions[0].raw, Millis(3613));
        assert!(differentiation_report_approx(&s, -1.0).is_err());
    }

    #[test]
    fn report_text_lists_groups() {
        let s = spec(
            SweepMode::VaryRating,
            vec![0.0, 0.2],
            vec![4.1, 4.3],
            Scaling::Off,
        );
        let text = differentiation_report(&s).unwrap().to_string();
        assert!(text.contains("4 pairs, 3 distinct, 75.0%"));
        assert!(text.contains("3.613: (4.3, 0.0) (4.1, 0.2)"));
    }

    #[test]
    fn csv_header_only_for_empty_rows() {
        let mut out = Vec::new();
        assert_eq!(emit_sweep_csv("A", &[], &mut out).unwrap(), 0);
        assert_eq!(
            String::from_utf8(out).unwrap(),
            format!("{SWEEP_CSV_HEADER}\n")
        );
    }

    #[test]
    fn csv_rows_have_blank_scaled_when_off() {
        let rows = run_sweep(&spec(
            SweepMode::VaryConsensus,
            vec![4.0],
            vec![1.0],
            Scaling::Off,
        ))
        .unwrap();
        let mut out = Vec::new();
        emit_sweep_csv("custom", &rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text.lines().nth(1),
            Some("custom,4.000,1.000,4.250,0.000,0.010,4.240,")
        );
    }
}
