//! Per-item aggregation of review records into the two score inputs.
//!
//! The overall rating is the arithmetic mean of an item's star ratings. The
//! consensus comes from the sentiment polarities alone, through a
//! [`ConsensusEstimator`]. The bundled estimator is [`MadConsensus`],
//! `1 - 2 * MAD`, which is 1 at unanimity and 0 for an even split between
//! fully negative and fully positive reviews.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::score::{ConsensusValue, RatingValue, MAX_STARS, MIN_STARS};

/// One review: its star rating and the sentiment polarity of its text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReviewRecord {
    pub item_id: String,
    pub rating: f64,
    pub polarity: f64,
}

impl ReviewRecord {
    pub fn new(item_id: impl Into<String>, rating: f64, polarity: f64) -> Result<Self> {
        let record = Self {
            item_id: item_id.into(),
            rating,
            polarity,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        if self.item_id.is_empty() {
            return Err(Error::EmptyInput { what: "item_id" });
        }
        RatingValue::new(self.rating)?;
        if !self.polarity.is_finite() {
            return Err(Error::NonFinite {
                what: "polarity",
                value: self.polarity,
            });
        }
        if !(0.0..=1.0).contains(&self.polarity) {
            return Err(Error::OutOfDomain {
                what: "polarity",
                value: self.polarity,
                range: "[0, 1]",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemAggregate {
    pub item_id: String,
    pub n_reviews: usize,
    pub overall_rating: RatingValue,
    pub consensus: ConsensusValue,
}

fn check_elements(
    what: &'static str,
    values: &[f64],
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptyInput { what });
    }
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() || !(lo..=hi).contains(&value) {
            return Err(Error::ElementOutOfDomain {
                what,
                index,
                value,
                range,
            });
        }
    }
    Ok(())
}

/// Sum in ascending order so the result does not depend on input order.
fn ordered_mean(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.iter().sum::<f64>() / sorted.len() as f64
}

/// Arithmetic mean of star ratings.
pub fn aggregate_rating(ratings: &[f64]) -> Result<RatingValue> {
    check_elements("ratings", ratings, MIN_STARS, MAX_STARS, "[1, 5]")?;
    let first = ratings[0];
    if ratings.iter().all(|&r| r == first) {
        return RatingValue::new(first);
    }
    RatingValue::new(ordered_mean(ratings).clamp(MIN_STARS, MAX_STARS))
}

/// Strategy seam for turning polarities into a consensus value.
pub trait ConsensusEstimator {
    fn name(&self) -> &'static str;

    /// `polarities` is nonempty and every element lies in `[0, 1]`.
    fn estimate_validated(&self, polarities: &[f64]) -> ConsensusValue;

    fn estimate(&self, polarities: &[f64]) -> Result<ConsensusValue> {
        check_elements("polarities", polarities, 0.0, 1.0, "[0, 1]")?;
        Ok(self.estimate_validated(polarities))
    }
}

/// `y = 1 - 2 * MAD` with `MAD = mean(|p_i - mean(p)|)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MadConsensus;

/// Largest double strictly below one.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

impl ConsensusEstimator for MadConsensus {
    fn name(&self) -> &'static str {
        "mad"
    }

    fn estimate_validated(&self, polarities: &[f64]) -> ConsensusValue {
        let first = polarities[0];
        if polarities.iter().all(|&p| p == first) {
            return ConsensusValue::new(1.0).expect("1 is a valid consensus");
        }
        let mean = ordered_mean(polarities);
        let deviations: Vec<f64> = polarities.iter().map(|p| (p - mean).abs()).collect();
        let mad = ordered_mean(&deviations);
        // distinct inputs must never report perfect agreement
        let y = (1.0 - 2.0 * mad).clamp(0.0, BELOW_ONE);
        ConsensusValue::new(y).expect("clamped into [0, 1]")
    }
}

/// Named estimator selection, e.g. from configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConsensusStrategy {
    #[default]
    Mad,
}

impl ConsensusStrategy {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "mad" => Some(Self::Mad),
            _ => None,
        }
    }

    pub fn estimator(self) -> &'static dyn ConsensusEstimator {
        match self {
            Self::Mad => &MadConsensus,
        }
    }
}

/// Consensus with the default estimator.
pub fn estimate_consensus(polarities: &[f64]) -> Result<ConsensusValue> {
    MadConsensus.estimate(polarities)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    #[default]
    Strict,
    Lenient,
}

/// Result of grouping a record stream.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Aggregation {
    pub items: Vec<ItemAggregate>,
    /// Invalid records dropped in lenient mode, with their row numbers.
    pub skipped: Vec<(usize, String)>,
}

/// Groups records by item id, ordered by id bytes.
///
/// Rows are numbered from 1 in stream order. In strict mode the first
/// invalid record aborts; in lenient mode it is skipped and reported.
pub fn aggregate_items<I>(
    records: I,
    strictness: Strictness,
    estimator: &dyn ConsensusEstimator,
) -> Result<Aggregation>
where
    I: IntoIterator<Item = ReviewRecord>,
{
    let mut groups: BTreeMap<String, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    let mut skipped = Vec::new();
    for (i, record) in records.into_iter().enumerate() {
        let row = i + 1;
        if let Err(e) = record.validate() {
            match strictness {
                Strictness::Strict => {
                    return Err(Error::InvalidRecord {
                        row,
                        reason: e.to_string(),
                    })
                }
                Strictness::Lenient => {
                    skipped.push((row, e.to_string()));
                    continue;
                }
            }
        }
        let entry = groups.entry(record.item_id).or_default();
        entry.0.push(record.rating);
        entry.1.push(record.polarity);
    }

    let items = groups
        .into_iter()
        .map(|(item_id, (ratings, polarities))| {
            Ok(ItemAggregate {
                n_reviews: ratings.len(),
                overall_rating: aggregate_rating(&ratings)?,
                consensus: estimator.estimate(&polarities)?,
                item_id,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Aggregation { items, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    /// Textbook two-pass MAD, kept separate from the estimator.
    fn brute_force_consensus(values: &[f64]) -> f64 {
        let n = values.len() as f64;
        let mut mean = 0.0;
        for v in values {
            mean += v / n;
        }
        let mut mad = 0.0;
        for v in values {
            mad += (v - mean).abs() / n;
        }
        1.0 - 2.0 * mad
    }

    #[test]
    fn rating_means() {
        assert_eq!(aggregate_rating(&[4.0, 5.0, 3.0]).unwrap().get(), 4.0);
        assert_eq!(aggregate_rating(&[5.0]).unwrap().get(), 5.0);
        assert_eq!(aggregate_rating(&[1.0, 5.0, 5.0, 5.0]).unwrap().get(), 4.0);
    }

    #[test]
    fn rating_errors() {
        assert_eq!(
            aggregate_rating(&[]),
            Err(Error::EmptyInput { what: "ratings" })
        );
        assert!(matches!(
            aggregate_rating(&[4.0, 5.5]),
            Err(Error::ElementOutOfDomain { index: 1, .. })
        ));
        assert!(matches!(
            aggregate_rating(&[f64::NAN]),
            Err(Error::ElementOutOfDomain { index: 0, .. })
        ));
    }

    #[test]
    fn consensus_examples() {
        assert_eq!(estimate_consensus(&[0.7, 0.7, 0.7]).unwrap().get(), 1.0);
        assert_eq!(
            estimate_consensus(&[0.0, 0.0, 1.0, 1.0]).unwrap().get(),
            0.0
        );
        let y = estimate_consensus(&[0.2, 0.8]).unwrap().get();
        assert!(close(y, 0.4));
        assert!(close(y, brute_force_consensus(&[0.2, 0.8])));
    }

    #[test]
    fn single_review_is_total_agreement() {
        assert_eq!(estimate_consensus(&[0.13]).unwrap().get(), 1.0);
    }

    #[test]
    fn nearly_equal_polarities_stay_below_one() {
        let a = 0.3_f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let y = estimate_consensus(&[a, b]).unwrap().get();
        assert!(y < 1.0);
    }

    #[test]
    fn consensus_errors() {
        assert!(matches!(
            estimate_consensus(&[]),
            Err(Error::EmptyInput { .. })
        ));
        assert!(matches!(
            estimate_consensus(&[0.5, 1.3]),
            Err(Error::ElementOutOfDomain { index: 1, .. })
        ));
    }

    #[test]
    fn strategy_lookup() {
        assert_eq!(
            ConsensusStrategy::from_name("mad"),
            Some(ConsensusStrategy::Mad)
        );
        assert_eq!(ConsensusStrategy::from_name("centroid"), None);
        assert_eq!(ConsensusStrategy::Mad.estimator().name(), "mad");
    }

    fn rec(id: &str, rating: f64, polarity: f64) -> ReviewRecord {
        ReviewRecord {
            item_id: id.to_owned(),
            rating,
            polarity,
        }
    }

    #[test]
    fn groups_by_item() {
        let agg = aggregate_items(
            vec![rec("B", 5.0, 1.0), rec("A", 4.0, 0.2), rec("A", 4.0, 0.8)],
            Strictness::Strict,
            &MadConsensus,
        )
        .unwrap();
        assert_eq!(agg.items.len(), 2);
        let a = &agg.items[0];
        assert_eq!((a.item_id.as_str(), a.n_reviews), ("A", 2));
        assert_eq!(a.overall_rating.get(), 4.0);
        assert!(close(a.consensus.get(), 0.4));
        let b = &agg.items[1];
        assert_eq!(
            (
                b.item_id.as_str(),
                b.overall_rating.get(),
                b.consensus.get()
            ),
            ("B", 5.0, 1.0)
        );
    }

    #[test]
    fn equal_polarities_pair() {
        let agg = aggregate_items(
            vec![rec("A", 4.0, 0.9), rec("A", 5.0, 0.9)],
            Strictness::Strict,
            &MadConsensus,
        )
        .unwrap();
        let a = &agg.items[0];
        assert_eq!(
            (a.n_reviews, a.overall_rating.get(), a.consensus.get()),
            (2, 4.5, 1.0)
        );
    }

    #[test]
    fn empty_stream() {
        let agg = aggregate_items(Vec::new(), Strictness::Strict, &MadConsensus).unwrap();
        assert!(agg.items.is_empty());
    }

    #[test]
    fn strict_aborts_lenient_skips() {
        let records = vec![rec("A", 4.0, 0.5), rec("A", 4.0, 1.3), rec("", 3.0, 0.5)];
        let err = aggregate_items(records.clone(), Strictness::Strict, &MadConsensus).unwrap_err();
        assert!(matches!(err, Error::InvalidRecord { row: 2, .. }));

        let agg = aggregate_items(records, Strictness::Lenient, &MadConsensus).unwrap();
        assert_eq!(agg.items.len(), 1);
        assert_eq!(
            agg.skipped.iter().map(|s| s.0).collect::<Vec<_>>(),
            vec![2, 3]
        );
    }

    #[test]
    fn byte_order_of_ids() {
        let agg = aggregate_items(
            vec![rec("b", 3.0, 0.5), rec("B", 3.0, 0.5), rec("a", 3.0, 0.5)],
            Strictness::Strict,
            &MadConsensus,
        )
        .unwrap();
        let ids: Vec<_> = agg.items.iter().map(|i| i.item_id.as_str()).collect();
        assert_eq!(ids, ["B", "a", "b"]);
    }
}
