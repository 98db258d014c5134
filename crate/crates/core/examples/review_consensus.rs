//! Aggregate a reviews file per item, then score each item.
//!
//! Also shows how to plug in a different consensus estimator.
//!
//! ```bash
//! cargo run -p contrip --example review_consensus
//! ```

use contrip::cli::reviews::parse_reviews;
use contrip::consensus::{aggregate_items, ConsensusEstimator, MadConsensus, Strictness};
use contrip::score::{compute, ConsensusValue, Scaling, Weights};

/// Agreement as closeness of the mean polarity to either extreme: all
/// reviews leaning the same way, positive or negative, counts as consensus.
struct PolarityStrength;

impl ConsensusEstimator for PolarityStrength {
    fn name(&self) -> &'static str {
        "polarity-strength"
    }

    fn estimate_validated(&self, polarities: &[f64]) -> ConsensusValue {
        let mean = polarities.iter().sum::<f64>() / polarities.len() as f64;
        ConsensusValue::new((2.0 * mean - 1.0).abs().min(1.0)).unwrap()
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = include_str!("data/reviews.csv");
    let parsed = parse_reviews(text, Strictness::Strict).map_err(|e| e.to_string())?;
    let weights = Weights::default();

    let estimators: [&dyn ConsensusEstimator; 2] = [&MadConsensus, &PolarityStrength];
    for estimator in estimators {
        println!("consensus estimator: {}", estimator.name());
        let aggregation = aggregate_items(parsed.records.clone(), Strictness::Strict, estimator)?;
        for item in aggregation.items {
            let b = compute(item.overall_rating, item.consensus, &weights, Scaling::On)?;
            println!(
                "  {:<14} n={} x={:.3} y={:.3}  raw {:.3}  scaled {:.3}",
                item.item_id,
                item.n_reviews,
                item.overall_rating.get(),
                item.consensus.get(),
                b.raw,
                b.scaled.unwrap()
            );
        }
    }
    Ok(())
}
