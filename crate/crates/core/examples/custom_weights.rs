//! How the weights move the raw minimum and therefore the rescaling range.
//!
//! ```bash
//! cargo run -p contrip --example custom_weights
//! ```

use contrip::score::{
    analytic_min, compute, ConsensusValue, RatingValue, ScaleRange, Scaling, Weights,
};

fn main() -> contrip::Result<()> {
    let settings = [
        ("default", Weights::default()),
        ("no consensus shift", Weights::new(0.0, 10.0, 100.0)?),
        ("strong shift", Weights::new(1.0, 10.0, 100.0)?),
        ("harsh disagreement", Weights::new(0.5, 0.5, 100.0)?),
    ];
    let (x, y) = (RatingValue::new(4.0)?, ConsensusValue::new(0.3)?);

    for (name, w) in settings {
        let min = analytic_min(&w);
        let range = ScaleRange::for_weights(&w)?;
        let b = compute(x, y, &w, Scaling::On)?;
        println!(
            "{name:<20} alpha={:<4} beta={:<4} delta={:<5} min={:>7.3} ({:?})  range=[{:.3}, {:.3}]  \
             score(4, 0.3): raw {:.3} scaled {:.3}",
            w.alpha(),
            w.beta(),
            w.delta(),
            min.value,
            min.method,
            range.r_min(),
            range.r_max(),
            b.raw,
            b.scaled.unwrap(),
        );
    }
    Ok(())
}
