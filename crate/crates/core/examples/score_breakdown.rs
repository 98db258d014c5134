//! Score a few (rating, consensus) pairs and print every term.
//!
//! ```bash
//! cargo run -p contrip --example score_breakdown
//! ```

use contrip::score::{compute, ConsensusValue, RatingValue, Scaling, Weights};

fn main() -> contrip::Result<()> {
    let weights = Weights::default();
    println!("    x     y   term1   term2   term3     raw  scaled");
    for (x, y) in [
        (4.0, 0.0),
        (4.0, 0.5),
        (4.0, 1.0),
        (5.0, 0.0),
        (2.0, 0.0),
        (5.0, 1.0),
    ] {
        let b = compute(
            RatingValue::new(x)?,
            ConsensusValue::new(y)?,
            &weights,
            Scaling::On,
        )?;
        println!(
            "{x:5.2} {y:5.2} {:7.3} {:7.3} {:7.3} {:7.3} {:7.3}",
            b.term1,
            b.term2,
            b.term3,
            b.raw,
            b.scaled.unwrap()
        );
    }

    // out-of-domain inputs are rejected, not clamped
    match RatingValue::new(6.0) {
        Ok(_) => unreachable!(),
        Err(e) => println!("\nrating 6.0: {e}"),
    }
    Ok(())
}
