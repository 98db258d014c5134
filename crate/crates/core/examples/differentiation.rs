//! How many (rating, consensus) pairs get a score of their own.
//!
//! ```bash
//! cargo run -p contrip --example differentiation
//! ```

use contrip::experiments::{
    differentiation_report, differentiation_report_approx, differentiation_report_scaled, Panel,
};

fn main() -> contrip::Result<()> {
    let spec = Panel::A.spec();

    let exact = differentiation_report(&spec)?;
    print!("{exact}");

    // rescaling is strictly increasing, so the groups do not change
    let scaled = differentiation_report_scaled(&spec)?;
    println!("\nrescaled: {}", scaled.summary_line());

    // bit-level float equality instead of three decimals
    let float = differentiation_report_approx(&spec, 0.0)?;
    println!("float equality: {}", float.summary_line());

    // the 50-point consensus grid is not on a 0.001 step
    match differentiation_report(&Panel::B.spec()) {
        Ok(_) => unreachable!(),
        Err(e) => println!("\npanel B: {e}"),
    }
    let b = differentiation_report_approx(&Panel::B.spec(), 5e-4)?;
    println!("panel B within 5e-4: {}", b.summary_line());
    Ok(())
}
