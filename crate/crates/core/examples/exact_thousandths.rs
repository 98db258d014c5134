//! The exact path: decimal inputs in thousandths, rational terms, and
//! half-away-from-zero display rounding.
//!
//! ```bash
//! cargo run -p contrip --example exact_thousandths
//! ```

use contrip::exact::{compute_exact, exact_millis, ExactWeights, Millis};
use contrip::score::{compute_raw_checked, Weights};

fn main() -> contrip::Result<()> {
    let w = ExactWeights::default();

    // on the 0.1 x 0.2 grid every term is a whole number of thousandths
    for (x, y) in [
        ("4.3", "0.0"),
        ("4.1", "0.2"),
        ("4.9", "0.8"),
        ("5.0", "0.8"),
    ] {
        let b = compute_exact(x.parse()?, y.parse()?, &w, true)?;
        let terms = b.terms_in_millis().expect("whole thousandths");
        println!(
            "x={x} y={y}: term1 {} term2 {} term3 {} raw {}  scaled {}",
            terms[0],
            terms[1],
            terms[2],
            terms[3],
            b.rounded().scaled.unwrap()
        );
    }

    // off that grid the raw value needs rounding; floats may not agree on ties
    let b = compute_exact(Millis(4321), Millis(123), &w, false)?;
    let float = compute_raw_checked(4.321, 0.123, &Weights::default())?.raw;
    println!(
        "\nx=4.321 y=0.123: exact raw {}/{} (whole thousandths: {:?}), rounded {}, float {float:.12}",
        b.raw.numer(),
        b.raw.denom(),
        exact_millis(&b.raw),
        b.rounded().raw,
    );
    Ok(())
}
