//! Consensus-fused review scores.
//!
//! An item's overall star rating `x` in `[1, 5]` and the agreement `y` in
//! `[0, 1]` among its reviews are fused into one score on the star scale:
//!
//! ```
//! use contrip::score::{compute, ConsensusValue, RatingValue, Scaling, Weights};
//!
//! let x = RatingValue::new(4.0)?;
//! let y = ConsensusValue::new(1.0)?;
//! let b = compute(x, y, &Weights::default(), Scaling::Off)?;
//! assert!((b.raw - 4.24).abs() < 1e-12);
//! # Ok::<(), contrip::Error>(())
//! ```
//!
//! Modules:
//!
//! - [`score`]: floating evaluation, min-max rescaling
//! - [`exact`]: thousandths/rational evaluation for equality-sensitive work
//! - [`consensus`]: review records to `(x, y)` per item
//! - [`experiments`]: sweeps, standard panels, differentiation reports
//! - [`cli`]: the `contrip` command line and its file formats

pub mod cli;
pub mod consensus;
mod error;
pub mod exact;
pub mod experiments;
pub mod score;

pub use error::{Error, Result};
