//! Cochains with symmetric-group and F2 coefficients on measured polygonal
//! 2-complexes.
//!
//! The crate covers the coboundary calculus (`cochain`), the dictionary
//! between 1-cochains and covers of the 1-skeleton (`covering`), exact and
//! certified Cheeger constants and cosystoles (`cheeger`), spectral bounds on
//! links (`spectral`) and constructive correction of near-cocycles
//! (`correction`). Generators for the complexes used throughout live in
//! `complex`.
//!
//! Exact searches work with integer cell weights and return [`Rational`]
//! values; every search with a size limit fails with
//! [`Error::SizeGuard`] instead of running unbounded.

pub mod cheeger;
pub mod cochain;
pub mod complex;
pub mod correction;
pub mod covering;
pub mod error;
pub mod perm;
pub mod report;
pub mod spectral;

mod f2;
mod search;

pub use error::{Error, Result};
pub use perm::Permutation;

/// Exact rational numbers used for every reported exact value.
pub type Rational = num_rational::Ratio<i128>;

/// Candidate-count limit for exact searches.
pub const EXACT_LIMIT: f64 = 1e7;

/// Converts an exact value to the nearest float.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
