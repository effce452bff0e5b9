//! Number carriers and the precision contract.
//!
//! - [`QuadraticSurd`]: exact `(P + √D)/Q`, used whenever the seed is a
//!   quadratic irrational.
//! - [`RigorousReal`]: dyadic interval with outward rounding, used for
//!   decimal seeds such as the π fixture.
//! - [`Real`]: either of the above (or a plain rational), with arithmetic
//!   that stays exact as long as it can.
//!
//! Floors are always *checked*: an enclosure that straddles an integer
//! yields [`Error::InsufficientPrecision`](crate::Error) instead of a guess.

mod dyadic;
mod interval;
mod precision;
mod real;
mod surd;

pub use dyadic::{Dyadic, Rounding};
pub use interval::RigorousReal;
pub use num_rational::BigRational;
pub use precision::PrecisionContext;
pub use real::Real;
pub use surd::QuadraticSurd;

use num_bigint::BigInt;

use crate::error::Result;

/// `⌊x⌋`, exact for surds and rationals, certified for enclosures.
pub fn floor_checked(x: &Real) -> Result<BigInt> {
    x.floor_checked()
}

/// `1/x − a` computed exactly.
pub fn surd_recip_shift(x: &QuadraticSurd, a: &BigInt) -> QuadraticSurd {
    x.recip_shift(a)
}
