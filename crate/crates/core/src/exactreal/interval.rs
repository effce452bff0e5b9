//! Closed intervals with dyadic endpoints and outward rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};

/// A rigorous enclosure `[lower, upper]` of a real number.
///
/// Every operation rounds its lower endpoint toward −∞ and its upper endpoint
/// toward +∞ at the working precision, so the exact result of the same
/// operation on any points of the operands lies inside the output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigorousReal {
    lower: Dyadic,
    upper: Dyadic,
    precision: u32,
}

impl RigorousReal {
    pub fn new(lower: Dyadic, upper: Dyadic, precision: u32) -> Self {
        assert!(lower <= upper, "interval endpoints out of order");
        RigorousReal {
            lower: lower.round(precision, Rounding::Floor),
            upper: upper.round(precision, Rounding::Ceil),
            precision,
        }
    }

    pub fn point(x: Dyadic, precision: u32) -> Self {
        Self::new(x.clone(), x, precision)
    }

    pub fn from_int(n: impl Into<BigInt>, precision: u32) -> Self {
        Self::point(Dyadic::from_int(n), precision)
    }

    pub fn from_rational(q: &BigRational, precision: u32) -> Self {
        Self::from_rational_bounds(q, q, precision)
    }

    pub fn from_rational_bounds(lo: &BigRational, hi: &BigRational, precision: u32) -> Self {
        RigorousReal {
            lower: Dyadic::from_rational(lo, precision, Rounding::Floor),
            upper: Dyadic::from_rational(hi, precision, Rounding::Ceil),
            precision,
        }
    }

    pub fn lower(&self) -> &Dyadic {
        &self.lower
    }

    pub fn upper(&self) -> &Dyadic {
        &self.upper
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Re-rounds to a (usually smaller) precision; never tightens.
    pub fn with_precision(&self, precision: u32) -> Self {
        Self::new(self.lower.clone(), self.upper.clone(), precision)
    }

    pub fn width(&self) -> Dyadic {
        &self.upper - &self.lower
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lower.to_f64() + self.upper.to_f64()) / 2.0
    }

    pub fn contains_zero(&self) -> bool {
        self.lower.signum() != Ordering::Greater && self.upper.signum() != Ordering::Less
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lower.to_rational() <= q && q <= &self.upper.to_rational()
    }

    pub fn overlaps(&self, other: &RigorousReal) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }

    pub fn intersect(&self, other: &RigorousReal) -> Option<RigorousReal> {
        if !self.overlaps(other) {
            return None;
        }
        Some(RigorousReal {
            lower: self.lower.clone().max(other.lower.clone()),
            upper: self.upper.clone().min(other.upper.clone()),
            precision: self.precision.max(other.precision),
        })
    }

    /// Certified sign: `Some` only when the whole interval has one sign.
    pub fn signum(&self) -> Option<Ordering> {
        if self.lower.signum() == Ordering::Greater {
            Some(Ordering::Greater)
        } else if self.upper.signum() == Ordering::Less {
            Some(Ordering::Less)
        } else if self.lower.is_zero() && self.upper.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified comparison; `None` when the enclosures overlap (and are not
    /// the same point).
    pub fn cmp_certified(&self, other: &RigorousReal) -> Option<Ordering> {
        if self.upper < other.lower {
            Some(Ordering::Less)
        } else if self.lower > other.upper {
            Some(Ordering::Greater)
        } else if self.lower == self.upper
            && other.lower == other.upper
            && self.lower == other.lower
        {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    fn bits(&self, other: &RigorousReal) -> u32 {
        self.precision.max(other.precision)
    }

    /// Interval quotient; the divisor must exclude zero.
    pub fn checked_div(&self, rhs: &RigorousReal) -> Result<RigorousReal> {
        if rhs.signum().is_none_or(|s| s == Ordering::Equal) {
            return Err(Error::Domain(
                "division by an enclosure that may contain zero".into(),
            ));
        }
        let prec = self.bits(rhs);
        let corners = [
            (&self.lower, &rhs.lower),
            (&self.lower, &rhs.upper),
            (&self.upper, &rhs.lower),
            (&self.upper, &rhs.upper),
        ];
        let lower = corners
            .iter()
            .map(|(a, b)| a.div_rounded(b, prec, Rounding::Floor))
            .min()
            .expect("four corners");
        let upper = corners
            .iter()
            .map(|(a, b)| a.div_rounded(b, prec, Rounding::Ceil))
            .max()
            .expect("four corners");
        Ok(RigorousReal {
            lower,
            upper,
            precision: prec,
        })
    }

    pub fn recip(&self) -> Result<RigorousReal> {
        RigorousReal::from_int(1, self.precision).checked_div(self)
    }

    /// Square root; the enclosure must be certified non-negative.
    pub fn sqrt(&self) -> Result<RigorousReal> {
        if self.lower.signum() == Ordering::Less {
            return Err(Error::Domain(
                "square root of an enclosure that may be negative".into(),
            ));
        }
        Ok(RigorousReal {
            lower: self.lower.sqrt_rounded(self.precision, Rounding::Floor),
            upper: self.upper.sqrt_rounded(self.precision, Rounding::Ceil),
            precision: self.precision,
        })
    }

    pub fn abs(&self) -> RigorousReal {
        match self.signum() {
            Some(Ordering::Less) => -self,
            Some(_) => self.clone(),
            None => RigorousReal {
                lower: Dyadic::zero(),
                upper: self.upper.clone().max(self.lower.abs()),
                precision: self.precision,
            },
        }
    }

    /// `⌊x⌋`, returned only when both endpoints share the same floor.
    pub fn floor_checked(&self) -> Result<BigInt> {
        let lo = self.lower.floor();
        if lo == self.upper.floor() {
            Ok(lo)
        } else {
            Err(Error::InsufficientPrecision {
                bits: self.precision,
            })
        }
    }

    /// `⌈x⌉`, returned only when both endpoints share the same ceiling.
    pub fn ceil_checked(&self) -> Result<BigInt> {
        let lo = self.lower.ceil();
        if lo == self.upper.ceil() {
            Ok(lo)
        } else {
            Err(Error::InsufficientPrecision {
                bits: self.precision,
            })
        }
    }

    /// Outward-rounded decimal bounds with `digits` fractional digits.
    pub fn decimal_bounds(&self, digits: usize) -> (String, String) {
        (
            self.lower.to_decimal(digits, Rounding::Floor),
            self.upper.to_decimal(digits, Rounding::Ceil),
        )
    }
}

impl Add for &RigorousReal {
    type Output = RigorousReal;
    fn add(self, rhs: &RigorousReal) -> RigorousReal {
        RigorousReal::new(&self.lower + &rhs.lower, &self.upper + &rhs.upper, self.bits(rhs))
    }
}

impl Sub for &RigorousReal {
    type Output = RigorousReal;
    fn sub(self, rhs: &RigorousReal) -> RigorousReal {
        RigorousReal::new(&self.lower - &rhs.upper, &self.upper - &rhs.lower, self.bits(rhs))
    }
}

impl Mul for &RigorousReal {
    type Output = RigorousReal;
    fn mul(self, rhs: &RigorousReal) -> RigorousReal {
        let products = [
            &self.lower * &rhs.lower,
            &self.lower * &rhs.upper,
            &self.upper * &rhs.lower,
            &self.upper * &rhs.upper,
        ];
        let lower = products.iter().min().expect("four products").clone();
        let upper = products.iter().max().expect("four products").clone();
        RigorousReal::new(lower, upper, self.bits(rhs))
    }
}

impl Neg for &RigorousReal {
    type Output = RigorousReal;
    fn neg(self) -> RigorousReal {
        RigorousReal {
            lower: -&self.upper,
            upper: -&self.lower,
            precision: self.precision,
        }
    }
}

impl fmt::Display for RigorousReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12);
        let (lo, hi) = self.decimal_bounds(digits);
        write!(f, "[{lo}, {hi}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn iv(lo: f64, hi: f64) -> RigorousReal {
        let l = BigRational::from_float(lo).unwrap();
        let h = BigRational::from_float(hi).unwrap();
        RigorousReal::from_rational_bounds(&l, &h, 128)
    }

    #[test]
    fn point_addition_is_exact() {
        let s = &RigorousReal::from_int(1, 64) + &RigorousReal::from_int(2, 64);
        assert_eq!(s, RigorousReal::from_int(3, 64));
    }

    #[test]
    fn sqrt_of_four_is_two() {
        let r = RigorousReal::from_int(4, 64).sqrt().unwrap();
        assert_eq!(r, RigorousReal::from_int(2, 64));
    }

    #[test]
    fn sqrt_encloses_radicand_from_synthetic_pair() {
        // 1 - 4 * 0.2 * 0.2 = 0.84
        let u = RigorousReal::from_rational(&rat(1, 5), 128);
        let four = RigorousReal::from_int(4, 128);
        let one = RigorousReal::from_int(1, 128);
        let rad = &one - &(&four * &(&u * &u));
        let s = rad.sqrt().unwrap();
        // sqrt(0.84) = 0.916515138991168001...
        let (lo, hi) = s.decimal_bounds(16);
        assert_eq!(lo, "0.9165151389911680");
        assert_eq!(hi, "0.9165151389911681");
        assert!(s.width().to_f64() < 1e-35);
    }

    #[test]
    fn floor_straddle_is_reported() {
        let x = iv(2.9999, 3.0001);
        assert!(matches!(
            x.floor_checked(),
            Err(Error::InsufficientPrecision { .. })
        ));
        assert_eq!(iv(3.1, 3.2).floor_checked().unwrap(), BigInt::from(3));
    }

    #[test]
    fn division_rejects_zero_straddle() {
        let x = RigorousReal::from_int(1, 64);
        assert!(matches!(x.checked_div(&iv(-0.5, 0.5)), Err(Error::Domain(_))));
        assert!(matches!(iv(-1.0, -0.5).sqrt(), Err(Error::Domain(_))));
    }

    #[test]
    fn certified_comparison() {
        assert_eq!(iv(0.1, 0.2).cmp_certified(&iv(0.3, 0.4)), Some(Ordering::Less));
        assert_eq!(iv(0.1, 0.35).cmp_certified(&iv(0.3, 0.4)), None);
    }
}
