use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::interval::RigorousReal;
use super::surd::{Exact, QuadElem, QuadraticSurd};
use crate::error::{Error, Result};

/// A real number carried either exactly or as a rigorous enclosure.
///
/// Arithmetic stays exact while both operands live in ℚ or in one quadratic
/// field `ℚ(√d)`; anything else falls back to intervals at the larger of the
/// requested precision and the operands' own precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Real {
    Rational(BigRational),
    Surd(QuadraticSurd),
    Interval(RigorousReal),
}

enum Lifted {
    Rat(BigRational, BigRational),
    Quad(QuadElem, QuadElem),
    Intv(RigorousReal, RigorousReal),
}

impl From<Exact> for Real {
    fn from(e: Exact) -> Self {
        match e {
            Exact::Rational(q) => Real::Rational(q),
            Exact::Surd(s) => Real::Surd(s),
        }
    }
}

impl From<QuadraticSurd> for Real {
    fn from(s: QuadraticSurd) -> Self {
        Real::Surd(s)
    }
}

impl From<RigorousReal> for Real {
    fn from(r: RigorousReal) -> Self {
        Real::Interval(r)
    }
}

impl From<BigRational> for Real {
    fn from(q: BigRational) -> Self {
        Real::Rational(q)
    }
}

fn lift(x: &Real, y: &Real, prec: u32) -> Lifted {
    use Real::*;
    match (x, y) {
        (Rational(a), Rational(b)) => Lifted::Rat(a.clone(), b.clone()),
        (Surd(s), Rational(b)) => Lifted::Quad(s.elem(), QuadElem::from_rational(b, s.kernel())),
        (Rational(a), Surd(s)) => Lifted::Quad(QuadElem::from_rational(a, s.kernel()), s.elem()),
        (Surd(s), Surd(t)) if s.kernel() == t.kernel() => Lifted::Quad(s.elem(), t.elem()),
        _ => {
            let p = prec.max(x.precision()).max(y.precision());
            Lifted::Intv(x.enclosure(p), y.enclosure(p))
        }
    }
}

impl Real {
    pub fn from_int(n: impl Into<BigInt>) -> Real {
        Real::Rational(BigRational::from_integer(n.into()))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Real::Interval(_))
    }

    /// Working precision of an interval, 0 for exact values.
    pub fn precision(&self) -> u32 {
        match self {
            Real::Interval(r) => r.precision(),
            _ => 0,
        }
    }

    pub fn as_surd(&self) -> Option<&QuadraticSurd> {
        match self {
            Real::Surd(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Real::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Enclosure at `prec` bits; intervals are returned as they are.
    pub fn enclosure(&self, prec: u32) -> RigorousReal {
        match self {
            Real::Rational(q) => RigorousReal::from_rational(q, prec),
            Real::Surd(s) => s.enclosure(prec),
            Real::Interval(r) => r.clone(),
        }
    }

    pub fn add(&self, rhs: &Real, prec: u32) -> Real {
        match lift(self, rhs, prec) {
            Lifted::Rat(a, b) => Real::Rational(a + b),
            Lifted::Quad(a, b) => a.add(&b).into_exact().into(),
            Lifted::Intv(a, b) => Real::Interval(&a + &b),
        }
    }

    pub fn sub(&self, rhs: &Real, prec: u32) -> Real {
        match lift(self, rhs, prec) {
            Lifted::Rat(a, b) => Real::Rational(a - b),
            Lifted::Quad(a, b) => a.sub(&b).into_exact().into(),
            Lifted::Intv(a, b) => Real::Interval(&a - &b),
        }
    }

    pub fn mul(&self, rhs: &Real, prec: u32) -> Real {
        match lift(self, rhs, prec) {
            Lifted::Rat(a, b) => Real::Rational(a * b),
            Lifted::Quad(a, b) => a.mul(&b).into_exact().into(),
            Lifted::Intv(a, b) => Real::Interval(&a * &b),
        }
    }

    pub fn div(&self, rhs: &Real, prec: u32) -> Result<Real> {
        match lift(self, rhs, prec) {
            Lifted::Rat(a, b) => {
                if b.is_zero() {
                    Err(Error::Domain("division by zero".into()))
                } else {
                    Ok(Real::Rational(a / b))
                }
            }
            Lifted::Quad(a, b) => Ok(a.div(&b)?.into_exact().into()),
            Lifted::Intv(a, b) => Ok(Real::Interval(a.checked_div(&b)?)),
        }
    }

    pub fn recip(&self, prec: u32) -> Result<Real> {
        Real::from_int(1).div(self, prec)
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Rational(q) => Real::Rational(-q),
            Real::Surd(s) => s.elem().neg().into_exact().into(),
            Real::Interval(r) => Real::Interval(-r),
        }
    }

    pub fn abs(&self) -> Real {
        match self {
            Real::Interval(r) => Real::Interval(r.abs()),
            exact if exact.signum() == Some(Ordering::Less) => exact.neg(),
            exact => exact.clone(),
        }
    }

    /// Principal square root. Exact when the root lies in the same field,
    /// otherwise an enclosure at `prec` bits.
    pub fn sqrt(&self, prec: u32) -> Result<Real> {
        match self.signum() {
            Some(Ordering::Less) => {
                return Err(Error::Domain("square root of a negative number".into()))
            }
            None => {
                return Err(Error::Domain(
                    "square root of an enclosure that may be negative".into(),
                ))
            }
            _ => {}
        }
        match self {
            Real::Rational(q) => match QuadraticSurd::sqrt_of_rational(q) {
                Some(e) => Ok(e.into()),
                None if q.is_zero() => Ok(self.clone()),
                None => Ok(Real::Interval(RigorousReal::from_rational(q, prec).sqrt()?)),
            },
            Real::Surd(s) => match s.elem().sqrt() {
                Some(r) => Ok(r.into_exact().into()),
                None => Ok(Real::Interval(s.enclosure(prec).sqrt()?)),
            },
            Real::Interval(r) => Ok(Real::Interval(r.sqrt()?)),
        }
    }

    /// Certified sign; always `Some` for exact values.
    pub fn signum(&self) -> Option<Ordering> {
        match self {
            Real::Rational(q) => Some(q.numer().sign_ordering()),
            Real::Surd(s) => Some(s.signum()),
            Real::Interval(r) => r.signum(),
        }
    }

    /// Certified comparison at a single precision; `None` if undecided.
    pub fn cmp_certified(&self, rhs: &Real, prec: u32) -> Option<Ordering> {
        self.sub(rhs, prec).signum()
    }

    pub fn floor_checked(&self) -> Result<BigInt> {
        match self {
            Real::Rational(q) => Ok(q.numer().div_floor(q.denom())),
            Real::Surd(s) => Ok(s.floor()),
            Real::Interval(r) => r.floor_checked(),
        }
    }

    pub fn ceil_checked(&self) -> Result<BigInt> {
        match self {
            Real::Rational(q) => Ok(-(-q.numer()).div_floor(q.denom())),
            Real::Surd(s) => Ok(s.ceil()),
            Real::Interval(r) => r.ceil_checked(),
        }
    }

    /// Approximate value for display.
    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            Real::Surd(s) => s.to_f64(),
            Real::Interval(r) => r.midpoint_f64(),
        }
    }

    /// Outward-rounded decimal bounds; exact values are enclosed at a
    /// precision sufficient for `digits` decimals.
    pub fn decimal_bounds(&self, digits: usize) -> (String, String) {
        let prec = (digits as f64 * std::f64::consts::LOG2_10) as u32 + 64;
        self.enclosure(prec).decimal_bounds(digits)
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        if self.is_negative() {
            Ordering::Less
        } else if self.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Rational(q) => write!(f, "{q}"),
            Real::Surd(s) => write!(f, "{s}"),
            Real::Interval(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surd(p: i64, d: i64, q: i64) -> Real {
        Real::Surd(QuadraticSurd::new(p, d, q).unwrap())
    }

    #[test]
    fn exact_arithmetic_cancels_to_rational() {
        let g = surd(-1, 5, 2);
        let phi = surd(1, 5, 2);
        assert_eq!(phi.sub(&g, 64), Real::from_int(1));
        assert_eq!(phi.mul(&g, 64), Real::from_int(1));
    }

    #[test]
    fn field_square_root_stays_exact() {
        let fifth = Real::Rational(BigRational::new(1.into(), 5.into()));
        let r = fifth.sqrt(64).unwrap();
        assert_eq!(r, surd(0, 5, 5));
        // √(3 + 2√2) = 1 + √2
        let x = surd(3, 8, 1);
        assert_eq!(x.sqrt(64).unwrap(), surd(1, 2, 1));
    }

    #[test]
    fn mixed_fields_fall_back_to_intervals() {
        let a = surd(0, 2, 1);
        let b = surd(0, 3, 1);
        let s = a.add(&b, 96);
        assert!(!s.is_exact());
        assert!((s.to_f64() - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-14);
        assert_eq!(s.cmp_certified(&Real::from_int(3), 96), Some(Ordering::Greater));
    }

    #[test]
    fn floor_and_ceil_of_exact_integers() {
        let three = Real::from_int(3);
        assert_eq!(three.floor_checked().unwrap(), BigInt::from(3));
        assert_eq!(three.ceil_checked().unwrap(), BigInt::from(3));
        let x = Real::Rational(BigRational::new((-7).into(), 2.into()));
        assert_eq!(x.floor_checked().unwrap(), BigInt::from(-4));
        assert_eq!(x.ceil_checked().unwrap(), BigInt::from(-3));
    }

    #[test]
    fn negative_square_root_is_domain_error() {
        assert!(matches!(Real::from_int(-2).sqrt(64), Err(Error::Domain(_))));
    }
}
