//! Exact binary rationals `mantissa * 2^exponent`.
//!
//! These are the interval endpoints. Sums, differences and products are
//! exact; division, square root and conversion from general rationals take
//! an explicit [`Rounding`] direction so callers can round outward.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Direction for inexact operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
}

/// A finite binary rational. The mantissa is odd unless the value is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

/// `floor(m / 2^k)` for any sign of `m`.
fn shr_floor(m: &BigInt, k: u64) -> BigInt {
    if m.sign() != Sign::Minus {
        m >> k
    } else {
        let t: BigInt = (-m - 1u32) >> k;
        -t - 1u32
    }
}

fn shr_ceil(m: &BigInt, k: u64) -> BigInt {
    -shr_floor(&-m, k)
}

fn div_round(n: &BigInt, d: &BigInt, mode: Rounding) -> BigInt {
    match mode {
        Rounding::Floor => n.div_floor(d),
        Rounding::Ceil => -(-n).div_floor(d),
    }
}

pub(crate) fn bit_len(m: &BigInt) -> u64 {
    m.magnitude().bits()
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic {
            mantissa: mantissa >> tz,
            exponent: exponent + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        match self.mantissa.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        bit_len(&self.mantissa)
    }

    /// Position of the most significant bit, i.e. `floor(log2 |x|)` for `x != 0`.
    pub fn magnitude_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exponent + self.bits() as i64 - 1)
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Rounds to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, mode: Rounding) -> Self {
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = bits - prec as u64;
        let m = match mode {
            Rounding::Floor => shr_floor(&self.mantissa, k),
            Rounding::Ceil => shr_ceil(&self.mantissa, k),
        };
        Dyadic::new(m, self.exponent + k as i64)
    }

    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            shr_floor(&self.mantissa, self.exponent.unsigned_abs())
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            shr_ceil(&self.mantissa, self.exponent.unsigned_abs())
        }
    }

    /// `self / rhs` rounded to `prec` bits. `rhs` must be nonzero.
    pub fn div_rounded(&self, rhs: &Dyadic, prec: u32, mode: Rounding) -> Dyadic {
        assert!(!rhs.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift = (prec as i64 + rhs.bits() as i64 - self.bits() as i64 + 2).max(0) as u64;
        let q = div_round(&(&self.mantissa << shift), &rhs.mantissa, mode);
        Dyadic::new(q, self.exponent - rhs.exponent - shift as i64).round(prec, mode)
    }

    /// Square root rounded to `prec` bits. Panics on negative input.
    pub fn sqrt_rounded(&self, prec: u32, mode: Rounding) -> Dyadic {
        assert!(self.signum() != Ordering::Less, "square root of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = 2 * prec as u64 + 2;
        let mut shift = want.saturating_sub(self.bits());
        if (self.exponent - shift as i64).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mantissa << shift;
        let mut r = m.sqrt();
        if mode == Rounding::Ceil && &r * &r != m {
            r += 1u32;
        }
        Dyadic::new(r, (self.exponent - shift as i64) / 2).round(prec, mode)
    }

    /// Rounds an exact rational to `prec` bits.
    pub fn from_rational(q: &BigRational, prec: u32, mode: Rounding) -> Dyadic {
        let (n, d) = (q.numer(), q.denom());
        if n.is_zero() {
            return Dyadic::zero();
        }
        let shift = (prec as i64 + bit_len(d) as i64 - bit_len(n) as i64 + 2).max(0) as u64;
        let m = div_round(&(n << shift), d, mode);
        Dyadic::new(m, -(shift as i64)).round(prec, mode)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(
                self.mantissa.clone(),
                BigInt::one() << self.exponent.unsigned_abs(),
            )
        }
    }

    /// Nearest-ish `f64`; for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let top = self.round(60, Rounding::Floor);
        let m = top.mantissa.to_f64().unwrap_or(f64::NAN);
        let e = top.exponent.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
        m * 2f64.powi(e)
    }

    /// Decimal string with exactly `digits` fractional digits, rounded in `mode`.
    pub fn to_decimal(&self, digits: usize, mode: Rounding) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = self.to_rational() * BigRational::from_integer(scale);
        let n = match mode {
            Rounding::Floor => scaled.floor().to_integer(),
            Rounding::Ceil => scaled.ceil().to_integer(),
        };
        format_scaled(&n, digits)
    }
}

/// Formats `n / 10^digits` as a plain decimal string.
pub(crate) fn format_scaled(n: &BigInt, digits: usize) -> String {
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let body = if digits == 0 {
        s
    } else if s.len() <= digits {
        format!("0.{}{}", "0".repeat(digits - s.len()), s)
    } else {
        let (int, frac) = s.split_at(s.len() - digits);
        format!("{int}.{frac}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
    let e = a.exponent.min(b.exponent);
    (
        &a.mantissa << (a.exponent - e) as u64,
        &b.mantissa << (b.exponent - e) as u64,
        e,
    )
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, e) = align(self, rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b, e) = align(self, rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}
