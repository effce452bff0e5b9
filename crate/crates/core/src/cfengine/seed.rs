use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactreal::{QuadraticSurd, Real, RigorousReal};

/// The initial value `x₀ ∈ (0,1)` of an expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Seed {
    /// An exact quadratic irrational.
    Surd(QuadraticSurd),
    /// A number known only through a decimal literal.
    Decimal(DecimalSeed),
}

/// A decimal literal `0.d₁d₂…d_k`, read as the exact rational `L` and
/// widened to the enclosure `[L − 10^−k, L + 10^−k]`, which covers both
/// truncated and rounded literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalSeed {
    literal: String,
    center: BigRational,
    radius: BigRational,
    fraction_digits: usize,
}

impl DecimalSeed {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let frac = t
            .strip_prefix("0.")
            .or_else(|| t.strip_prefix('.'))
            .ok_or_else(|| Error::Parse(format!("expected a literal of the form 0.ddd…, got {t:?}")))?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("malformed decimal literal {t:?}")));
        }
        let k = frac.len();
        let scale = BigInt::from(10u32).pow(k as u32);
        let numer: BigInt = frac.parse().map_err(|_| Error::Parse(t.to_string()))?;
        let center = BigRational::new(numer, scale.clone());
        let radius = BigRational::new(BigInt::one(), scale);
        let seed = DecimalSeed {
            literal: format!("0.{frac}"),
            center,
            radius,
            fraction_digits: k,
        };
        let lo = &seed.center - &seed.radius;
        let hi = &seed.center + &seed.radius;
        if lo <= BigRational::zero() || hi >= BigRational::one() {
            return Err(Error::Domain(format!(
                "decimal seed {t} is not certainly inside (0, 1)"
            )));
        }
        Ok(seed)
    }

    pub fn literal(&self) -> &str {
        &self.literal
    }

    pub fn center(&self) -> &BigRational {
        &self.center
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    pub fn fraction_digits(&self) -> usize {
        self.fraction_digits
    }

    /// Digits after the leading zeros of the fractional part.
    pub fn significant_digits(&self) -> usize {
        let frac = &self.literal[2..];
        frac.trim_start_matches('0').len()
    }

    /// `⌊log₂(1/radius)⌋`: bits of information the literal carries.
    pub fn info_bits(&self) -> u64 {
        (self.fraction_digits as f64 * std::f64::consts::LOG2_10).floor() as u64
    }

    pub fn enclosure(&self, prec: u32) -> RigorousReal {
        RigorousReal::from_rational_bounds(
            &(&self.center - &self.radius),
            &(&self.center + &self.radius),
            prec,
        )
    }
}

impl Seed {
    /// Wraps a surd after checking `0 < x < 1`.
    pub fn surd(x: QuadraticSurd) -> Result<Self> {
        let one = Real::from_int(1);
        let v = Real::Surd(x.clone());
        let positive = v.signum() == Some(Ordering::Greater);
        let below_one = v.cmp_certified(&one, 64) == Some(Ordering::Less);
        if !(positive && below_one) {
            return Err(Error::Domain(format!("seed {x} is not in (0, 1)")));
        }
        Ok(Seed::Surd(x))
    }

    pub fn decimal(text: &str) -> Result<Self> {
        DecimalSeed::parse(text).map(Seed::Decimal)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Seed::Surd(_))
    }

    pub fn as_surd(&self) -> Option<&QuadraticSurd> {
        match self {
            Seed::Surd(s) => Some(s),
            Seed::Decimal(_) => None,
        }
    }

    pub fn enclosure(&self, prec: u32) -> RigorousReal {
        match self {
            Seed::Surd(s) => s.enclosure(prec),
            Seed::Decimal(d) => d.enclosure(prec),
        }
    }

    /// `x₀` as the carrier used by the engine: exact for surds.
    pub fn value(&self, prec: u32) -> Real {
        match self {
            Seed::Surd(s) => Real::Surd(s.clone()),
            Seed::Decimal(d) => Real::Interval(d.enclosure(prec)),
        }
    }

    /// Bits of information in the seed; `None` for exact seeds.
    pub fn info_bits(&self) -> Option<u64> {
        match self {
            Seed::Surd(_) => None,
            Seed::Decimal(d) => Some(d.info_bits()),
        }
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seed::Surd(s) => write!(f, "{s}"),
            Seed::Decimal(d) if d.literal.len() > 24 => {
                write!(f, "{}… ({} digits)", &d.literal[..22], d.fraction_digits)
            }
            Seed::Decimal(d) => write!(f, "{}", d.literal),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_enclosure_brackets_literal() {
        let s = DecimalSeed::parse("0.14159265358979323846264338327950288").unwrap();
        assert_eq!(s.significant_digits(), 35);
        let e = s.enclosure(256);
        assert!(e.contains_rational(s.center()));
        assert!(e.width().to_f64() < 3e-35);
    }

    #[test]
    fn decimal_rejects_out_of_range_and_garbage() {
        assert!(matches!(DecimalSeed::parse("1.5"), Err(Error::Parse(_))));
        assert!(matches!(DecimalSeed::parse("0.0"), Err(Error::Domain(_))));
        assert!(matches!(DecimalSeed::parse("0.9"), Err(Error::Domain(_))));
        assert!(DecimalSeed::parse("0.12a").is_err());
    }

    #[test]
    fn surd_seed_must_lie_in_unit_interval() {
        let sqrt2 = QuadraticSurd::new(0, 2, 1).unwrap();
        assert!(matches!(Seed::surd(sqrt2), Err(Error::Domain(_))));
        let s = QuadraticSurd::new(-1, 2, 1).unwrap();
        assert!(Seed::surd(s).is_ok());
    }
}
