use std::fmt;
use std::str::FromStr;

use contfrac::cfengine::Seed;
use contfrac::{fixtures, Error, QuadraticSurd};

/// Decimal seeds shorter than this are refused: they pin down too few digits
/// to be worth expanding rigorously.
pub const MIN_DECIMAL_DIGITS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedKind {
    Surd,
    Decimal,
    Fixture,
}

/// `surd:P,D,Q`, `decimal:0.ddd…` or `fixture:NAME`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedSpec {
    pub kind: SeedKind,
    pub payload: String,
}

impl SeedSpec {
    pub fn to_seed(&self) -> Result<Seed, Error> {
        match self.kind {
            SeedKind::Surd => {
                let parts: Vec<&str> = self.payload.split(',').map(str::trim).collect();
                let [p, d, q] = parts[..] else {
                    return Err(Error::Parse(format!(
                        "surd needs three integers P,D,Q, got {:?}",
                        self.payload
                    )));
                };
                let int = |s: &str| {
                    s.parse::<num_bigint::BigInt>()
                        .map_err(|_| Error::Parse(format!("{s:?} is not an integer")))
                };
                let surd = QuadraticSurd::new(int(p)?, int(d)?, int(q)?)?;
                Seed::surd(surd)
            }
            SeedKind::Decimal => {
                let seed = contfrac::cfengine::DecimalSeed::parse(&self.payload)?;
                if seed.significant_digits() < MIN_DECIMAL_DIGITS {
                    return Err(Error::Parse(format!(
                        "decimal seeds need at least {MIN_DECIMAL_DIGITS} significant digits, got {}",
                        seed.significant_digits()
                    )));
                }
                Ok(Seed::Decimal(seed))
            }
            SeedKind::Fixture => {
                let lit = fixtures::lookup(&self.payload).ok_or_else(|| {
                    Error::Parse(format!(
                        "unknown fixture {:?}; available: {}",
                        self.payload,
                        fixtures::NAMES.join(", ")
                    ))
                })?;
                Seed::decimal(lit)
            }
        }
    }
}

impl FromStr for SeedSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, payload) = s
            .split_once(':')
            .ok_or_else(|| format!("expected KIND:PAYLOAD, got {s:?}"))?;
        let kind = match kind {
            "surd" => SeedKind::Surd,
            "decimal" => SeedKind::Decimal,
            "fixture" => SeedKind::Fixture,
            other => return Err(format!("unknown seed kind {other:?} (surd, decimal, fixture)")),
        };
        Ok(SeedSpec {
            kind,
            payload: payload.to_string(),
        })
    }
}

impl fmt::Display for SeedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            SeedKind::Surd => "surd",
            SeedKind::Decimal => "decimal",
            SeedKind::Fixture => "fixture",
        };
        if self.payload.len() > 40 {
            write!(f, "{kind}:{}…", &self.payload[..38])
        } else {
            write!(f, "{kind}:{}", self.payload)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let s: SeedSpec = "surd:-1,2,1".parse().unwrap();
        assert!(s.to_seed().unwrap().is_exact());
        let f: SeedSpec = "fixture:pi-minus-3".parse().unwrap();
        assert!(!f.to_seed().unwrap().is_exact());
        let d: SeedSpec = "decimal:0.14159265358979323846264338327950288".parse().unwrap();
        assert!(d.to_seed().is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        assert!("pi".parse::<SeedSpec>().is_err());
        assert!("real:0.5".parse::<SeedSpec>().is_err());
        let s: SeedSpec = "surd:0,2,1".parse().unwrap();
        assert!(matches!(s.to_seed(), Err(Error::Domain(_))));
        let s: SeedSpec = "surd:1,2".parse().unwrap();
        assert!(matches!(s.to_seed(), Err(Error::Parse(_))));
        let s: SeedSpec = "decimal:0.1415926".parse().unwrap();
        assert!(matches!(s.to_seed(), Err(Error::Parse(_))));
        let s: SeedSpec = "fixture:e".parse().unwrap();
        assert!(matches!(s.to_seed(), Err(Error::Parse(_))));
    }
}
