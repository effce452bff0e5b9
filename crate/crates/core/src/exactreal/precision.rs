use crate::error::{Error, Result};

/// Geometric precision schedule shared by every operation that may need to
/// retry with more bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    initial_bits: u32,
    max_bits: u32,
    growth_factor: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            initial_bits: 128,
            max_bits: 1 << 20,
            growth_factor: 2,
        }
    }
}

impl PrecisionContext {
    pub fn new(initial_bits: u32, max_bits: u32, growth_factor: u32) -> Result<Self> {
        if initial_bits == 0 || initial_bits > max_bits {
            return Err(Error::Domain(format!(
                "need 0 < initial_bits ({initial_bits}) <= max_bits ({max_bits})"
            )));
        }
        if growth_factor < 2 {
            return Err(Error::Domain("growth_factor must be at least 2".into()));
        }
        Ok(PrecisionContext {
            initial_bits,
            max_bits,
            growth_factor,
        })
    }

    pub fn initial_bits(&self) -> u32 {
        self.initial_bits
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }

    pub fn growth_factor(&self) -> u32 {
        self.growth_factor
    }

    /// Same schedule restarted at `bits` (clamped to the ceiling).
    pub fn starting_at(&self, bits: u32) -> Self {
        PrecisionContext {
            initial_bits: bits.clamp(1, self.max_bits),
            ..*self
        }
    }

    /// `initial, initial·g, initial·g², …`, ending exactly at `max_bits`.
    pub fn schedule(&self) -> impl Iterator<Item = u32> {
        let (max, g) = (self.max_bits, self.growth_factor);
        let mut next = Some(self.initial_bits);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= max {
                None
            } else {
                Some(cur.saturating_mul(g).min(max))
            };
            Some(cur)
        })
    }

    /// Runs `attempt` along the schedule while it reports
    /// `InsufficientPrecision`.
    ///
    /// When the inputs are fixed enclosures (`escalatable == false`) more
    /// bits cannot help, so the first `InsufficientPrecision` is returned
    /// unchanged. Otherwise exhausting the schedule yields
    /// `PrecisionExhausted`.
    pub fn escalate<T>(
        &self,
        escalatable: bool,
        mut attempt: impl FnMut(u32) -> Result<T>,
    ) -> Result<T> {
        let mut last = self.initial_bits;
        for bits in self.schedule() {
            last = bits;
            match attempt(bits) {
                Err(Error::InsufficientPrecision { .. }) if escalatable => continue,
                other => return other,
            }
        }
        Err(Error::PrecisionExhausted {
            bits: last,
            index: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_schedule_is_geometric() {
        let ctx = PrecisionContext::default();
        let s: Vec<u32> = ctx.schedule().collect();
        assert_eq!(s.first(), Some(&128));
        assert_eq!(s.last(), Some(&(1 << 20)));
        assert!(s.windows(2).all(|w| w[1] == w[0] * 2));
    }

    #[test]
    fn schedule_clamps_to_max() {
        let ctx = PrecisionContext::new(100, 300, 2).unwrap();
        assert_eq!(ctx.schedule().collect::<Vec<_>>(), vec![100, 200, 300]);
    }

    #[test]
    fn rejects_bad_contexts() {
        assert!(PrecisionContext::new(256, 128, 2).is_err());
        assert!(PrecisionContext::new(64, 128, 1).is_err());
    }

    #[test]
    fn escalation_retries_then_exhausts() {
        let ctx = PrecisionContext::new(64, 512, 2).unwrap();
        let got = ctx.escalate(true, |b| {
            if b >= 256 {
                Ok(b)
            } else {
                Err(Error::InsufficientPrecision { bits: b })
            }
        });
        assert_eq!(got, Ok(256));
        let never: Result<()> = ctx.escalate(true, |b| Err(Error::InsufficientPrecision { bits: b }));
        assert_eq!(
            never,
            Err(Error::PrecisionExhausted {
                bits: 512,
                index: None
            })
        );
        let fixed: Result<()> = ctx.escalate(false, |b| Err(Error::InsufficientPrecision { bits: b }));
        assert_eq!(fixed, Err(Error::InsufficientPrecision { bits: 64 }));
    }
}
