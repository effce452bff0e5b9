//! Symbolic dynamics of the regular continued fraction.
//!
//! Starting from `x₀ ∈ (0,1)`, each tick computes `r = 1/x_n`, the digit
//! `a_{n+1} = ⌊r⌋` and the new future `x_{n+1} = r − a_{n+1}` (the Gauss map).
//! The digits already consumed are kept in the past
//! `y_n = −a_n − [a_{n−1}, …, a_1]`, an exact rational, and the pair
//! `(x_n, y_n)` evolves under the natural extension
//! `(x, y) ↦ (1/x − ⌊1/x⌋, 1/y − ⌊1/x⌋)`.

mod seed;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, ToBigInt};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use seed::{DecimalSeed, Seed};

use crate::error::{Error, Result};
use crate::exactreal::{PrecisionContext, QuadraticSurd, Real, RigorousReal};

/// A convergent `p/q` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        Convergent {
            p: p.into(),
            q: q.into(),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

/// Snapshot of an expansion after `n` digits.
///
/// `convergents[k]` is `p_k/q_k` for `k = 0..=n` with `p_0/q_0 = 0/1`.
#[derive(Clone, Debug)]
pub struct ContinuedFractionState {
    seed: Arc<Seed>,
    digits: Vec<BigUint>,
    convergents: Vec<Convergent>,
    future: Real,
    past: Option<BigRational>,
}

impl ContinuedFractionState {
    /// The state at time 0: no digits, future `x₀`, no past.
    pub fn new(seed: impl Into<Arc<Seed>>, ctx: &PrecisionContext) -> Self {
        let seed = seed.into();
        let future = seed.value(ctx.initial_bits());
        ContinuedFractionState {
            seed,
            digits: Vec::new(),
            convergents: vec![Convergent::new(0, 1)],
            future,
            past: None,
        }
    }

    pub fn n(&self) -> usize {
        self.digits.len()
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    /// `a_1..a_n`.
    pub fn digits(&self) -> &[BigUint] {
        &self.digits
    }

    /// `p_0/q_0 … p_n/q_n`.
    pub fn convergents(&self) -> &[Convergent] {
        &self.convergents
    }

    /// `x_n`.
    pub fn future(&self) -> &Real {
        &self.future
    }

    /// `y_n`, defined for `n ≥ 1`.
    pub fn past(&self) -> Option<&BigRational> {
        self.past.as_ref()
    }

    /// `p_{k−1}/q_{k−1}` with the seed `p_{−1}/q_{−1} = 1/0`.
    fn previous(&self, k: usize) -> Convergent {
        if k == 0 {
            Convergent::new(1, 0)
        } else {
            self.convergents[k - 1].clone()
        }
    }

    fn advance(&self, digit: BigInt, future: Real) -> ContinuedFractionState {
        let n = self.n();
        let cur = &self.convergents[n];
        let prev = self.previous(n);
        let next = Convergent::new(&digit * &cur.p + &prev.p, &digit * &cur.q + &prev.q);
        let past = match &self.past {
            None => BigRational::from_integer(-&digit),
            Some(y) => y.recip() - BigRational::from_integer(digit.clone()),
        };
        let mut digits = self.digits.clone();
        digits.push(digit.to_biguint().expect("digits are positive"));
        let mut convergents = self.convergents.clone();
        convergents.push(next);
        ContinuedFractionState {
            seed: Arc::clone(&self.seed),
            digits,
            convergents,
            future,
            past: Some(past),
        }
    }
}

/// Encloses `x_n` directly from the seed:
/// `x_n = (p_n − q_n·x₀)/(q_{n−1}·x₀ − p_{n−1})`.
///
/// Recomputing from the original literal avoids compounding the width lost
/// by iterating the interval Gauss map.
pub fn future_from_seed(
    state: &ContinuedFractionState,
    n: usize,
    prec: u32,
) -> Result<RigorousReal> {
    let x0 = state.seed.enclosure(prec);
    if n == 0 {
        return Ok(x0);
    }
    let cur = &state.convergents[n];
    let prev = state.previous(n);
    let int = |v: &BigInt| RigorousReal::from_int(v.clone(), prec);
    let num = &int(&cur.p) - &(&int(&cur.q) * &x0);
    let den = &(&int(&prev.q) * &x0) - &int(&prev.p);
    num.checked_div(&den)
        .map_err(|_| Error::InsufficientPrecision { bits: prec })
}

fn interval_tick(x: &RigorousReal) -> Result<(BigInt, RigorousReal)> {
    let bits = x.precision();
    if x.signum() != Some(Ordering::Greater) {
        return Err(Error::InsufficientPrecision { bits });
    }
    let r = x.recip()?;
    let a = r.floor_checked()?;
    if a < BigInt::one() {
        return Err(Error::Domain(format!("future {x} is not below 1")));
    }
    let next = &r - &RigorousReal::from_int(a.clone(), bits);
    if next.signum() != Some(Ordering::Greater) {
        return Err(Error::InsufficientPrecision { bits });
    }
    Ok((a, next))
}

/// One tick of the Gauss map.
///
/// Exact for surd seeds. For decimal seeds a straddling floor triggers a
/// retry with more bits, recomputing `x_n` from the seed literal; once the
/// literal itself is the limiting factor (or `max_bits` is reached) the
/// step fails with `PrecisionExhausted` carrying the current index.
pub fn gauss_step(
    state: &ContinuedFractionState,
    ctx: &PrecisionContext,
) -> Result<ContinuedFractionState> {
    let n = state.n();
    match &state.future {
        Real::Surd(x) => {
            let a = x.recip_shift(&BigInt::zero()).floor();
            Ok(state.advance(a.clone(), Real::Surd(x.recip_shift(&a))))
        }
        Real::Rational(_) => Err(Error::Domain(
            "rational future: the expansion has terminated".into(),
        )),
        Real::Interval(x) => {
            let info = state.seed.info_bits().unwrap_or(u64::MAX / 4);
            let q_bits = state.convergents[n].q.bits();
            let useful = info.saturating_add(2 * q_bits + 128);
            let cap = (ctx.max_bits() as u64).min(useful).max(x.precision() as u64) as u32;
            let mut bits = x.precision();
            let mut current = x.clone();
            loop {
                match interval_tick(&current) {
                    Ok((a, next)) => return Ok(state.advance(a, Real::Interval(next))),
                    Err(Error::InsufficientPrecision { .. }) | Err(Error::Domain(_))
                        if bits < cap =>
                    {
                        bits = bits.saturating_mul(ctx.growth_factor()).min(cap);
                        current = match future_from_seed(state, n, bits) {
                            Ok(c) => c,
                            Err(_) if bits < cap => continue,
                            Err(_) => {
                                return Err(Error::PrecisionExhausted {
                                    bits,
                                    index: Some(n),
                                })
                            }
                        };
                    }
                    Err(Error::InsufficientPrecision { .. }) => {
                        return Err(Error::PrecisionExhausted {
                            bits,
                            index: Some(n),
                        })
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
}

/// Expands `seed` to `terms` digits.
pub fn expand(
    seed: impl Into<Arc<Seed>>,
    terms: usize,
    ctx: &PrecisionContext,
) -> Result<ContinuedFractionState> {
    match expand_partial(seed, terms, ctx) {
        (state, None) => Ok(state),
        (_, Some(e)) => Err(e),
    }
}

/// Like [`expand`], but also hands back whatever was computed before a
/// failure.
pub fn expand_partial(
    seed: impl Into<Arc<Seed>>,
    terms: usize,
    ctx: &PrecisionContext,
) -> (ContinuedFractionState, Option<Error>) {
    let mut state = ContinuedFractionState::new(seed, ctx);
    while state.n() < terms {
        match gauss_step(&state, ctx) {
            Ok(next) => state = next,
            Err(e) => return (state, Some(e)),
        }
    }
    (state, None)
}

/// `𝒯(x, y) = (1/x − ⌊1/x⌋, 1/y − ⌊1/x⌋)` for `x ∈ (0,1)`, `y ≤ −1`.
///
/// `y = −1` is admitted because it is the past `y_1` of every seed with
/// `a_1 = 1`.
pub fn natural_extension_step(x: &Real, y: &Real, prec: u32) -> Result<(Real, Real)> {
    let one = Real::from_int(1);
    let minus_one = Real::from_int(-1);
    match (x.signum(), x.cmp_certified(&one, prec)) {
        (Some(Ordering::Greater), Some(Ordering::Less)) => {}
        (None, _) | (_, None) => return Err(Error::InsufficientPrecision { bits: prec }),
        _ => return Err(Error::Domain(format!("x = {x} is not in (0, 1)"))),
    }
    match y.cmp_certified(&minus_one, prec) {
        Some(Ordering::Less | Ordering::Equal) => {}
        None => return Err(Error::InsufficientPrecision { bits: prec }),
        _ => return Err(Error::Domain(format!("y = {y} is above −1"))),
    }
    let r = x.recip(prec)?;
    let a = Real::from_int(r.floor_checked()?);
    Ok((r.sub(&a, prec), y.recip(prec)?.sub(&a, prec)))
}

/// `y_n = −a_n − [a_{n−1}, …, a_1]` for the prefix `a_1..a_n`.
pub fn past_of_prefix(digits: &[BigUint]) -> Result<BigRational> {
    let (last, earlier) = digits
        .split_last()
        .ok_or_else(|| Error::Domain("the past needs at least one digit".into()))?;
    if digits.iter().any(Zero::is_zero) {
        return Err(Error::Domain("digits must be positive".into()));
    }
    let mut tail = BigRational::zero();
    for a in earlier {
        tail = (BigRational::from_integer(a.to_bigint().expect("unsigned")) + tail).recip();
    }
    Ok(-BigRational::from_integer(last.to_bigint().expect("unsigned")) - tail)
}

/// Pre-period and period of a surd's digit sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Period {
    pub preperiod: usize,
    pub length: usize,
}

/// Detects the eventual period of the Gauss orbit of `x` by hashing the
/// canonical `(P, D, Q)` states. Gives up after `max_steps`.
pub fn detect_period(x: &QuadraticSurd, max_steps: usize) -> Option<Period> {
    let mut seen: HashMap<QuadraticSurd, usize> = HashMap::new();
    let mut cur = x.clone();
    for step in 0..=max_steps {
        if let Some(&first) = seen.get(&cur) {
            return Some(Period {
                preperiod: first,
                length: step - first,
            });
        }
        seen.insert(cur.clone(), step);
        let a = cur.recip_shift(&BigInt::zero()).floor();
        if !a.is_positive() {
            return None;
        }
        cur = cur.recip_shift(&a);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn surd_seed(p: i64, d: i64, q: i64) -> Seed {
        Seed::surd(QuadraticSurd::new(p, d, q).unwrap()).unwrap()
    }

    fn ints(v: &[BigUint]) -> Vec<u64> {
        v.iter().map(|d| u64::try_from(d).unwrap()).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt2_is_all_twos_and_fixed() {
        let seed = surd_seed(-1, 2, 1);
        let s = gauss_step(&ContinuedFractionState::new(seed.clone(), &ctx()), &ctx()).unwrap();
        assert_eq!(ints(s.digits()), vec![2]);
        assert_eq!(s.future(), &Real::Surd(seed.as_surd().unwrap().clone()));
        let s5 = expand(seed, 5, &ctx()).unwrap();
        assert_eq!(ints(s5.digits()), vec![2; 5]);
    }

    #[test]
    fn golden_convergents_are_fibonacci() {
        let s = expand(surd_seed(-1, 5, 2), 4, &ctx()).unwrap();
        assert_eq!(ints(s.digits()), vec![1, 1, 1, 1]);
        let q: Vec<i64> = s.convergents()[1..].iter().map(|c| c.q.clone().try_into().unwrap()).collect();
        let p: Vec<i64> = s.convergents()[1..].iter().map(|c| c.p.clone().try_into().unwrap()).collect();
        assert_eq!(q, vec![1, 2, 3, 5]);
        assert_eq!(p, vec![1, 1, 2, 3]);
    }

    #[test]
    fn past_examples() {
        let d = |v: &[u32]| v.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
        assert_eq!(past_of_prefix(&d(&[7])).unwrap(), rat(-7, 1));
        assert_eq!(past_of_prefix(&d(&[7, 15])).unwrap(), rat(-106, 7));
        assert_eq!(past_of_prefix(&d(&[1, 1, 1])).unwrap(), rat(-3, 2));
        assert!(past_of_prefix(&[]).is_err());
        assert!(past_of_prefix(&d(&[3, 0])).is_err());
    }

    #[test]
    fn natural_extension_fixed_points() {
        let x = Real::Surd(QuadraticSurd::new(-1, 2, 1).unwrap());
        // y = −1 − √2 = −2 − x
        let y = Real::from_int(-2).sub(&x, 64);
        assert_eq!(y, Real::Surd(QuadraticSurd::new(1, 2, -1).unwrap()));
        let (x1, y1) = natural_extension_step(&x, &y, 64).unwrap();
        assert_eq!((x1, y1), (x.clone(), y.clone()));

        let g = Real::Surd(QuadraticSurd::new(-1, 5, 2).unwrap());
        let minus_phi = Real::Surd(QuadraticSurd::new(1, 5, -2).unwrap());
        let (g1, m1) = natural_extension_step(&g, &minus_phi, 64).unwrap();
        assert_eq!((g1, m1), (g, minus_phi));
    }

    #[test]
    fn natural_extension_rejects_outside_omega() {
        let x = Real::Rational(rat(1, 3));
        assert!(matches!(
            natural_extension_step(&x, &Real::Rational(rat(-1, 2)), 64),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            natural_extension_step(&Real::from_int(2), &Real::from_int(-3), 64),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn period_of_sqrt_seeds() {
        // √7 − 2 = [1, 1, 1, 4, …] with period 4
        let p = detect_period(&QuadraticSurd::new(-2, 7, 1).unwrap(), 100).unwrap();
        assert_eq!(p.length, 4);
        let p = detect_period(&QuadraticSurd::new(-1, 2, 1).unwrap(), 100).unwrap();
        assert_eq!(p, Period { preperiod: 0, length: 1 });
    }

    #[test]
    fn short_decimal_seed_exhausts_with_index() {
        let seed = Seed::decimal("0.14159265358979323846264338327950288").unwrap();
        let (state, err) = expand_partial(seed, 200, &ctx());
        assert!(state.n() > 10 && state.n() < 200);
        match err {
            Some(Error::PrecisionExhausted { index: Some(i), .. }) => assert_eq!(i, state.n()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
