//! Recovering digits and coefficients from consecutive θ pairs.
//!
//! For a genuine expansion
//!
//! ```text
//! a_{n+1} = ⌊(1 + √(1 − 4·θ_{n−1}·θ_n)) / (2·θ_n)⌋
//!         = ⌊(1 + √(1 − 4·θ_{n+1}·θ_n)) / (2·θ_n)⌋
//! ```
//!
//! and the working formula
//! `θ_{n±1} = θ_{n∓1} + a_{n+1}·√(1 − 4·θ_{n∓1}·θ_n) − a_{n+1}²·θ_n`
//! propagates a pair one step in either direction. Iterating both from one
//! pair reconstructs the whole sequence, down to `θ_0` and as far up as the
//! input precision allows. `a_1` is out of reach: it would need `θ_{−1}`.
//!
//! The argument of the floor is never an integer for a genuine pair except
//! in one boundary case (`n = 1`, `a_1 = 1`, past-side), where it equals
//! `a_2 + 1` exactly. [`digit_from_pair`] therefore returns the greatest
//! integer strictly below the argument, which agrees with the floor
//! everywhere else.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactreal::{PrecisionContext, Real};

/// Which neighbour of the center coefficient is the outer one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `(θ_{n−1}, θ_n)`, propagating to `θ_{n+1}`.
    Forward,
    /// `(θ_{n+1}, θ_n)`, propagating to `θ_{n−1}`.
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaPair {
    pub outer: Real,
    pub center: Real,
    pub direction: Direction,
}

impl ThetaPair {
    pub fn forward(prev: Real, center: Real) -> Self {
        ThetaPair {
            outer: prev,
            center,
            direction: Direction::Forward,
        }
    }

    pub fn backward(next: Real, center: Real) -> Self {
        ThetaPair {
            outer: next,
            center,
            direction: Direction::Backward,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DigitSource {
    FromPastPair,
    FromFuturePair,
}

/// `a_index` as recovered from a θ pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredDigit {
    pub index: usize,
    pub value: BigUint,
    pub source: DigitSource,
}

fn working_bits(ctx: &PrecisionContext, xs: &[&Real]) -> u32 {
    xs.iter().map(|x| x.precision()).fold(ctx.initial_bits(), u32::max)
}

/// `1 − 4·u·v`, certified positive.
fn radicand(u: &Real, v: &Real, prec: u32) -> Result<Real> {
    let rad = Real::from_int(1).sub(&Real::from_int(4).mul(&u.mul(v, prec), prec), prec);
    match rad.signum() {
        Some(Ordering::Greater) => Ok(rad),
        _ => Err(Error::Domain(format!(
            "cannot certify 1 − 4·({u})·({v}) > 0"
        ))),
    }
}

fn require_positive(x: &Real) -> Result<()> {
    match x.signum() {
        Some(Ordering::Greater) => Ok(()),
        _ => Err(Error::Domain(format!("{x} is not certified positive"))),
    }
}

fn digit_at(outer: &Real, center: &Real, prec: u32) -> Result<BigUint> {
    let s = radicand(outer, center, prec)?.sqrt(prec)?;
    let arg = Real::from_int(1)
        .add(&s, prec)
        .div(&center.add(center, prec), prec)?;
    let a = arg.ceil_checked()? - BigInt::one();
    a.to_biguint()
        .filter(|a| !a.is_zero())
        .ok_or_else(|| Error::Domain(format!("pair ({outer}, {center}) gives digit {a}")))
}

/// The digit at the center of a θ pair; the same formula serves both
/// `(θ_{n−1}, θ_n)` and `(θ_{n+1}, θ_n)`, yielding `a_{n+1}`.
///
/// Exact inputs are re-evaluated with more bits until the floor is decided.
/// Enclosures are used as given and a straddle is reported as
/// `InsufficientPrecision`.
pub fn digit_from_pair(outer: &Real, center: &Real, ctx: &PrecisionContext) -> Result<BigUint> {
    require_positive(center)?;
    require_positive(outer)?;
    let exact = outer.is_exact() && center.is_exact();
    let ctx = ctx.starting_at(working_bits(ctx, &[outer, center]));
    ctx.escalate(exact, |bits| digit_at(outer, center, bits))
}

/// `θ_from + a·√(1 − 4·θ_from·θ_n) − a²·θ_n`.
pub fn dk_step(from: &Real, center: &Real, a: &BigUint, prec: u32) -> Result<Real> {
    let s = radicand(from, center, prec)?.sqrt(prec)?;
    let a = Real::Rational(BigRational::from_integer(BigInt::from(a.clone())));
    let a2 = a.mul(&a, prec);
    Ok(from
        .add(&a.mul(&s, prec), prec)
        .sub(&a2.mul(center, prec), prec))
}

/// One step of bidirectional propagation: the center digit and the
/// coefficient on the far side of the center.
pub fn step(pair: &ThetaPair, ctx: &PrecisionContext) -> Result<(BigUint, Real)> {
    let a = digit_from_pair(&pair.outer, &pair.center, ctx)?;
    let prec = working_bits(ctx, &[&pair.outer, &pair.center]);
    let theta = dk_step(&pair.outer, &pair.center, &a, prec)?;
    Ok((a, theta))
}

/// Output of [`reconstruct`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    /// Index of `thetas[0]`.
    pub start: usize,
    pub thetas: Vec<Real>,
    /// Ascending by index.
    pub digits: Vec<RecoveredDigit>,
}

impl Reconstruction {
    pub fn theta(&self, index: usize) -> Option<&Real> {
        index.checked_sub(self.start).and_then(|k| self.thetas.get(k))
    }

    pub fn end(&self) -> usize {
        self.start + self.thetas.len() - 1
    }
}

/// A reconstruction that stopped early, with what it had.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructionError {
    /// The last θ index reached in the failing direction.
    pub reached: usize,
    pub partial: Reconstruction,
    pub source: Error,
}

impl fmt::Display for ReconstructionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "reconstruction stopped at θ_{}: {}", self.reached, self.source)
    }
}

impl std::error::Error for ReconstructionError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

/// Rebuilds `θ_{n−back} … θ_{n+1+fwd}` and `a_{n−back+2} … a_{n+fwd+1}` from
/// the pair `(θ_n, θ_{n+1})`.
///
/// For enclosure inputs the precision budget `steps × (bits(a) + 4)` is
/// checked against `max_bits` first, with `a` the digit at the starting pair.
pub fn reconstruct(
    theta_n: &Real,
    theta_next: &Real,
    n: usize,
    back: usize,
    fwd: usize,
    ctx: &PrecisionContext,
) -> Result<Reconstruction, ReconstructionError> {
    let mut lower: Vec<Real> = Vec::new();
    let mut upper: Vec<Real> = Vec::new();
    let mut low_digits: Vec<RecoveredDigit> = Vec::new();
    let mut high_digits: Vec<RecoveredDigit> = Vec::new();

    let assemble = |lower: &[Real], upper: &[Real], low: &[RecoveredDigit], high: &[RecoveredDigit]| {
        let mut thetas: Vec<Real> = lower.iter().rev().cloned().collect();
        thetas.push(theta_n.clone());
        thetas.push(theta_next.clone());
        thetas.extend(upper.iter().cloned());
        let mut digits: Vec<RecoveredDigit> = low.iter().rev().cloned().collect();
        digits.extend(high.iter().cloned());
        Reconstruction {
            start: n - lower.len(),
            thetas,
            digits,
        }
    };
    let fail = |reached: usize, partial: Reconstruction, source: Error| ReconstructionError {
        reached,
        partial,
        source,
    };

    if back > n {
        return Err(fail(
            n,
            assemble(&[], &[], &[], &[]),
            Error::Domain(format!("cannot go {back} steps back from θ_{n}")),
        ));
    }

    if !(theta_n.is_exact() && theta_next.is_exact()) {
        let steps = (back + fwd) as u64;
        let a = digit_from_pair(theta_n, theta_next, ctx).map(|a| a.bits()).unwrap_or(1);
        let needed = steps * (a + 4);
        if needed > ctx.max_bits() as u64 {
            return Err(fail(
                n,
                assemble(&[], &[], &[], &[]),
                Error::PrecisionExhausted {
                    bits: needed.min(u32::MAX as u64) as u32,
                    index: Some(n),
                },
            ));
        }
    }

    // backward: (θ_{k+1}, θ_k) gives a_{k+1} and θ_{k−1}
    let (mut hi, mut lo) = (theta_next.clone(), theta_n.clone());
    for k in (n + 1 - back..=n).rev() {
        match step(&ThetaPair::backward(hi.clone(), lo.clone()), ctx) {
            Ok((a, prev)) => {
                low_digits.push(RecoveredDigit {
                    index: k + 1,
                    value: a,
                    source: DigitSource::FromFuturePair,
                });
                lower.push(prev.clone());
                hi = lo;
                lo = prev;
            }
            Err(e) => {
                return Err(fail(k, assemble(&lower, &upper, &low_digits, &high_digits), e))
            }
        }
    }

    // forward: (θ_{k−1}, θ_k) gives a_{k+1} and θ_{k+1}
    let (mut lo, mut hi) = (theta_n.clone(), theta_next.clone());
    for k in n + 1..n + 1 + fwd {
        match step(&ThetaPair::forward(lo.clone(), hi.clone()), ctx) {
            Ok((a, next)) => {
                high_digits.push(RecoveredDigit {
                    index: k + 1,
                    value: a,
                    source: DigitSource::FromPastPair,
                });
                upper.push(next.clone());
                lo = hi;
                hi = next;
            }
            Err(e) => {
                return Err(fail(k, assemble(&lower, &upper, &low_digits, &high_digits), e))
            }
        }
    }

    Ok(assemble(&lower, &upper, &low_digits, &high_digits))
}

/// `a_2 … a_{N+1}` from `θ_0 … θ_N`.
///
/// `a_n` comes from the interior form, center `θ_{n−1}` and outer `θ_n`;
/// the last digit `a_{N+1}` only has the past-side pair. Where both sides
/// are available they must agree, except at `a_2`, whose past-side pair
/// `(θ_0, θ_1)` can sit exactly on the boundary.
pub fn digit_sequence_from_thetas(thetas: &[Real], ctx: &PrecisionContext) -> Result<Vec<BigUint>> {
    let big_n = thetas.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| {
        Error::Domain("at least two consecutive coefficients are needed".into())
    })?;
    let mut out = Vec::with_capacity(big_n);
    for n in 2..=big_n + 1 {
        let center = &thetas[n - 1];
        let past = digit_from_pair(&thetas[n - 2], center, ctx);
        if n > big_n {
            out.push(past?);
            continue;
        }
        let interior = digit_from_pair(&thetas[n], center, ctx)?;
        if n > 2 {
            let past = past?;
            if past != interior {
                return Err(Error::CrossCheckFailure {
                    index: n,
                    detail: format!("a_{n}: interior form {interior}, past-side form {past}"),
                });
            }
        }
        out.push(interior);
    }
    Ok(out)
}

/// `(a² + 4)^(−1/2)` as an f64, for reporting.
pub fn tong_bound(a: &BigUint) -> f64 {
    let a = a.to_f64().unwrap_or(f64::INFINITY);
    1.0 / (a * a + 4.0).sqrt()
}

/// True when the working formula maps `(t, c, a)` onto the branch where
/// applying it a second time returns `t`: `√(1 − 4tc) ≤ 2ac`.
pub fn dk_involutive_branch(t: &Real, c: &Real, a: &BigUint, prec: u32) -> Option<bool> {
    let s = radicand(t, c, prec).ok()?.sqrt(prec).ok()?;
    let a = Real::Rational(BigRational::from_integer(BigInt::from(a.clone())));
    let two_ac = a.mul(c, prec).mul(&Real::from_int(2), prec);
    match two_ac.sub(&s, prec).signum()? {
        Ordering::Less => Some(false),
        _ => Some(true),
    }
}

/// Digits must be positive; helper for callers that hold signed values.
pub fn positive_digit(a: &BigInt) -> Option<BigUint> {
    if a.is_positive() {
        a.to_biguint()
    } else {
        None
    }
}
