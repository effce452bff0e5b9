//! Brute-force cross-validation.
//!
//! [`brute_theta`] uses nothing but the definition `θ_n = q_n²·|x₀ − p_n/q_n|`:
//! it encloses `x₀` at four times the working precision, expands both
//! endpoints with the rational Euclidean algorithm, and rebuilds `p_n/q_n`
//! bottom up. [`crosscheck`] compares that against the pipeline.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cfengine::{self, Seed};
use crate::error::{Error, Result};
use crate::exactreal::{PrecisionContext, Real, RigorousReal};
use crate::jager;
use crate::symmetry;

/// Decimal places used for enclosures in reports.
pub const REPORT_DIGITS: usize = 40;

/// First `n` digits of the regular continued fraction of a rational in (0,1).
fn naive_digits(x: &BigRational, n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n);
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    while out.len() < n && !num.is_zero() {
        let (a, r) = den.div_rem(&num);
        out.push(a);
        den = num;
        num = r;
    }
    out
}

/// `[0; a_1, …, a_n]` evaluated from the innermost term outwards.
fn evaluate(digits: &[BigInt]) -> BigRational {
    let mut v = BigRational::zero();
    for a in digits.iter().rev() {
        v = (BigRational::from_integer(a.clone()) + v).recip();
    }
    v
}

/// Encloses `θ_n` from the definition alone, with `x₀` held at
/// `4 × base_bits`.
pub fn brute_theta(seed: &Seed, n: usize, base_bits: u32) -> Result<RigorousReal> {
    let bits = base_bits.saturating_mul(4);
    let x0 = seed.enclosure(bits);
    let lo = x0.lower().to_rational();
    let hi = x0.upper().to_rational();
    let dl = naive_digits(&lo, n + 1);
    let dh = naive_digits(&hi, n + 1);
    // the first n digits must be shared by the whole enclosure
    if dl.len() < n || dh.len() < n || dl[..n] != dh[..n] {
        return Err(Error::PrecisionExhausted {
            bits,
            index: Some(n),
        });
    }
    let conv = evaluate(&dl[..n]);
    let q = conv.denom().clone();
    let q2 = BigRational::from_integer(&q * &q);
    let a = (&lo - &conv).abs() * &q2;
    let b = (&hi - &conv).abs() * &q2;
    let straddles = lo <= conv && conv <= hi;
    let lower = if straddles {
        BigRational::zero()
    } else {
        a.clone().min(b.clone())
    };
    Ok(RigorousReal::from_rational_bounds(&lower, &a.max(b), bits))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Bounds {
    pub lower: String,
    pub upper: String,
}

impl Bounds {
    fn of(x: &Real) -> Self {
        let (lower, upper) = x.decimal_bounds(REPORT_DIGITS);
        Bounds { lower, upper }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OracleEntry {
    pub n: usize,
    pub oracle: Option<Bounds>,
    pub pipeline: Option<Bounds>,
    /// Oracle and pipeline enclosures of `θ_n` intersect.
    pub overlap: bool,
    /// `a_{n+1}` recovered from `(θ_{n−1}, θ_n)` matches the expansion.
    pub digit_past: Option<bool>,
    /// `a_{n+1}` recovered from `(θ_{n+1}, θ_n)` matches the expansion.
    pub digit_future: Option<bool>,
    /// Reconstruction from `(θ_0, θ_1)` overlaps the direct value.
    pub reconstruction: Option<bool>,
}

impl OracleEntry {
    pub fn all_ok(&self) -> bool {
        self.overlap
            && self.digit_past != Some(false)
            && self.digit_future != Some(false)
            && self.reconstruction != Some(false)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OracleReport {
    pub seed: String,
    /// Inclusive `[0, N]`.
    pub range: (usize, usize),
    pub entries: Vec<OracleEntry>,
    /// Pipeline failures, recorded rather than raised.
    pub errors: Vec<String>,
}

impl OracleReport {
    pub fn all_ok(&self) -> bool {
        self.errors.is_empty() && self.entries.iter().all(OracleEntry::all_ok)
    }
}

fn overlaps(a: &Real, b: &RigorousReal) -> bool {
    let p = a.precision().max(b.precision());
    a.enclosure(p).overlaps(b)
}

/// Compares oracle θ values, recovered digits and a reconstruction against
/// the pipeline for `θ_0 … θ_N`. Mismatches become report entries.
pub fn crosscheck(seed: &Seed, n_max: usize, ctx: &PrecisionContext) -> OracleReport {
    let mut errors = Vec::new();

    let state = match cfengine::expand(seed.clone(), n_max + 2, ctx) {
        Ok(s) => Some(s),
        Err(e) => {
            errors.push(format!("expand: {e}"));
            None
        }
    };
    let base_bits = oracle_base_bits(seed, state.as_ref(), n_max, ctx);
    let digits: Vec<BigUint> = state.as_ref().map(|s| s.digits().to_vec()).unwrap_or_default();
    let thetas: Vec<Real> = match state.as_ref().map(|s| jager::thetas_from_state(s, n_max, ctx)) {
        Some(Ok(t)) => t.into_iter().map(|t| t.value).collect(),
        Some(Err(e)) => {
            errors.push(format!("theta_sequence: {e}"));
            Vec::new()
        }
        None => Vec::new(),
    };
    let recon = if thetas.len() >= 2 {
        match symmetry::reconstruct(&thetas[0], &thetas[1], 0, 0, n_max.saturating_sub(1), ctx) {
            Ok(r) => Some(r),
            Err(e) => {
                errors.push(e.to_string());
                Some(e.partial)
            }
        }
    } else {
        None
    };

    let digit_ok = |outer: &Real, center: &Real, k: usize| -> Option<bool> {
        let want = digits.get(k)?;
        match symmetry::digit_from_pair(outer, center, ctx) {
            Ok(a) => Some(&a == want),
            // (θ_0, θ_1) sits on the floor boundary when a_1 = 1
            Err(e) if k == 1 && e.is_precision() => None,
            Err(_) => Some(false),
        }
    };

    let mut entries = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let oracle = match brute_theta(seed, n, base_bits) {
            Ok(o) => Some(o),
            Err(e) => {
                errors.push(format!("brute_theta({n}): {e}"));
                None
            }
        };
        let pipe = thetas.get(n);
        let overlap = match (&oracle, pipe) {
            (Some(o), Some(p)) => overlaps(p, o),
            _ => false,
        };
        // digits[n] is a_{n+1}
        let digit_past = match (n.checked_sub(1).and_then(|k| thetas.get(k)), pipe) {
            (Some(o), Some(c)) => digit_ok(o, c, n),
            _ => None,
        };
        let digit_future = match (thetas.get(n + 1), pipe) {
            (Some(o), Some(c)) if n >= 1 => digit_ok(o, c, n),
            _ => None,
        };
        let reconstruction = match (&recon, pipe) {
            (Some(r), Some(p)) => r.theta(n).map(|t| {
                let prec = t.precision().max(p.precision());
                t.enclosure(prec).overlaps(&p.enclosure(prec))
            }),
            _ => None,
        };
        entries.push(OracleEntry {
            n,
            oracle: oracle.map(|o| Bounds::of(&Real::Interval(o))),
            pipeline: pipe.map(Bounds::of),
            overlap,
            digit_past,
            digit_future,
            reconstruction,
        });
    }

    OracleReport {
        seed: seed.to_string(),
        range: (0, n_max),
        entries,
        errors,
    }
}

/// The precision the pipeline effectively works at for `θ_0 … θ_N`.
///
/// Exact seeds carry no fixed precision, so the figure is the one needed to
/// present `θ_N = q_N²·|x₀ − p_N/q_N|` at `initial_bits`: the enclosure of
/// `x₀` must resolve `2·bits(q_N)` more bits.
fn oracle_base_bits(
    seed: &Seed,
    state: Option<&cfengine::ContinuedFractionState>,
    n_max: usize,
    ctx: &PrecisionContext,
) -> u32 {
    let base = jager::working_precision(seed, ctx);
    if !seed.is_exact() {
        return base;
    }
    let q_bits = state
        .and_then(|s| s.convergents().get(n_max + 1))
        .map_or(0, |c| c.q.bits());
    base.saturating_add((2 * q_bits).min(u32::MAX as u64 / 8) as u32)
}

/// [`crosscheck`] over many seeds in parallel; output order follows input.
pub fn crosscheck_batch(seeds: &[Seed], n_max: usize, ctx: &PrecisionContext) -> Vec<OracleReport> {
    seeds.par_iter().map(|s| crosscheck(s, n_max, ctx)).collect()
}

/// `√D − ⌊√D⌋` as a seed, for non-square `D`.
pub fn sqrt_fraction_seed(d: u64) -> Option<Seed> {
    let r = num_integer::Roots::sqrt(&d);
    if r * r == d {
        return None;
    }
    let s = crate::exactreal::QuadraticSurd::new(-(r as i64), d as i64, 1).ok()?;
    Seed::surd(s).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::QuadraticSurd;

    fn golden() -> Seed {
        Seed::surd(QuadraticSurd::new(-1, 5, 2).unwrap()).unwrap()
    }

    #[test]
    fn naive_expansion_and_evaluation() {
        let x = BigRational::new(113.into(), 355.into());
        let d = naive_digits(&x, 10);
        let want: Vec<BigInt> = [3, 7, 16].into_iter().map(BigInt::from).collect();
        assert_eq!(d, want);
        assert_eq!(evaluate(&d), x);
    }

    #[test]
    fn golden_theta_zero_and_one() {
        let t0 = brute_theta(&golden(), 0, 64).unwrap();
        assert!((t0.midpoint_f64() - 0.6180339887498949).abs() < 1e-15);
        let t1 = brute_theta(&golden(), 1, 64).unwrap();
        let exact = Real::Surd(QuadraticSurd::new(-3, 5, -2).unwrap());
        assert!(exact.enclosure(256).overlaps(&t1));
    }

    #[test]
    fn pi_theta_three() {
        let seed = Seed::decimal(crate::fixtures::PI_MINUS_3.trim()).unwrap();
        let t = brute_theta(&seed, 3, 128).unwrap();
        assert_eq!(t.decimal_bounds(4).1, "0.0035");
    }

    #[test]
    fn golden_crosscheck_is_clean() {
        let r = crosscheck(&golden(), 50, &PrecisionContext::default());
        assert!(r.all_ok(), "{r:?}");
        assert_eq!(r.entries.len(), 51);
    }
}
