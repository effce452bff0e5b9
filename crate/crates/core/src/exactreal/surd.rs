//! Exact real quadratic irrationals `(P + √D) / Q`.
//!
//! A surd is stored in canonical form: with `D = f²·d` for squarefree `d`,
//! the value is written `(a + b√d)/c` with `c > 0`, `gcd(a, b, c) = 1`, and
//! then scaled by the least `m ≥ 1` that makes `Q | D − P²`. Two triples
//! describing the same real number therefore normalize to identical fields.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dyadic::{bit_len, Dyadic};
use super::interval::RigorousReal;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    p: BigInt,
    d: BigInt,
    q: BigInt,
    /// Squarefree part of `d`.
    kernel: BigInt,
    /// `√d = root·√kernel`.
    root: BigInt,
}

/// `(a + b√kernel)/c` with `c > 0`; `b` may be zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct QuadElem {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    kernel: BigInt,
}

/// Result of exact arithmetic: the `√kernel` coefficient may cancel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Exact {
    Rational(BigRational),
    Surd(QuadraticSurd),
}

pub(crate) fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Trial-division cap when looking for an exact root of a rational; past it
/// callers fall back to an enclosure.
const RATIONAL_SQRT_TRIAL_LIMIT: u64 = 1 << 12;

/// Splits `n > 0` into `(f, d)` with `n = f²·d` and `d` squarefree.
///
/// Trial division runs up to the cube root of the unfactored cofactor; what
/// remains then has at most two prime factors and is squarefree unless it is
/// a perfect square. `limit` caps the trial divisor; `None` is returned when
/// the cap is hit before the factorization is complete.
pub(crate) fn squarefree_parts(n: &BigInt, limit: Option<u64>) -> Option<(BigInt, BigInt)> {
    assert!(n.is_positive());
    if let Some(small) = n.to_u128() {
        return squarefree_u128(small, limit).map(|(f, d)| (BigInt::from(f), BigInt::from(d)));
    }
    let mut rest = n.clone();
    let (mut f, mut d) = (BigInt::one(), BigInt::one());
    let mut i = 2u64;
    loop {
        let ib = BigInt::from(i);
        if &ib * &ib * &ib > rest {
            break;
        }
        if limit.is_some_and(|l| i > l) {
            return None;
        }
        if !(&rest % i).is_zero() {
            i += if i == 2 { 1 } else { 2 };
            continue;
        }
        let mut e = 0u32;
        while (&rest % &ib).is_zero() {
            rest /= &ib;
            e += 1;
        }
        if e > 0 {
            f *= ib.pow(e / 2);
            if e % 2 == 1 {
                d *= &ib;
            }
        }
        i += if i == 2 { 1 } else { 2 };
    }
    match exact_sqrt(&rest) {
        Some(s) => f *= s,
        None => d *= rest,
    }
    Some((f, d))
}

fn squarefree_u128(mut rest: u128, limit: Option<u64>) -> Option<(u128, u128)> {
    let (mut f, mut d) = (1u128, 1u128);
    let mut i = 2u128;
    while i
        .checked_mul(i)
        .and_then(|s| s.checked_mul(i))
        .is_some_and(|c| c <= rest)
    {
        if limit.is_some_and(|l| i > l as u128) {
            return None;
        }
        if rest.is_multiple_of(i) {
            let mut e = 0u32;
            while rest.is_multiple_of(i) {
                rest /= i;
                e += 1;
            }
            f *= i.pow(e / 2);
            if e % 2 == 1 {
                d *= i;
            }
        }
        i += if i == 2 { 1 } else { 2 };
    }
    let s = rest.isqrt();
    if s * s == rest {
        f *= s;
    } else {
        d *= rest;
    }
    Some((f, d))
}

impl QuadElem {
    pub(crate) fn new(a: BigInt, b: BigInt, c: BigInt, kernel: BigInt) -> Self {
        assert!(!c.is_zero(), "zero denominator");
        let (mut a, mut b, mut c) = if c.is_negative() { (-a, -b, -c) } else { (a, b, c) };
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        QuadElem { a, b, c, kernel }
    }

    pub(crate) fn from_rational(q: &BigRational, kernel: &BigInt) -> Self {
        QuadElem::new(q.numer().clone(), BigInt::zero(), q.denom().clone(), kernel.clone())
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub(crate) fn signum(&self) -> Ordering {
        let sa = self.a.sign();
        let sb = self.b.sign();
        let to_ord = |s: Sign| match s {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        };
        if sb == Sign::NoSign {
            return to_ord(sa);
        }
        if sa == Sign::NoSign || sa == sb {
            return to_ord(sb);
        }
        // opposite signs: compare a² with b²·kernel
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * &self.kernel;
        if a2 > b2d {
            to_ord(sa)
        } else {
            to_ord(sb)
        }
    }

    pub(crate) fn add(&self, rhs: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.kernel, rhs.kernel);
        QuadElem::new(
            &self.a * &rhs.c + &rhs.a * &self.c,
            &self.b * &rhs.c + &rhs.b * &self.c,
            &self.c * &rhs.c,
            self.kernel.clone(),
        )
    }

    pub(crate) fn neg(&self) -> QuadElem {
        QuadElem {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            kernel: self.kernel.clone(),
        }
    }

    pub(crate) fn sub(&self, rhs: &QuadElem) -> QuadElem {
        self.add(&rhs.neg())
    }

    pub(crate) fn mul(&self, rhs: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.kernel, rhs.kernel);
        QuadElem::new(
            &self.a * &rhs.a + &self.b * &rhs.b * &self.kernel,
            &self.a * &rhs.b + &rhs.a * &self.b,
            &self.c * &rhs.c,
            self.kernel.clone(),
        )
    }

    pub(crate) fn recip(&self) -> Result<QuadElem> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        let norm = &self.a * &self.a - &self.b * &self.b * &self.kernel;
        Ok(QuadElem::new(
            &self.c * &self.a,
            -(&self.c * &self.b),
            norm,
            self.kernel.clone(),
        ))
    }

    pub(crate) fn div(&self, rhs: &QuadElem) -> Result<QuadElem> {
        Ok(self.mul(&rhs.recip()?))
    }

    /// Positive square root inside `ℚ(√kernel)`, if one exists.
    pub(crate) fn sqrt(&self) -> Option<QuadElem> {
        if self.signum() != Ordering::Greater {
            return (self.signum() == Ordering::Equal).then(|| self.clone());
        }
        // √((a + b√d)/c) = √(A + B√d)/c with A = ac, B = bc
        let big_a = &self.a * &self.c;
        let big_b = &self.b * &self.c;
        let d = &self.kernel;
        if big_b.is_zero() {
            if let Some(r) = exact_sqrt(&big_a) {
                return Some(QuadElem::new(r, BigInt::zero(), self.c.clone(), d.clone()));
            }
            if (&big_a % d).is_zero() {
                if let Some(r) = exact_sqrt(&(&big_a / d)) {
                    return Some(QuadElem::new(BigInt::zero(), r, self.c.clone(), d.clone()));
                }
            }
            return None;
        }
        // (x + y√d)² = A + B√d  ⇔  x² + d·y² = A, 2xy = B
        let n = exact_sqrt(&(&big_a * &big_a - d * &big_b * &big_b))?;
        for t in [&big_a + &n, &big_a - &n] {
            let twice = t * 2u32;
            if !twice.is_positive() {
                continue;
            }
            // x = k/2 with k² = 2(A ± n), y = B/k
            let Some(k) = exact_sqrt(&twice) else { continue };
            let cand = QuadElem::new(
                &k * &k,
                &big_b * 2u32,
                &k * &self.c * 2u32,
                d.clone(),
            );
            let cand = if cand.signum() == Ordering::Less { cand.neg() } else { cand };
            if cand.mul(&cand) == *self {
                return Some(cand);
            }
        }
        None
    }

    pub(crate) fn into_exact(self) -> Exact {
        if self.b.is_zero() {
            Exact::Rational(BigRational::new(self.a, self.c))
        } else {
            Exact::Surd(QuadraticSurd::from_canonical_parts(
                self.a,
                self.b,
                self.c,
                self.kernel,
            ))
        }
    }
}

impl QuadraticSurd {
    /// Builds `(p + √d)/q`, normalizing to canonical form.
    ///
    /// Rejects `d ≤ 0`, `q = 0`, and perfect-square `d` (a rational value).
    pub fn new(
        p: impl Into<BigInt>,
        d: impl Into<BigInt>,
        q: impl Into<BigInt>,
    ) -> Result<Self> {
        let (p, d, q) = (p.into(), d.into(), q.into());
        if !d.is_positive() {
            return Err(Error::InvalidSurd(format!("radicand {d} is not positive")));
        }
        if q.is_zero() {
            return Err(Error::InvalidSurd("denominator is zero".into()));
        }
        if exact_sqrt(&d).is_some() {
            return Err(Error::InvalidSurd(format!(
                "radicand {d} is a perfect square, so the value is rational"
            )));
        }
        let (root, kernel) = squarefree_parts(&d, None).expect("unbounded factorization");
        Ok(Self::from_canonical_parts(p, root, q, kernel))
    }

    /// `(a + b√kernel)/c`, `b ≠ 0`, `kernel` squarefree and `> 1`.
    fn from_canonical_parts(a: BigInt, b: BigInt, c: BigInt, kernel: BigInt) -> Self {
        debug_assert!(!b.is_zero());
        let e = QuadElem::new(a, b, c, kernel);
        let sign = if e.b.is_negative() { -BigInt::one() } else { BigInt::one() };
        let t = &e.b * &e.b * &e.kernel - &e.a * &e.a;
        let m = &e.c / e.c.gcd(&t);
        let root = &m * e.b.abs();
        QuadraticSurd {
            p: &sign * &e.a * &m,
            d: &root * &root * &e.kernel,
            q: &sign * &m * &e.c,
            kernel: e.kernel,
            root,
        }
    }

    /// `√(n/m)` as a surd when the radicand can be factored cheaply.
    pub(crate) fn sqrt_of_rational(x: &BigRational) -> Option<Exact> {
        if !x.is_positive() {
            return None;
        }
        let (n, m) = (x.numer(), x.denom());
        if let (Some(a), Some(b)) = (exact_sqrt(n), exact_sqrt(m)) {
            return Some(Exact::Rational(BigRational::new(a, b)));
        }
        let nm = n * m;
        let (f, kernel) = squarefree_parts(&nm, Some(RATIONAL_SQRT_TRIAL_LIMIT))?;
        // √(nm)/m = f√kernel/m
        Some(Exact::Surd(Self::from_canonical_parts(
            BigInt::zero(),
            f,
            m.clone(),
            kernel,
        )))
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// Squarefree part of the radicand; surds with equal kernels share a field.
    pub fn kernel(&self) -> &BigInt {
        &self.kernel
    }

    pub(crate) fn elem(&self) -> QuadElem {
        QuadElem::new(
            self.p.clone(),
            self.root.clone(),
            self.q.clone(),
            self.kernel.clone(),
        )
    }

    /// Exact `⌊x⌋` using the integer square root of `D`.
    pub fn floor(&self) -> BigInt {
        let s = self.d.sqrt();
        if self.q.is_positive() {
            (&self.p + s).div_floor(&self.q)
        } else {
            (&self.p + s + 1u32).div_floor(&self.q)
        }
    }

    /// Exact `⌈x⌉`; never equal to the floor because the value is irrational.
    pub fn ceil(&self) -> BigInt {
        self.floor() + 1u32
    }

    pub fn signum(&self) -> Ordering {
        self.elem().signum()
    }

    /// `1/x − a`, the exact Gauss-map update for a known digit `a`.
    pub fn recip_shift(&self, a: &BigInt) -> QuadraticSurd {
        let r = self.elem().recip().expect("irrational surd is nonzero");
        let shifted = r.sub(&QuadElem::new(
            a.clone(),
            BigInt::zero(),
            BigInt::one(),
            self.kernel.clone(),
        ));
        match shifted.into_exact() {
            Exact::Surd(s) => s,
            Exact::Rational(_) => unreachable!("irrational minus integer is irrational"),
        }
    }

    /// Enclosure with at least `prec` bits of relative accuracy.
    pub fn enclosure(&self, prec: u32) -> RigorousReal {
        // |P + √D| ≥ 1/(√D + |P|), so this many fractional bits of √D suffice.
        let k = prec as u64 + bit_len(&self.p) + bit_len(&self.d) / 2 + 8;
        let s = (&self.d << (2 * k)).sqrt();
        let work = prec + 16;
        let kk = -(k as i64);
        let num = RigorousReal::new(
            &Dyadic::from_int(self.p.clone()) + &Dyadic::new(s.clone(), kk),
            &Dyadic::from_int(self.p.clone()) + &Dyadic::new(s + 1u32, kk),
            work + (k as u32).min(u32::MAX - work),
        );
        let den = RigorousReal::from_int(self.q.clone(), work);
        num.checked_div(&den)
            .expect("nonzero denominator")
            .with_precision(prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure(64).midpoint_f64()
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + √{})/{}", self.p, self.d, self.q)
    }
}
