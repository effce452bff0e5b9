//! Approximation coefficients and the map between dynamic pairs and Jager
//! pairs.
//!
//! `θ_n = q_n²·|x₀ − p_n/q_n|` is computed two independent ways: straight from
//! the definition, and from the natural-extension pair through Perron's
//! formula `θ_{n−1} = 1/(x_n − y_n)`. The map
//! `Ψ(x, y) = (1/(x − y), −xy/(x − y))` sends the region
//! `Ω = (0,1) × (−∞,−1)` onto the open triangle
//! `Γ = {u > 0, v > 0, u + v < 1}` and `Ψ(x_n, y_n) = (θ_{n−1}, θ_n)`.
//!
//! The literature spells the pair "Jager"; some sources write "Jagger".

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::cfengine::{self, ContinuedFractionState, Convergent, Seed};
use crate::error::{Error, Result};
use crate::exactreal::{Dyadic, PrecisionContext, Real, RigorousReal};

/// How a θ value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Definition,
    Perron,
    Reconstruction,
    /// Intersection of the definition and Perron enclosures.
    CrossChecked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaValue {
    pub index: usize,
    pub value: Real,
    pub provenance: Provenance,
}

impl ThetaValue {
    pub fn new(index: usize, value: Real, provenance: Provenance) -> Self {
        ThetaValue {
            index,
            value,
            provenance,
        }
    }

    /// `0 < θ < 1`, certified.
    pub fn in_unit_interval(&self, prec: u32) -> bool {
        self.value.signum() == Some(Ordering::Greater)
            && self.value.cmp_certified(&Real::from_int(1), prec) == Some(Ordering::Less)
    }
}

/// `(θ_{n−1}, θ_n)` at time `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JagerPair {
    pub n: usize,
    pub first: ThetaValue,
    pub second: ThetaValue,
}

impl JagerPair {
    /// Builds a pair from two raw values, certifying membership in `Γ`.
    pub fn new(n: usize, first: Real, second: Real, provenance: Provenance, prec: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a Jager pair needs n ≥ 1".into()));
        }
        match in_gamma(&first, &second, prec) {
            Membership::Inside => Ok(JagerPair {
                n,
                first: ThetaValue::new(n - 1, first, provenance),
                second: ThetaValue::new(n, second, provenance),
            }),
            m => Err(Error::RegionViolation(format!(
                "({first}, {second}) is not certified inside the triangle: {m:?}"
            ))),
        }
    }
}

/// `(x_n, y_n)` with `x ∈ (0,1)` and `y < −1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicPair {
    pub n: usize,
    pub x: Real,
    pub y: Real,
}

impl DynamicPair {
    /// Builds a pair, certifying membership in `Ω`.
    pub fn new(n: usize, x: Real, y: Real, prec: u32) -> Result<Self> {
        match in_omega(&x, &y, prec) {
            Membership::Inside => Ok(DynamicPair { n, x, y }),
            m => Err(Error::RegionViolation(format!(
                "({x}, {y}) is not certified inside Ω: {m:?}"
            ))),
        }
    }

    /// The pair of an expansion state at time `n ≥ 1`.
    pub fn from_state(state: &ContinuedFractionState, prec: u32) -> Result<Self> {
        let y = state
            .past()
            .ok_or_else(|| Error::Domain("the dynamic pair needs n ≥ 1".into()))?;
        DynamicPair::new(state.n(), state.future().clone(), Real::Rational(y.clone()), prec)
    }
}

/// Three-valued region certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    Undecidable,
}

fn combine(conds: &[Option<Ordering>]) -> Membership {
    if conds.iter().all(|c| *c == Some(Ordering::Greater)) {
        Membership::Inside
    } else if conds.iter().any(|c| matches!(c, Some(Ordering::Less | Ordering::Equal))) {
        Membership::Outside
    } else {
        Membership::Undecidable
    }
}

/// `u > 0, v > 0, u + v < 1`.
pub fn in_gamma(u: &Real, v: &Real, prec: u32) -> Membership {
    let slack = Real::from_int(1).sub(&u.add(v, prec), prec);
    combine(&[u.signum(), v.signum(), slack.signum()])
}

/// `0 < x < 1` and `y < −1`.
pub fn in_omega(x: &Real, y: &Real, prec: u32) -> Membership {
    let one = Real::from_int(1);
    combine(&[
        x.signum(),
        one.sub(x, prec).signum(),
        Real::from_int(-1).sub(y, prec).signum(),
    ])
}

/// `q²·|x₀ − p/q|`.
///
/// With `tol_bits = Some(t)` an enclosure wider than `2^−t` is rejected with
/// `InsufficientPrecision`.
pub fn theta_by_definition(
    seed: &Seed,
    p: &BigInt,
    q: &BigInt,
    prec: u32,
    tol_bits: Option<u32>,
) -> Result<Real> {
    if !q.is_positive() {
        return Err(Error::Domain(format!("denominator {q} must be positive")));
    }
    let x0 = seed.value(prec);
    let pq = Real::Rational(BigRational::new(p.clone(), q.clone()));
    let q2 = Real::Rational(BigRational::from_integer(q * q));
    let theta = q2.mul(&x0.sub(&pq, prec).abs(), prec);
    if let (Some(t), Real::Interval(r)) = (tol_bits, &theta) {
        if r.width() > Dyadic::new(BigInt::from(1), -(t as i64)) {
            return Err(Error::InsufficientPrecision { bits: prec });
        }
    }
    Ok(theta)
}

/// `θ_{n−1} = 1/(x_n − y_n)`.
pub fn theta_by_perron(pair: &DynamicPair, prec: u32) -> Result<ThetaValue> {
    let t = pair.x.sub(&pair.y, prec).recip(prec)?;
    Ok(ThetaValue::new(pair.n - 1, t, Provenance::Perron))
}

/// `θ_n = −x_n·y_n/(x_n − y_n)`.
pub fn theta_second_form(pair: &DynamicPair, prec: u32) -> Result<ThetaValue> {
    let t = pair.x.mul(&pair.y, prec).neg().div(&pair.x.sub(&pair.y, prec), prec)?;
    Ok(ThetaValue::new(pair.n, t, Provenance::Perron))
}

/// `Ψ(x, y) = (1/(x − y), −xy/(x − y))`.
pub fn psi(pair: &DynamicPair, prec: u32) -> Result<JagerPair> {
    if in_omega(&pair.x, &pair.y, prec) != Membership::Inside {
        return Err(Error::RegionViolation(format!(
            "({}, {}) is not certified inside Ω",
            pair.x, pair.y
        )));
    }
    let u = theta_by_perron(pair, prec)?.value;
    let v = theta_second_form(pair, prec)?.value;
    JagerPair::new(pair.n, u, v, Provenance::Perron, prec)
}

/// `Ψ⁻¹(u, v) = ((1 − s)/(2u), −(1 + s)/(2u))` with `s = √(1 − 4uv)`.
pub fn psi_inv(u: &Real, v: &Real, n: usize, prec: u32) -> Result<DynamicPair> {
    if in_gamma(u, v, prec) != Membership::Inside {
        return Err(Error::RegionViolation(format!(
            "({u}, {v}) is not certified inside the triangle"
        )));
    }
    let s = radical(u, v, prec)?;
    let one = Real::from_int(1);
    let two_u = u.add(u, prec);
    let x = one.sub(&s, prec).div(&two_u, prec)?;
    let y = one.add(&s, prec).neg().div(&two_u, prec)?;
    Ok(DynamicPair { n, x, y })
}

/// [`psi_inv`] for a pair already known to be in `Γ`.
pub fn psi_inv_pair(jp: &JagerPair, prec: u32) -> Result<DynamicPair> {
    psi_inv(&jp.first.value, &jp.second.value, jp.n, prec)
}

/// `√(1 − 4uv)` for a point certified in `Γ`, where `1 − 4uv ≥ 1 − (u+v)² > 0`.
/// An enclosure of the radicand that dips below zero is clipped at zero.
fn radical(u: &Real, v: &Real, prec: u32) -> Result<Real> {
    let four = Real::from_int(4);
    let rad = Real::from_int(1).sub(&four.mul(&u.mul(v, prec), prec), prec);
    let rad = match rad {
        Real::Interval(r) if r.signum().is_none() => {
            Real::Interval(RigorousReal::new(Dyadic::zero(), r.upper().clone(), r.precision()))
        }
        other => other,
    };
    rad.sqrt(prec)
}

/// Working precision for a seed: decimal seeds are carried as tightly as
/// their literal allows.
pub fn working_precision(seed: &Seed, ctx: &PrecisionContext) -> u32 {
    match seed.info_bits() {
        None => ctx.initial_bits(),
        Some(info) => (info + 64)
            .min(ctx.max_bits() as u64)
            .max(ctx.initial_bits() as u64) as u32,
    }
}

fn perron_input(state: &ContinuedFractionState, k: usize, prec: u32) -> Result<DynamicPair> {
    let y = cfengine::past_of_prefix(&state.digits()[..k])?;
    let x = match state.seed() {
        Seed::Surd(_) => {
            // replay the exact orbit; cheap compared with the surrounding work
            let mut x = state.seed().value(prec);
            for a in &state.digits()[..k] {
                let a = Real::Rational(BigRational::from_integer(a.clone().into()));
                x = x.recip(prec)?.sub(&a, prec);
            }
            x
        }
        Seed::Decimal(_) => Real::Interval(cfengine::future_from_seed(state, k, prec)?),
    };
    Ok(DynamicPair {
        n: k,
        x,
        y: Real::Rational(y),
    })
}

/// Intersects two enclosures of the same quantity.
fn reconcile(index: usize, a: &Real, b: &Real, prec: u32) -> Result<Real> {
    if a.is_exact() && b.is_exact() {
        return if a == b {
            Ok(a.clone())
        } else {
            Err(Error::CrossCheckFailure {
                index,
                detail: format!("definition gives {a}, Perron gives {b}"),
            })
        };
    }
    let p = prec.max(a.precision()).max(b.precision());
    let (ea, eb) = (a.enclosure(p), b.enclosure(p));
    match ea.intersect(&eb) {
        Some(_) if a.is_exact() => Ok(a.clone()),
        Some(_) if b.is_exact() => Ok(b.clone()),
        Some(r) => Ok(Real::Interval(r)),
        None => Err(Error::CrossCheckFailure {
            index,
            detail: format!("definition gives {ea}, Perron gives {eb}"),
        }),
    }
}

/// `θ_0 … θ_N`, each computed by definition and by Perron's formula and
/// returned as the intersection of the two.
pub fn theta_sequence(seed: &Seed, n_max: usize, ctx: &PrecisionContext) -> Result<Vec<ThetaValue>> {
    let state = cfengine::expand(seed.clone(), n_max + 1, ctx)?;
    thetas_from_state(&state, n_max, ctx)
}

/// Like [`theta_sequence`] for an already expanded state (needs `N + 1` digits).
pub fn thetas_from_state(
    state: &ContinuedFractionState,
    n_max: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<ThetaValue>> {
    if state.n() < n_max + 1 {
        return Err(Error::Domain(format!(
            "θ_{n_max} needs {} digits, the state has {}",
            n_max + 1,
            state.n()
        )));
    }
    let prec = working_precision(state.seed(), ctx);
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let Convergent { p, q } = &state.convergents()[n];
        let by_def = theta_by_definition(state.seed(), p, q, prec, None)?;
        let pair = perron_input(state, n + 1, prec)?;
        let by_perron = theta_by_perron(&pair, prec)?.value;
        let value = reconcile(n, &by_def, &by_perron, prec)?;
        out.push(ThetaValue::new(n, value, Provenance::CrossChecked));
    }
    Ok(out)
}

/// Consecutive Jager pairs `(θ_{n−1}, θ_n)` for `n = 1..` from a θ sequence,
/// with their `Γ` certificates.
pub fn jager_pairs(thetas: &[ThetaValue], prec: u32) -> Vec<(usize, Real, Real, Membership)> {
    thetas
        .windows(2)
        .map(|w| {
            let m = in_gamma(&w[0].value, &w[1].value, prec);
            (w[1].index, w[0].value.clone(), w[1].value.clone(), m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::QuadraticSurd;

    fn surd(p: i64, d: i64, q: i64) -> Real {
        Real::Surd(QuadraticSurd::new(p, d, q).unwrap())
    }

    fn rat(n: i64, d: i64) -> Real {
        Real::Rational(BigRational::new(n.into(), d.into()))
    }

    fn golden() -> Seed {
        Seed::surd(QuadraticSurd::new(-1, 5, 2).unwrap()).unwrap()
    }

    #[test]
    fn definition_for_golden_first_convergent() {
        let t = theta_by_definition(&golden(), &1.into(), &1.into(), 64, None).unwrap();
        assert_eq!(t, surd(-3, 5, -2));
        assert!((t.to_f64() - 0.381966).abs() < 1e-6);
    }

    #[test]
    fn perron_on_fixed_points() {
        let x = surd(-1, 2, 1);
        let y = Real::from_int(-2).sub(&x, 64);
        let pair = DynamicPair::new(1, x, y, 64).unwrap();
        let t = theta_by_perron(&pair, 64).unwrap().value;
        // 1/(2√2) = √8/8
        assert_eq!(t, surd(0, 8, 8));

        let pair = DynamicPair::new(1, surd(-1, 5, 2), surd(1, 5, -2), 64).unwrap();
        let t = theta_by_perron(&pair, 64).unwrap().value;
        assert_eq!(t, surd(0, 5, 5));
        let jp = psi(&pair, 64).unwrap();
        assert_eq!(jp.first.value, surd(0, 5, 5));
        assert_eq!(jp.second.value, surd(0, 5, 5));
        let back = psi_inv_pair(&jp, 64).unwrap();
        assert_eq!((back.x, back.y), (pair.x, pair.y));
    }

    #[test]
    fn gamma_certificates() {
        assert_eq!(in_gamma(&rat(1, 5), &rat(3, 10), 64), Membership::Inside);
        assert_eq!(in_gamma(&rat(3, 5), &rat(1, 2), 64), Membership::Outside);
        assert_eq!(in_gamma(&rat(1, 2), &rat(1, 2), 64), Membership::Outside);
        let fuzzy = Real::Interval(RigorousReal::from_rational_bounds(
            &BigRational::new(49.into(), 100.into()),
            &BigRational::new(51.into(), 100.into()),
            64,
        ));
        assert_eq!(in_gamma(&fuzzy, &rat(1, 2), 64), Membership::Undecidable);
    }

    #[test]
    fn psi_rejects_points_outside_omega() {
        let bad = DynamicPair {
            n: 1,
            x: rat(1, 2),
            y: rat(-1, 2),
        };
        assert!(matches!(psi(&bad, 64), Err(Error::RegionViolation(_))));
        assert!(matches!(
            psi_inv(&rat(3, 5), &rat(1, 2), 1, 64),
            Err(Error::RegionViolation(_))
        ));
    }

    #[test]
    fn golden_sequence_is_exact_and_tends_to_hurwitz() {
        let th = theta_sequence(&golden(), 25, &PrecisionContext::default()).unwrap();
        assert!(th.iter().all(|t| t.value.is_exact()));
        let limit = 5f64.powf(-0.5);
        assert!((th[25].value.to_f64() - limit).abs() < 1e-9);
        assert!((th[0].value.to_f64() - 0.618034).abs() < 1e-6);
    }

    #[test]
    fn sqrt2_sequence_alternates_around_limit() {
        let th = theta_sequence(
            &Seed::surd(QuadraticSurd::new(-1, 2, 1).unwrap()).unwrap(),
            5,
            &PrecisionContext::default(),
        )
        .unwrap();
        let limit = 1.0 / (2.0 * 2f64.sqrt());
        let signs: Vec<bool> = th.iter().map(|t| t.value.to_f64() > limit).collect();
        assert!(signs.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn pi_sequence_first_values() {
        let seed = Seed::decimal(crate::fixtures::PI_MINUS_3.trim()).unwrap();
        let th = theta_sequence(&seed, 11, &PrecisionContext::default()).unwrap();
        let expect = [
            0.14159265, 0.061959974, 0.93505573, 0.0034063119, 0.63321927, 0.36586381,
            0.53811724, 0.28871241, 0.61380487, 0.21448855, 0.74749, 0.065897,
        ];
        for (t, e) in th.iter().zip(expect) {
            assert!((t.value.to_f64() - e).abs() < 1e-4 * e, "θ_{} = {}", t.index, t.value);
        }
    }
}
