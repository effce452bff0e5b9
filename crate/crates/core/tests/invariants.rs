use std::cmp::Ordering;

use contfrac::cfengine::{self, Seed};
use contfrac::jager::{self, Membership};
use contfrac::oracle;
use contfrac::symmetry;
use contfrac::{PrecisionContext, QuadraticSurd, Real};
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

const PREC: u32 = 1024;

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

/// `(P + √D)/Q` in (0,1): with `P = j − ⌊√D⌋`, `0 ≤ j < Q`, the numerator is
/// `j + frac(√D) ∈ (0, Q)`.
fn surd_in_unit() -> impl Strategy<Value = Seed> {
    (2i64..5000, 1i64..40)
        .prop_filter("non-square", |(d, _)| {
            let r = (*d as f64).sqrt() as i64;
            r * r != *d && (r + 1) * (r + 1) != *d
        })
        .prop_flat_map(|(d, q)| (Just(d), Just(q), 0..q))
        .prop_map(|(d, q, j)| {
            let r = (d as f64).sqrt() as i64;
            Seed::surd(QuadraticSurd::new(j - r, d, q).unwrap()).unwrap()
        })
}

fn thetas(seed: &Seed, n: usize) -> (Vec<Real>, Vec<BigUint>) {
    let state = cfengine::expand(seed.clone(), n + 2, &ctx()).unwrap();
    let th = jager::thetas_from_state(&state, n, &ctx())
        .unwrap()
        .into_iter()
        .map(|t| t.value)
        .collect();
    (th, state.digits().to_vec())
}

fn lt(a: &Real, b: &Real) -> bool {
    a.cmp_certified(b, PREC) == Some(Ordering::Less)
}

fn r(n: i64, d: i64) -> Real {
    Real::Rational(BigRational::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theta_bounds_and_classical_inequalities(seed in surd_in_unit()) {
        let (th, a) = thetas(&seed, 20);
        let one = Real::from_int(1);
        let half = r(1, 2);
        let hurwitz = Real::from_int(5).sqrt(PREC).unwrap().recip(PREC).unwrap();
        for t in &th {
            prop_assert!(t.signum() == Some(Ordering::Greater) && lt(t, &one));
        }
        for n in 1..th.len() {
            let sum = th[n - 1].add(&th[n], PREC);
            if n == 1 && a[0] == BigUint::from(1u32) {
                // θ_0 = x_0 and θ_1 = 1 − x_0
                prop_assert_eq!(sum, one.clone());
            } else {
                prop_assert!(lt(&sum, &one), "n={}", n);
            }
            let m = if lt(&th[n - 1], &th[n]) { &th[n - 1] } else { &th[n] };
            prop_assert!(lt(m, &half));
        }
        for n in 1..th.len() - 1 {
            let three = [&th[n - 1], &th[n], &th[n + 1]];
            prop_assert!(three.iter().any(|t| lt(t, &hurwitz)));
            // a_{n+1} = a[n]
            let an = Real::Rational(BigRational::from_integer(a[n].clone().into()));
            let bound = an.mul(&an, PREC).add(&Real::from_int(4), PREC).sqrt(PREC).unwrap().recip(PREC).unwrap();
            prop_assert!(three.iter().any(|t| lt(t, &bound)), "n={}", n);
            prop_assert!(three.iter().any(|t| lt(&bound, t)), "n={}", n);
        }
    }

    #[test]
    fn digit_recovery_matches_expansion(seed in surd_in_unit()) {
        let (th, a) = thetas(&seed, 15);
        for n in 1..15 {
            let past = symmetry::digit_from_pair(&th[n - 1], &th[n], &ctx()).unwrap();
            let future = symmetry::digit_from_pair(&th[n + 1], &th[n], &ctx()).unwrap();
            prop_assert_eq!(&past, &a[n]);
            prop_assert_eq!(&future, &a[n]);
        }
        let d = symmetry::digit_sequence_from_thetas(&th, &ctx()).unwrap();
        prop_assert_eq!(&d[..], &a[1..=15]);
    }

    #[test]
    fn exact_involution_and_round_trip(seed in surd_in_unit(), at in 1usize..10) {
        let (th, a) = thetas(&seed, 14);
        let next = symmetry::dk_step(&th[at - 1], &th[at], &a[at], PREC).unwrap();
        prop_assert_eq!(&next, &th[at + 1]);
        prop_assert_eq!(symmetry::dk_step(&next, &th[at], &a[at], PREC).unwrap(), th[at - 1].clone());
        let rec = symmetry::reconstruct(&th[at], &th[at + 1], at, at, 13 - at, &ctx()).unwrap();
        prop_assert_eq!(rec.start, 0);
        prop_assert_eq!(&rec.thetas, &th);
    }

    #[test]
    fn psi_round_trip_on_orbit(seed in surd_in_unit(), n in 1usize..12) {
        let state = cfengine::expand(seed, n, &ctx()).unwrap();
        // y_1 = −1 lies on the edge of Ω when a_1 = 1
        prop_assume!(n > 1 || state.digits()[0] != BigUint::from(1u32));
        let dp = jager::DynamicPair::from_state(&state, PREC).unwrap();
        let jp = jager::psi(&dp, PREC).unwrap();
        let back = jager::psi_inv_pair(&jp, PREC).unwrap();
        prop_assert_eq!(back.x, dp.x);
        prop_assert_eq!(back.y, dp.y);
    }

    #[test]
    fn psi_inv_then_psi_on_random_triangle_points(u in 1i64..999, v in 1i64..999) {
        prop_assume!(u + v < 1000);
        let (u, v) = (r(u, 1000), r(v, 1000));
        prop_assert_eq!(jager::in_gamma(&u, &v, PREC), Membership::Inside);
        let dp = jager::psi_inv(&u, &v, 1, PREC).unwrap();
        let jp = jager::psi(&dp, PREC).unwrap();
        for (got, want) in [(&jp.first.value, &u), (&jp.second.value, &v)] {
            let p = got.precision().max(PREC);
            prop_assert!(got.enclosure(p).overlaps(&want.enclosure(p)));
        }
    }

    #[test]
    fn natural_extension_tracks_state(seed in surd_in_unit(), n in 1usize..15) {
        let s = cfengine::expand(seed, n + 1, &ctx()).unwrap();
        let y = cfengine::past_of_prefix(&s.digits()[..n]).unwrap();
        let prev = cfengine::expand(s.seed().clone(), n, &ctx()).unwrap();
        let (x1, y1) = cfengine::natural_extension_step(prev.future(), &Real::Rational(y), PREC).unwrap();
        prop_assert_eq!(&x1, s.future());
        prop_assert_eq!(y1, Real::Rational(s.past().unwrap().clone()));
    }
}

#[test]
fn quadratic_seeds_are_eventually_periodic() {
    for d in 2u64..200 {
        if let Some(Seed::Surd(s)) = oracle::sqrt_fraction_seed(d) {
            let p = cfengine::detect_period(&s, 1000).expect("periodic");
            assert!(p.length >= 1);
        }
    }
}

#[test]
fn oracle_batch_over_square_roots() {
    let seeds: Vec<Seed> = (2..=50).filter_map(oracle::sqrt_fraction_seed).collect();
    assert_eq!(seeds.len(), 49 - 6);
    for r in oracle::crosscheck_batch(&seeds, 100, &ctx()) {
        assert!(r.all_ok(), "{}: {:?}", r.seed, r.errors);
    }
}

#[test]
fn golden_oracle_report() {
    let g = Seed::surd(QuadraticSurd::new(-1, 5, 2).unwrap()).unwrap();
    let r = oracle::crosscheck(&g, 50, &ctx());
    assert!(r.all_ok());
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["entries"].as_array().unwrap().len(), 51);
    assert_eq!(json["range"], serde_json::json!([0, 50]));
}
