use std::cmp::Ordering;
use std::fmt::Write as _;

use contfrac::cfengine::{self, ContinuedFractionState, Seed};
use contfrac::jager::{self, Membership};
use contfrac::oracle;
use contfrac::symmetry::{self, Reconstruction};
use contfrac::{Error, PrecisionContext, Real, RigorousReal};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::seed_spec::SeedSpec;
use crate::{CliError, Format};

/// Decimals written for θ enclosures in JSON.
pub const JSON_DIGITS: usize = 60;

fn check_format(format: Format, allowed: &[Format], cmd: &str) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::usage(format!("{cmd} does not support --format {format:?}")))
    }
}

fn digit_json(a: &BigUint) -> Value {
    match a.to_u64() {
        Some(v) => json!(v),
        None => json!(a.to_string()),
    }
}

fn upper(x: &Real, digits: usize) -> String {
    x.decimal_bounds(digits).1
}

pub fn expand(
    spec: &SeedSpec,
    terms: usize,
    format: Format,
    allow_partial: bool,
    ctx: &PrecisionContext,
) -> Result<String, CliError> {
    check_format(format, &[Format::Table, Format::Json], "expand")?;
    let seed = spec.to_seed()?;
    let (state, err) = cfengine::expand_partial(seed, terms, ctx);
    let out = render_expansion(spec, &state, format);
    match err {
        None => Ok(out),
        Some(e) => {
            let mut ce = CliError::from(e);
            if allow_partial {
                ce.partial = Some(out);
            }
            Err(ce)
        }
    }
}

fn render_expansion(spec: &SeedSpec, state: &ContinuedFractionState, format: Format) -> String {
    let conv = &state.convergents()[1..];
    match format {
        Format::Json => {
            let v = json!({
                "seed": spec.to_string(),
                "digits": state.digits().iter().map(digit_json).collect::<Vec<_>>(),
                "convergents": conv.iter().map(|c| json!({"p": c.p.to_string(), "q": c.q.to_string()})).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&v).expect("serializable")
        }
        _ => {
            let mut s = format!("seed: {spec}\n{:>4}  {:>8}  convergent\n", "n", "a_n");
            for (k, (a, c)) in state.digits().iter().zip(conv).enumerate() {
                let _ = writeln!(s, "{:>4}  {:>8}  {}/{}", k + 1, a, c.p, c.q);
            }
            s
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ThetaEntry {
    pub n: usize,
    pub lower: String,
    pub upper: String,
}

impl ThetaEntry {
    fn of(n: usize, x: &Real, digits: usize) -> Self {
        let (lower, upper) = x.decimal_bounds(digits);
        ThetaEntry { n, lower, upper }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ThetaReport {
    pub seed: String,
    pub entries: Vec<ThetaEntry>,
}

fn theta_values(seed: &Seed, terms: usize, ctx: &PrecisionContext) -> Result<Vec<Real>, Error> {
    if terms == 0 {
        return Ok(Vec::new());
    }
    Ok(jager::theta_sequence(seed, terms - 1, ctx)?
        .into_iter()
        .map(|t| t.value)
        .collect())
}

fn theta_table(thetas: impl IntoIterator<Item = (usize, Real)>, digits: usize) -> String {
    let mut s = format!("{:>4}  theta_n (upper bound)\n", "n");
    for (n, t) in thetas {
        let _ = writeln!(s, "{n:>4}  {}", upper(&t, digits));
    }
    s
}

pub fn theta(
    spec: &SeedSpec,
    terms: usize,
    digits: usize,
    format: Format,
    ctx: &PrecisionContext,
) -> Result<String, CliError> {
    check_format(format, &[Format::Table, Format::Json], "theta")?;
    let seed = spec.to_seed()?;
    let th = theta_values(&seed, terms, ctx)?;
    Ok(match format {
        Format::Json => {
            let report = ThetaReport {
                seed: spec.to_string(),
                entries: th
                    .iter()
                    .enumerate()
                    .map(|(n, t)| ThetaEntry::of(n, t, digits.max(JSON_DIGITS)))
                    .collect(),
            };
            serde_json::to_string_pretty(&report).expect("serializable")
        }
        _ => format!("seed: {spec}\n{}", theta_table(th.into_iter().enumerate(), digits)),
    })
}

/// `[-]ddd.ddd` as an exact rational, with the number of fractional digits.
fn decimal_rational(text: &str) -> Result<(BigRational, usize), CliError> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())
    {
        return Err(CliError::usage(format!("malformed decimal {t:?}")));
    }
    let digits: BigInt = format!("{int}{frac}").parse().expect("ascii digits");
    let scale = BigInt::from(10u32).pow(frac.len() as u32);
    let value = BigRational::new(if neg { -digits } else { digits }, scale);
    Ok((value, frac.len()))
}

fn bits_for_decimals(k: usize) -> u32 {
    (k as f64 * std::f64::consts::LOG2_10) as u32 + 64
}

/// A decimal literal read as an enclosure of half-width one unit in the
/// last place; integers are exact.
pub fn parse_decimal(text: &str, prec: u32) -> Result<Real, CliError> {
    let (center, k) = decimal_rational(text)?;
    if k == 0 {
        return Ok(Real::Rational(center));
    }
    let radius = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(k as u32));
    Ok(Real::Interval(RigorousReal::from_rational_bounds(
        &(&center - &radius),
        &(&center + &radius),
        prec.max(bits_for_decimals(k)),
    )))
}

/// An enclosure given by its decimal endpoints.
fn parse_bounds(lower: &str, upper: &str, prec: u32) -> Result<Real, CliError> {
    let (lo, k1) = decimal_rational(lower)?;
    let (hi, k2) = decimal_rational(upper)?;
    if lo > hi {
        return Err(CliError::usage(format!("lower bound {lower} exceeds upper bound {upper}")));
    }
    let prec = prec.max(bits_for_decimals(k1.max(k2)));
    Ok(Real::Interval(RigorousReal::from_rational_bounds(&lo, &hi, prec)))
}

pub enum PairSource {
    Literal(String, String),
    ThetaJson(String),
}

#[allow(clippy::too_many_arguments)]
pub fn recover(
    source: PairSource,
    at: usize,
    back: usize,
    fwd: usize,
    digits: usize,
    format: Format,
    ctx: &PrecisionContext,
) -> Result<String, CliError> {
    check_format(format, &[Format::Table, Format::Json], "recover")?;
    let prec = ctx.initial_bits();
    let (u, v, label) = match &source {
        PairSource::Literal(u, v) => (parse_decimal(u, prec)?, parse_decimal(v, prec)?, vec![u.clone(), v.clone()]),
        PairSource::ThetaJson(text) => {
            let report: ThetaReport = serde_json::from_str(text)
                .map_err(|e| CliError::usage(format!("theta JSON: {e}")))?;
            let find = |n: usize| {
                report
                    .entries
                    .iter()
                    .find(|e| e.n == n)
                    .ok_or_else(|| CliError::usage(format!("theta JSON has no entry for n = {n}")))
            };
            let (a, b) = (find(at)?, find(at + 1)?);
            (
                parse_bounds(&a.lower, &a.upper, prec)?,
                parse_bounds(&b.lower, &b.upper, prec)?,
                vec![a.upper.clone(), b.upper.clone()],
            )
        }
    };
    for x in [&u, &v] {
        if x.signum() != Some(Ordering::Greater) {
            return Err(CliError::from(Error::Domain(format!("{x} is not a positive coefficient"))));
        }
    }
    let rad = Real::from_int(1).sub(&Real::from_int(4).mul(&u.mul(&v, prec), prec), prec);
    if rad.signum() != Some(Ordering::Greater) {
        return Err(CliError::from(Error::Domain("4·u·v ≥ 1: the pair is not a θ pair".into())));
    }
    match symmetry::reconstruct(&u, &v, at, back, fwd, ctx) {
        Ok(r) => Ok(render_recovery(&label, at, &r, digits, format)),
        Err(e) => {
            let mut ce = CliError::from(e.source.clone());
            ce.message = format!("{e}");
            ce.partial = Some(render_recovery(&label, at, &e.partial, digits, format));
            Err(ce)
        }
    }
}

fn render_recovery(pair: &[String], at: usize, r: &Reconstruction, digits: usize, format: Format) -> String {
    match format {
        Format::Json => {
            let v = json!({
                "pair": pair,
                "at": at,
                "digits": r.digits.iter().map(|d| json!({"index": d.index, "value": digit_json(&d.value)})).collect::<Vec<_>>(),
                "thetas": r.thetas.iter().enumerate().map(|(k, t)| ThetaEntry::of(r.start + k, t, digits.max(JSON_DIGITS))).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&v).expect("serializable")
        }
        _ => {
            let mut s = String::new();
            match (r.digits.first(), r.digits.last()) {
                (Some(f), Some(l)) => {
                    let ds: Vec<String> = r.digits.iter().map(|d| d.value.to_string()).collect();
                    let _ = writeln!(s, "digits a_{}..a_{}: {}", f.index, l.index, ds.join(" "));
                }
                _ => s.push_str("digits: none\n"),
            }
            s.push_str(&theta_table(
                r.thetas.iter().enumerate().map(|(k, t)| (r.start + k, t.clone())),
                digits,
            ));
            s
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerifyReport {
    pub seed: String,
    pub terms: usize,
    pub checks: Vec<Check>,
    /// Smallest θ_n over the whole range.
    pub min_theta: Option<String>,
    /// Smallest θ_n over the second half of the range, a liminf estimate.
    pub tail_min_theta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.pass)
    }
}

/// Certified `a < b`, escalating precision while undecided; `None` if the
/// comparison never resolves.
fn less(a: &Real, b: &Real, ctx: &PrecisionContext) -> Option<bool> {
    let start = ctx.initial_bits().max(a.precision()).max(b.precision());
    let cap = ctx.max_bits().min(1 << 16).max(start);
    let mut bits = start;
    loop {
        match a.cmp_certified(b, bits) {
            Some(o) => return Some(o == Ordering::Less),
            None if bits < cap && (a.is_exact() || b.is_exact()) => {
                bits = bits.saturating_mul(ctx.growth_factor()).min(cap)
            }
            None => return None,
        }
    }
}

fn int(a: &BigUint) -> Real {
    Real::Rational(BigRational::from_integer(BigInt::from(a.clone())))
}

fn fmt6(x: &Real) -> String {
    format!("{:.6}", x.to_f64())
}

struct Tally {
    name: &'static str,
    checked: usize,
    failure: Option<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            failure: None,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, ok: Option<bool>, what: impl FnOnce() -> String) {
        self.checked += 1;
        if ok != Some(true) && self.failure.is_none() {
            let tag = if ok.is_none() { " (undecided)" } else { "" };
            self.failure = Some(format!("{}{tag}", what()));
        }
    }

    fn finish(self) -> Check {
        let witness = match &self.failure {
            Some(f) => f.clone(),
            None if self.notes.is_empty() => format!("{} cases", self.checked),
            None => format!("{} cases; {}", self.checked, self.notes.join("; ")),
        };
        Check {
            name: self.name,
            pass: self.failure.is_none(),
            witness,
        }
    }
}

pub fn verify_seed(spec: &SeedSpec, terms: usize, ctx: &PrecisionContext) -> VerifyReport {
    let mut report = VerifyReport {
        seed: spec.to_string(),
        terms,
        checks: Vec::new(),
        min_theta: None,
        tail_min_theta: None,
        error: None,
    };
    let run = || -> Result<(Vec<Real>, Vec<BigUint>), Error> {
        let seed = spec.to_seed()?;
        let state = cfengine::expand(seed, terms + 1, ctx)?;
        let th = jager::thetas_from_state(&state, terms.saturating_sub(1), ctx)?;
        Ok((th.into_iter().map(|t| t.value).collect(), state.digits().to_vec()))
    };
    let (th, a) = match run() {
        Ok(v) => v,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let one = Real::from_int(1);
    let zero = Real::from_int(0);
    let half = Real::Rational(BigRational::new(1.into(), 2.into()));
    let hurwitz = Real::from_int(5).sqrt(ctx.initial_bits()).and_then(|s| s.recip(ctx.initial_bits()));
    let hurwitz = hurwitz.expect("√5 is positive");
    let a1_is_one = a.first().is_some_and(|d| d.is_one());

    let mut unit = Tally::new("theta_in_unit_interval");
    for (n, t) in th.iter().enumerate() {
        let ok = less(&zero, t, ctx).zip(less(t, &one, ctx)).map(|(x, y)| x && y);
        unit.record(ok, || format!("θ_{n} = {}", fmt6(t)));
    }

    let mut sum = Tally::new("sum_below_one");
    let mut tri = Tally::new("triangle");
    let mut vahlen = Tally::new("vahlen");
    for n in 1..th.len() {
        let s = th[n - 1].add(&th[n], ctx.initial_bits());
        if n == 1 && a1_is_one {
            // θ_0 = x_0 and θ_1 = 1 − x_0: the pair sits on the edge of the triangle
            let on_edge = s == one || s.cmp_certified(&one, ctx.initial_bits()).is_none();
            sum.record(Some(on_edge), || format!("θ_0 + θ_1 = {} with a_1 = 1", fmt6(&s)));
            tri.record(Some(on_edge), || "(θ_0, θ_1) with a_1 = 1 off the edge u + v = 1".to_string());
            sum.notes.push("θ_0 + θ_1 = 1 exactly since a_1 = 1".into());
            tri.notes.push("(θ_0, θ_1) on the edge since a_1 = 1".into());
        } else {
            sum.record(less(&s, &one, ctx), || format!("θ_{} + θ_{n} = {}", n - 1, fmt6(&s)));
            let m = jager::in_gamma(&th[n - 1], &th[n], ctx.initial_bits());
            let ok = match m {
                Membership::Inside => Some(true),
                Membership::Outside => Some(false),
                Membership::Undecidable => None,
            };
            tri.record(ok, || format!("(θ_{}, θ_{n}) = ({}, {})", n - 1, fmt6(&th[n - 1]), fmt6(&th[n])));
        }
        let ok = less(&th[n - 1], &half, ctx)
            .zip(less(&th[n], &half, ctx))
            .map(|(x, y)| x || y);
        vahlen.record(ok, || format!("min(θ_{}, θ_{n}) ≥ 1/2", n - 1));
    }

    let mut borel = Tally::new("borel");
    let mut tong = Tally::new("bagemihl_mclaughlin_tong");
    for n in 1..th.len().saturating_sub(1) {
        let triple = [&th[n - 1], &th[n], &th[n + 1]];
        let below = |b: &Real| -> Option<bool> {
            let r: Vec<Option<bool>> = triple.iter().map(|t| less(t, b, ctx)).collect();
            if r.contains(&Some(true)) {
                Some(true)
            } else if r.iter().all(|x| *x == Some(false)) {
                Some(false)
            } else {
                None
            }
        };
        borel.record(below(&hurwitz), || format!("min(θ_{}..θ_{}) ≥ 1/√5", n - 1, n + 1));
        let p = ctx.initial_bits();
        let an = int(&a[n]);
        let bound = an
            .mul(&an, p)
            .add(&Real::from_int(4), p)
            .sqrt(p)
            .and_then(|s| s.recip(p))
            .expect("a² + 4 > 0");
        let above = {
            let r: Vec<Option<bool>> = triple.iter().map(|t| less(&bound, t, ctx)).collect();
            if r.contains(&Some(true)) {
                Some(true)
            } else if r.iter().all(|x| *x == Some(false)) {
                Some(false)
            } else {
                None
            }
        };
        let ok = below(&bound).zip(above).map(|(x, y)| x && y);
        tong.record(ok, || format!("(a_{}² + 4)^(−1/2) not bracketed by θ_{}..θ_{}", n + 1, n - 1, n + 1));
    }

    let mut digits = Tally::new("digit_recovery");
    for n in 1..th.len().saturating_sub(1) {
        let want = &a[n];
        let future = symmetry::digit_from_pair(&th[n + 1], &th[n], ctx);
        digits.record(Some(future.as_ref().ok() == Some(want)), || {
            format!("a_{} from (θ_{}, θ_{n}): {future:?}, expansion {want}", n + 1, n + 1)
        });
        match symmetry::digit_from_pair(&th[n - 1], &th[n], ctx) {
            Err(e) if n == 1 && a1_is_one && e.is_precision() => {
                digits.notes.push("past-side a_2 skipped: (θ_0, θ_1) on the floor boundary".into());
            }
            past => digits.record(Some(past.as_ref().ok() == Some(want)), || {
                format!("a_{} from (θ_{}, θ_{n}): {past:?}, expansion {want}", n + 1, n - 1)
            }),
        }
    }

    report.checks = vec![
        unit.finish(),
        sum.finish(),
        vahlen.finish(),
        borel.finish(),
        tong.finish(),
        tri.finish(),
        digits.finish(),
    ];
    let min_of = |xs: &[Real]| {
        xs.iter()
            .min_by(|x, y| x.to_f64().total_cmp(&y.to_f64()))
            .map(|m| m.decimal_bounds(10).0)
    };
    report.min_theta = min_of(&th);
    report.tail_min_theta = min_of(&th[th.len() / 2..]);
    report
}

fn render_verify(r: &VerifyReport) -> String {
    let mut s = format!("seed: {}  terms: {}\n", r.seed, r.terms);
    if let Some(e) = &r.error {
        let _ = writeln!(s, "error: {e}");
        return s;
    }
    for c in &r.checks {
        let _ = writeln!(s, "{:<26} {:<4}  {}", c.name, if c.pass { "pass" } else { "FAIL" }, c.witness);
    }
    if let (Some(m), Some(t)) = (&r.min_theta, &r.tail_min_theta) {
        let _ = writeln!(s, "min theta: {m}  tail min theta: {t}");
    }
    s
}

pub fn verify(
    specs: &[SeedSpec],
    terms: usize,
    format: Format,
    ctx: &PrecisionContext,
) -> Result<String, CliError> {
    check_format(format, &[Format::Table, Format::Json], "verify")?;
    let reports: Vec<VerifyReport> = specs.par_iter().map(|s| verify_seed(s, terms, ctx)).collect();
    let out = match format {
        Format::Json if reports.len() == 1 => serde_json::to_string_pretty(&reports[0]),
        Format::Json => serde_json::to_string_pretty(&reports),
        _ => Ok(reports.iter().map(render_verify).collect::<Vec<_>>().join("\n")),
    }
    .expect("serializable");
    if reports.iter().all(VerifyReport::passed) {
        Ok(out)
    } else {
        Err(CliError {
            code: 1,
            message: "verification failed".into(),
            partial: Some(out),
        })
    }
}

pub fn parse_seeds_file(text: &str) -> Result<Vec<SeedSpec>, CliError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse::<SeedSpec>().map_err(CliError::usage))
        .collect()
}

pub fn jager_pairs(
    spec: &SeedSpec,
    terms: usize,
    digits: usize,
    format: Format,
    ctx: &PrecisionContext,
) -> Result<String, CliError> {
    check_format(format, &[Format::Csv, Format::Json], "jager")?;
    let seed = spec.to_seed()?;
    let th = theta_values(&seed, terms, ctx)?;
    let rows: Vec<(usize, Real, Real, Membership)> = th
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            let m = jager::in_gamma(&w[0], &w[1], ctx.initial_bits());
            (k + 1, w[0].clone(), w[1].clone(), m)
        })
        .collect();
    let label = |m: Membership| match m {
        Membership::Inside => "inside",
        Membership::Outside => "outside",
        Membership::Undecidable => "undecidable",
    };
    Ok(match format {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|(n, u, v, m)| {
                    json!({"n": n, "theta_prev": upper(u, digits), "theta_n": upper(v, digits), "in_gamma": label(*m)})
                })
                .collect();
            serde_json::to_string_pretty(&json!({"seed": spec.to_string(), "pairs": v})).expect("serializable")
        }
        _ => {
            let mut s = String::from("n,theta_prev,theta_n,in_gamma\n");
            for (n, u, v, m) in &rows {
                let _ = writeln!(s, "{n},{},{},{}", upper(u, digits), upper(v, digits), label(*m));
            }
            s
        }
    })
}

pub fn crosscheck(spec: &SeedSpec, terms: usize, ctx: &PrecisionContext) -> Result<String, CliError> {
    let seed = spec.to_seed()?;
    let report = oracle::crosscheck(&seed, terms.max(1) - 1, ctx);
    let out = serde_json::to_string_pretty(&report).expect("serializable");
    if report.all_ok() {
        Ok(out)
    } else {
        Err(CliError {
            code: 1,
            message: "oracle mismatch".into(),
            partial: Some(out),
        })
    }
}
