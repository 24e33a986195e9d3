//! Artin contractibility and the negative-curve classifier.
//!
//! [`artin_test`] checks the two numerical criteria for contracting a
//! connected bunch of curves on a surface that is smooth along them: a
//! negative definite intersection matrix, and nonpositive arithmetic genus of
//! every effective cycle supported on the bunch. The second condition is
//! checked exhaustively for cycles bounded by a multiple of the fundamental
//! cycle, so verdicts are relative to that bound.
//!
//! [`classify_negative_curve`] evaluates the numerical classification of a
//! curve `E` with `E^2 < 0` and `(K + Delta).E < 0` against an orbifold
//! boundary with SNC support.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{is_negative_definite, QVector};
use crate::orbifold::{pair_degree, Coefficient, OrbifoldDivisor, PairDegreeReport};
use crate::rational::Rational;
use crate::surface::{CurveConfig, CurveId, Cycle};

pub const DEFAULT_BOUND_MULTIPLIER: u64 = 2;

/// Upper bound on Laufer iterations; unreachable for negative definite input.
const LAUFER_ITERATION_GUARD: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionVerdict {
    pub negative_definite: bool,
    pub fundamental_cycle: Option<Cycle>,
    pub fundamental_genus: Option<Rational>,
    pub cycles_checked: u64,
    pub max_cycle_genus: Option<Rational>,
    /// Relative to `bound_multiplier`.
    pub contractible: bool,
    pub bound_multiplier: u64,
}

/// Laufer's fundamental cycle on a negative definite support.
pub fn fundamental_cycle(config: &CurveConfig, support: &[CurveId]) -> Result<Cycle> {
    let sub = config.restrict(support)?;
    if sub.is_empty() || !is_negative_definite(&sub.form)? {
        return Err(Error::NotNegativeDefinite(
            support.iter().map(|c| c.0.clone()).collect(),
        ));
    }
    let n = sub.len();
    let mut z = QVector(vec![Rational::one(); n]);
    let mut zc = sub.form.mul_vec(&z)?;
    for _ in 0..LAUFER_ITERATION_GUARD {
        let Some(j) = (0..n).find(|&j| zc[j].is_positive()) else {
            let coeffs = sub
                .curves
                .iter()
                .zip(z.iter())
                .map(|(c, m)| {
                    let m = m.to_i64().expect("integral cycle");
                    (c.clone(), m as u64)
                })
                .collect();
            return Ok(Cycle { coeffs });
        };
        z[j] += Rational::one();
        for i in 0..n {
            let delta = sub.form[(i, j)].clone();
            zc[i] += delta;
        }
    }
    Err(Error::NotNegativeDefinite(
        support.iter().map(|c| c.0.clone()).collect(),
    ))
}

/// Both Artin criteria, the second checked on every `0 < Z <= k Z_f`.
pub fn artin_test(
    config: &CurveConfig,
    support: &[CurveId],
    bound_multiplier: u64,
) -> Result<ContractionVerdict> {
    if bound_multiplier == 0 {
        return Err(Error::InvalidArgument(
            "bound multiplier must be at least 1".into(),
        ));
    }
    let sub = config.restrict(support)?;
    let negative_definite = !sub.is_empty() && is_negative_definite(&sub.form)?;
    if !negative_definite {
        return Ok(ContractionVerdict {
            negative_definite,
            fundamental_cycle: None,
            fundamental_genus: None,
            cycles_checked: 0,
            max_cycle_genus: None,
            contractible: false,
            bound_multiplier,
        });
    }
    let zf = fundamental_cycle(&sub, &sub.curves)?;
    let zf_vec = zf.to_vector(&sub)?;
    let fundamental_genus = sub.arithmetic_genus(&zf_vec)?;

    let bounds: Vec<u64> = zf.coeffs.iter().map(|(_, m)| m * bound_multiplier).collect();
    let (checked, max_genus) = match integral_form(&sub) {
        Some((m, k)) => scan_integral(&m, &k, &bounds),
        None => scan_rational(&sub, &bounds)?,
    };
    let contractible = max_genus.as_ref().is_some_and(|g| !g.is_positive());
    Ok(ContractionVerdict {
        negative_definite,
        fundamental_cycle: Some(zf),
        fundamental_genus: Some(fundamental_genus),
        cycles_checked: checked,
        max_cycle_genus: max_genus,
        contractible,
        bound_multiplier,
    })
}

fn integral_form(sub: &CurveConfig) -> Option<(Vec<Vec<i64>>, Vec<i64>)> {
    let m = sub
        .form
        .rows()
        .iter()
        .map(|row| row.iter().map(Rational::to_i64).collect())
        .collect::<Option<Vec<Vec<i64>>>>()?;
    let k = sub
        .kdeg
        .iter()
        .map(Rational::to_i64)
        .collect::<Option<Vec<i64>>>()?;
    Some((m, k))
}

/// Odometer over `0 < Z <= bounds` keeping `M Z`, `Z^2` and `K.Z` up to date.
fn scan_integral(m: &[Vec<i64>], k: &[i64], bounds: &[u64]) -> (u64, Option<Rational>) {
    let n = bounds.len();
    let mut z = vec![0i128; n];
    let mut mz = vec![0i128; n];
    let (mut zz, mut kz) = (0i128, 0i128);
    let mut checked = 0u64;
    let mut best: Option<i128> = None;
    'outer: loop {
        let mut i = 0;
        loop {
            if i == n {
                break 'outer;
            }
            if z[i] < bounds[i] as i128 {
                // (Z + C_i)^2 = Z^2 + 2 Z.C_i + C_i^2
                zz += 2 * mz[i] + m[i][i] as i128;
                kz += k[i] as i128;
                for (r, row) in mz.iter_mut().zip(m) {
                    *r += row[i] as i128;
                }
                z[i] += 1;
                break;
            }
            let c = z[i];
            zz += -2 * c * mz[i] + c * c * m[i][i] as i128;
            kz -= c * k[i] as i128;
            for (r, row) in mz.iter_mut().zip(m) {
                *r -= c * row[i] as i128;
            }
            z[i] = 0;
            i += 1;
        }
        checked += 1;
        let v = zz + kz;
        if best.is_none_or(|b| v > b) {
            best = Some(v);
        }
    }
    // Z^2 + K.Z is even on a smooth model, but keep the division exact anyway.
    let genus = best.map(|v| {
        Rational::from_bigints(v.into(), 2.into()).expect("nonzero denominator") + Rational::one()
    });
    (checked, genus)
}

fn scan_rational(sub: &CurveConfig, bounds: &[u64]) -> Result<(u64, Option<Rational>)> {
    let mut current = vec![0u64; bounds.len()];
    let mut checked = 0u64;
    let mut max_genus: Option<Rational> = None;
    while advance(&mut current, bounds) {
        let v = QVector(current.iter().map(|&m| Rational::integer(m as i64)).collect());
        let g = sub.arithmetic_genus(&v)?;
        checked += 1;
        if max_genus.as_ref().is_none_or(|best| g > *best) {
            max_genus = Some(g);
        }
    }
    Ok((checked, max_genus))
}

fn advance(current: &mut [u64], bounds: &[u64]) -> bool {
    for (c, &b) in current.iter_mut().zip(bounds) {
        if *c < b {
            *c += 1;
            return true;
        }
        *c = 0;
    }
    false
}

/// The sorted triple when `1/a + 1/b + 1/c > 1`.
pub fn platonic_check(multiset: &[u64]) -> Option<(u64, u64, u64)> {
    let [a, b, c] = *multiset else {
        return None;
    };
    if a < 2 || b < 2 || c < 2 {
        return None;
    }
    let mut t = [a, b, c];
    t.sort_unstable();
    // 1/a + 1/b + 1/c > 1  <=>  bc + ac + ab > abc
    let (a, b, c) = (t[0] as u128, t[1] as u128, t[2] as u128);
    (b * c + a * c + a * b > a * b * c).then_some((t[0], t[1], t[2]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    PreconditionFailed,
    Case1MinusOne,
    Case2,
}

/// Bounds recorded when a Case 2 curve is certified as a (-1)-curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinusOneCertificate {
    pub m: u64,
    pub n: u64,
    /// `1/m + 1/n`, the strict upper bound for `-E^2`.
    pub upper_bound: Rational,
    /// `e(-2 + E.Delta')`, a strict lower bound for `E^2`.
    pub lower_bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveClassification {
    pub curve: CurveId,
    pub case_tag: CaseTag,
    pub e: u64,
    pub ceil_count: Rational,
    pub platonic: Option<[u64; 3]>,
    pub minus_one_certified: bool,
    pub certificate: Option<MinusOneCertificate>,
    pub report: PairDegreeReport,
    pub genus: Rational,
    pub verdict: String,
}

fn inconsistent(msg: String) -> Error {
    Error::InconsistentInput(msg)
}

/// Classifies `E` against the pair `(S, Delta)`.
pub fn classify_negative_curve(
    config: &CurveConfig,
    delta: &OrbifoldDivisor,
    e: &CurveId,
) -> Result<CurveClassification> {
    delta.check_against(config)?;
    let report = pair_degree(config, delta, e)?;
    let genus = config.arithmetic_genus(&config.curve_vector(e)?)?;
    let e_mult = match delta.coefficient_of(e) {
        None => 1,
        Some(Coefficient::Mult(m)) => *m,
        Some(k @ Coefficient::Frac(_)) => k
            .ramification()
            .ok_or_else(|| Error::NotOrbifold(e.0.clone()))?,
    };
    let mut out = CurveClassification {
        curve: e.clone(),
        case_tag: CaseTag::PreconditionFailed,
        e: e_mult,
        ceil_count: report.ceil_count.clone(),
        platonic: None,
        minus_one_certified: false,
        certificate: None,
        report,
        genus,
        verdict: String::new(),
    };

    let mut failed = Vec::new();
    if !config.smooth_model {
        failed.push("surface is not marked smooth along E");
    }
    if !out.report.e_self.is_negative() {
        failed.push("E^2 < 0 fails");
    }
    if !out.report.pair_deg.is_negative() {
        failed.push("(K + Delta).E < 0 fails");
    }
    if !failed.is_empty() {
        out.verdict = failed.join("; ");
        return Ok(out);
    }

    // Boundary components through E must meet it transversally.
    let mut meeting: Vec<u64> = Vec::new();
    for (c, k) in delta.components() {
        if c == e {
            continue;
        }
        let m = k
            .ramification()
            .ok_or_else(|| Error::NotOrbifold(c.0.clone()))?;
        let meet = config.pairing(c, e)?;
        let count = meet
            .to_i64()
            .and_then(|x| u64::try_from(x).ok())
            .ok_or_else(|| {
                Error::NotSnc(format!("`{c}` meets `{e}` in {meet}, not a nonnegative integer"))
            })?;
        if m >= 2 {
            meeting.extend(std::iter::repeat_n(m, count as usize));
        }
    }

    if !out.genus.is_zero() {
        return Err(inconsistent(format!(
            "p_a({e}) = {} but a curve meeting both conditions is rational",
            out.genus
        )));
    }

    let minus_one = Rational::integer(-1);
    if !delta.contains(e) {
        let r = &out.report;
        if r.e_self != minus_one || r.k_deg != minus_one {
            return Err(inconsistent(format!(
                "E^2 = {}, K.E = {}; expected a (-1)-curve",
                r.e_self, r.k_deg
            )));
        }
        if r.delta_deg >= Rational::one() {
            return Err(inconsistent(format!("E.Delta = {} is not < 1", r.delta_deg)));
        }
        out.case_tag = CaseTag::Case1MinusOne;
        out.minus_one_certified = true;
        out.verdict = "E is a (-1)-curve off the boundary".into();
        return Ok(out);
    }

    out.case_tag = CaseTag::Case2;
    if out.ceil_count > Rational::integer(3) {
        return Err(inconsistent(format!(
            "E.ceil(Delta') = {} exceeds 3",
            out.ceil_count
        )));
    }
    if out.ceil_count == Rational::integer(3) {
        let triple = platonic_check(&meeting).ok_or_else(|| {
            inconsistent(format!("meeting multiplicities {meeting:?} are not a Platonic triple"))
        })?;
        out.platonic = Some([triple.0, triple.1, triple.2]);
        out.verdict = format!(
            "E.ceil(Delta') = 3 with Platonic triple ({}, {}, {})",
            triple.0, triple.1, triple.2
        );
        return Ok(out);
    }

    let e_rat = Rational::integer(e_mult as i64);
    let dp = out.report.delta_prime_deg.clone();
    match minus_one_witness(&dp, e_mult) {
        Some((m, n)) => {
            let upper = Rational::new(1, m as i64) + Rational::new(1, n as i64);
            let lower = &e_rat * (&dp - Rational::integer(2));
            let neg_e2 = -&out.report.e_self;
            if !(neg_e2 >= Rational::one() && neg_e2 < upper && out.report.e_self > lower) {
                return Err(inconsistent(format!(
                    "E^2 = {} violates 1 <= -E^2 < {upper} or E^2 > {lower}",
                    out.report.e_self
                )));
            }
            if out.report.e_self != minus_one {
                return Err(inconsistent(format!(
                    "certified case but E^2 = {}",
                    out.report.e_self
                )));
            }
            out.minus_one_certified = true;
            out.certificate = Some(MinusOneCertificate {
                m,
                n,
                upper_bound: upper,
                lower_bound: lower,
            });
            out.verdict = format!(
                "E.Delta' = (1 - 1/{}) + (1 - 1/{}): E is a (-1)-curve",
                e_mult * m,
                e_mult * n
            );
        }
        None => {
            out.verdict = "inconclusive under the classification: no (m, n) witness".into();
        }
    }
    Ok(out)
}

/// Positive integers `m <= n` with `E.Delta' = 2 - 1/(em) - 1/(en)`.
///
/// With `s = 2 - E.Delta'`, a solution has `1/(em) >= s/2`, so `m <= 2/(es)`;
/// for each such `m` the partner `n` is determined exactly.
fn minus_one_witness(delta_prime_deg: &Rational, e: u64) -> Option<(u64, u64)> {
    let s = Rational::integer(2) - delta_prime_deg;
    if !s.is_positive() {
        return None;
    }
    let e_rat = Rational::integer(e as i64);
    let bound = (Rational::integer(2) / (&e_rat * &s)).floor().to_i64()?;
    for m in 1..=bound.max(0) as u64 {
        let rest = &s - (&e_rat * Rational::integer(m as i64)).recip();
        if !rest.is_positive() {
            continue;
        }
        let n = (&e_rat * &rest).recip();
        if let Some(n) = n.to_i64().and_then(|n| u64::try_from(n).ok()) {
            if n >= m {
                return Some((m, n));
            }
        }
    }
    None
}
