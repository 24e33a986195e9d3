//! Minimal model program steps on listed curves.

use serde::Serialize;

use crate::contraction::{artin_test, classify_negative_curve, CurveClassification, DEFAULT_BOUND_MULTIPLIER};
use crate::error::{Error, Result};
use crate::orbifold::{pair_degree, OrbifoldDivisor, PairDegreeReport};
use crate::rational::Rational;
use crate::surface::{CurveConfig, CurveId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepKind {
    ContractedDivisorial,
    FiberCase,
    PlaneCase,
    /// No listed curve is negative against `K + Delta`. Not a nef certificate.
    NoListedViolation,
}

impl StepKind {
    pub fn is_terminal(self) -> bool {
        !matches!(self, StepKind::ContractedDivisorial)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub kind: StepKind,
    pub curve: Option<CurveId>,
    pub report: Option<PairDegreeReport>,
    pub next_config: Option<CurveConfig>,
    pub next_delta: Option<OrbifoldDivisor>,
    pub classification: Option<CurveClassification>,
}

/// Listed curves with `(K + Delta).E < 0`: those with `E^2 < 0` first, then
/// `E^2 = 0`, then `E^2 > 0`, each group in declared order.
pub fn find_negative_extremal(
    config: &CurveConfig,
    delta: &OrbifoldDivisor,
) -> Result<Vec<(CurveId, PairDegreeReport)>> {
    delta.check_against(config)?;
    let mut found: Vec<(usize, CurveId, PairDegreeReport)> = Vec::new();
    for (i, c) in config.curves.iter().enumerate() {
        let r = pair_degree(config, delta, c)?;
        if r.pair_deg.is_negative() {
            found.push((i, c.clone(), r));
        }
    }
    let group = |r: &PairDegreeReport| r.e_self.cmp(&Rational::zero());
    found.sort_by_key(|x| (group(&x.2), x.0));
    Ok(found.into_iter().map(|(_, c, r)| (c, r)).collect())
}

/// One step of the trichotomy on the first listed extremal candidate.
pub fn mmp_step(config: &CurveConfig, delta: &OrbifoldDivisor) -> Result<StepOutcome> {
    let candidates = find_negative_extremal(config, delta)?;
    let Some((curve, report)) = candidates.into_iter().next() else {
        return Ok(StepOutcome {
            kind: StepKind::NoListedViolation,
            curve: None,
            report: None,
            next_config: None,
            next_delta: None,
            classification: None,
        });
    };
    if report.e_self.is_zero() || report.e_self.is_positive() {
        let kind = if report.e_self.is_zero() {
            StepKind::FiberCase
        } else {
            StepKind::PlaneCase
        };
        return Ok(StepOutcome {
            kind,
            curve: Some(curve),
            report: Some(report),
            next_config: None,
            next_delta: None,
            classification: None,
        });
    }

    if !config.smooth_model {
        return Err(Error::NotSmoothModel);
    }
    let classification = classify_negative_curve(config, delta, &curve)?;
    let verdict = artin_test(config, std::slice::from_ref(&curve), DEFAULT_BOUND_MULTIPLIER)?;
    if !verdict.contractible {
        return Err(Error::ContractionFailed(curve.0));
    }
    let next_config = config.contract(std::slice::from_ref(&curve))?;
    let next_delta = delta.without(&curve);
    Ok(StepOutcome {
        kind: StepKind::ContractedDivisorial,
        curve: Some(curve),
        report: Some(report),
        next_config: Some(next_config),
        next_delta: Some(next_delta),
        classification: Some(classification),
    })
}

/// Iterates [`mmp_step`] until a terminal outcome or `max_steps` steps.
pub fn mmp_run(
    config: &CurveConfig,
    delta: &OrbifoldDivisor,
    max_steps: usize,
) -> Result<Vec<StepOutcome>> {
    let mut trace = Vec::new();
    let mut config = config.clone();
    let mut delta = delta.clone();
    while trace.len() < max_steps {
        let step = mmp_step(&config, &delta)?;
        let kind = step.kind;
        if let (Some(c), Some(d)) = (&step.next_config, &step.next_delta) {
            config = c.clone();
            delta = d.clone();
        }
        trace.push(step);
        if kind.is_terminal() {
            break;
        }
    }
    Ok(trace)
}

impl Serialize for StepOutcome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::io::ConfigRecord;
        #[derive(Serialize)]
        struct Record<'a> {
            kind: StepKind,
            curve: Option<&'a CurveId>,
            report: Option<&'a PairDegreeReport>,
            classification: Option<&'a CurveClassification>,
            next_config: Option<ConfigRecord>,
            next_delta: Option<&'a OrbifoldDivisor>,
        }
        Record {
            kind: self.kind,
            curve: self.curve.as_ref(),
            report: self.report.as_ref(),
            classification: self.classification.as_ref(),
            next_config: self.next_config.as_ref().map(ConfigRecord::from),
            next_delta: self.next_delta.as_ref(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::{QMatrix, QVector};
    use crate::rational::q;

    #[test]
    fn candidates() {
        let bl = fixtures::p2_blown_up();
        let found = find_negative_extremal(&bl, &OrbifoldDivisor::empty()).unwrap();
        let names: Vec<&str> = found.iter().map(|(c, _)| c.as_str()).collect();
        assert_eq!(names, vec!["E", "H"]);
        assert_eq!(found[0].1.pair_deg, q(-1, 1));
        assert_eq!(found[0].1.e_self, q(-1, 1));

        let p2 = fixtures::p2();
        let found = find_negative_extremal(&p2, &OrbifoldDivisor::empty()).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].1.pair_deg, q(-3, 1));
        assert_eq!(found[0].1.e_self, q(1, 1));

        let quad = fixtures::quadric();
        let found = find_negative_extremal(&quad, &OrbifoldDivisor::empty()).unwrap();
        assert_eq!(found.len(), 2);
        assert!(found.iter().all(|(_, r)| r.pair_deg == q(-2, 1) && r.e_self.is_zero()));
    }

    #[test]
    fn steps() {
        let s = mmp_step(&fixtures::p2_blown_up(), &OrbifoldDivisor::empty()).unwrap();
        assert_eq!(s.kind, StepKind::ContractedDivisorial);
        assert_eq!(s.curve, Some(CurveId::new("E")));
        let next = s.next_config.unwrap();
        let p2 = fixtures::p2();
        assert_eq!((next.curves, next.form, next.kdeg, next.k_self), (p2.curves, p2.form, p2.kdeg, p2.k_self));

        let s = mmp_step(&fixtures::p2(), &OrbifoldDivisor::empty()).unwrap();
        assert_eq!(s.kind, StepKind::PlaneCase);

        let s = mmp_step(&fixtures::quadric(), &OrbifoldDivisor::empty()).unwrap();
        assert_eq!(s.kind, StepKind::FiberCase);
        assert_eq!(s.curve, Some(CurveId::new("F1")));
    }

    #[test]
    fn runs() {
        let trace = mmp_run(&fixtures::p2_blown_up_points(2), &OrbifoldDivisor::empty(), 10).unwrap();
        let kinds: Vec<StepKind> = trace.iter().map(|s| s.kind).collect();
        assert_eq!(
            kinds,
            vec![
                StepKind::ContractedDivisorial,
                StepKind::ContractedDivisorial,
                StepKind::PlaneCase
            ]
        );

        // A single (-2)-curve: pair degree 0, nothing listed.
        let a1 = fixtures::ade('A', 1);
        let trace = mmp_run(&a1, &OrbifoldDivisor::empty(), 10).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace[0].kind, StepKind::NoListedViolation);

        assert!(mmp_run(&fixtures::p2(), &OrbifoldDivisor::empty(), 0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn boundary_is_pushed_forward() {
        let (cfg, delta) = fixtures::case1();
        let s = mmp_step(&cfg, &delta).unwrap();
        assert_eq!(s.kind, StepKind::ContractedDivisorial);
        let next = s.next_config.unwrap();
        assert_eq!(next.curves, vec![CurveId::new("C")]);
        // C^2 = -2 + 1 after contracting the (-1)-curve it meets.
        assert_eq!(next.form[(0, 0)], q(-1, 1));
        assert_eq!(s.next_delta.unwrap(), delta);
    }

    #[test]
    fn positive_genus_fails_contraction() {
        // A genus-one curve cannot pass the classifier's hypotheses: with
        // E^2 = -1 and K.E = 1 the pair degree is positive, so nothing is listed.
        let trace = mmp_run(&fixtures::positive_genus(), &OrbifoldDivisor::empty(), 5).unwrap();
        assert_eq!(trace[0].kind, StepKind::NoListedViolation);

        // Non-smooth model on the contraction branch.
        let cfg = CurveConfig {
            name: "sing".into(),
            curves: vec!["E".into()],
            form: QMatrix::from_int_rows(&[&[-1]]).unwrap(),
            kdeg: QVector::from_ints(&[-1]),
            k_self: None,
            smooth_model: false,
        };
        assert_eq!(
            mmp_step(&cfg, &OrbifoldDivisor::empty()),
            Err(Error::NotSmoothModel)
        );
    }
}
