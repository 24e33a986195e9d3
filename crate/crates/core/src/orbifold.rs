//! Orbifold and fractional boundary divisors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::QVector;
use crate::rational::Rational;
use crate::surface::{CurveConfig, CurveId};

/// Coefficient of a boundary component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coefficient {
    /// Ramification `m >= 1`, standing for `1 - 1/m`.
    Mult(u64),
    /// A fraction `d` with `0 <= d < 1`.
    Frac(Rational),
}

impl Coefficient {
    pub fn value(&self) -> Rational {
        match self {
            Coefficient::Mult(m) => Rational::orbifold_coefficient(*m),
            Coefficient::Frac(d) => d.clone(),
        }
    }

    /// Integer ramification index when the coefficient has the form `1 - 1/m`.
    pub fn ramification(&self) -> Option<u64> {
        match self {
            Coefficient::Mult(m) => Some(*m),
            Coefficient::Frac(d) => {
                let r = (Rational::one() - d).recip();
                r.to_i64().and_then(|r| u64::try_from(r).ok())
            }
        }
    }
}

/// `sum_i c_i C_i` with every `c_i` in `[0, 1)`. Components keep their
/// declared order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OrbifoldDivisor {
    components: Vec<(CurveId, Coefficient)>,
}

impl OrbifoldDivisor {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validates coefficients, rejects duplicates and drops `Mult(1)`.
    pub fn new(components: impl IntoIterator<Item = (CurveId, Coefficient)>) -> Result<Self> {
        let mut out: Vec<(CurveId, Coefficient)> = Vec::new();
        for (curve, coeff) in components {
            if out.iter().any(|(c, _)| c == &curve) {
                return Err(Error::InvalidBoundary(format!(
                    "curve `{curve}` appears twice"
                )));
            }
            match &coeff {
                Coefficient::Mult(0) => {
                    return Err(Error::InvalidBoundary(format!(
                        "multiplicity 0 on `{curve}`"
                    )))
                }
                Coefficient::Mult(1) => continue,
                Coefficient::Mult(_) => {}
                Coefficient::Frac(d) => {
                    if d.is_negative() || *d >= Rational::one() {
                        return Err(Error::InvalidBoundary(format!(
                            "coefficient {d} on `{curve}` is outside [0, 1)"
                        )));
                    }
                }
            }
            out.push((curve, coeff));
        }
        Ok(OrbifoldDivisor { components: out })
    }

    /// Boundary `sum (1 - 1/m) C` from multiplicities.
    pub fn from_multiplicities<'a>(items: impl IntoIterator<Item = (&'a str, u64)>) -> Result<Self> {
        Self::new(
            items
                .into_iter()
                .map(|(c, m)| (CurveId::new(c), Coefficient::Mult(m))),
        )
    }

    pub fn components(&self) -> &[(CurveId, Coefficient)] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Only `Mult` coefficients: an orbifold divisor in the strict sense.
    pub fn is_strict_orbifold(&self) -> bool {
        self.components
            .iter()
            .all(|(_, c)| matches!(c, Coefficient::Mult(_)))
    }

    pub fn coefficient_of(&self, curve: &CurveId) -> Option<&Coefficient> {
        self.components
            .iter()
            .find(|(c, _)| c == curve)
            .map(|(_, k)| k)
    }

    pub fn value_of(&self, curve: &CurveId) -> Rational {
        self.coefficient_of(curve)
            .map_or_else(Rational::zero, Coefficient::value)
    }

    pub fn contains(&self, curve: &CurveId) -> bool {
        self.coefficient_of(curve).is_some()
    }

    /// The divisor with one component removed.
    pub fn without(&self, curve: &CurveId) -> OrbifoldDivisor {
        OrbifoldDivisor {
            components: self
                .components
                .iter()
                .filter(|(c, _)| c != curve)
                .cloned()
                .collect(),
        }
    }

    /// Every component must be a curve of `config`.
    pub fn check_against(&self, config: &CurveConfig) -> Result<()> {
        for (c, _) in &self.components {
            if !config.contains(c) {
                return Err(Error::UnknownCurve(c.0.clone()));
            }
        }
        Ok(())
    }

    pub fn to_vector(&self, config: &CurveConfig) -> Result<QVector> {
        let mut v = QVector::zeros(config.len());
        for (c, k) in &self.components {
            v[config.index_of(c)?] = k.value();
        }
        Ok(v)
    }

    /// `ceil(Delta)`: indicator of the components with positive coefficient.
    pub fn round_up(&self, config: &CurveConfig) -> Result<QVector> {
        let mut v = QVector::zeros(config.len());
        for (c, k) in &self.components {
            if k.value().is_positive() {
                v[config.index_of(c)?] = Rational::one();
            }
        }
        Ok(v)
    }

    /// `floor(Delta)`, which vanishes for any valid boundary.
    pub fn round_down(&self, config: &CurveConfig) -> Result<QVector> {
        let mut v = QVector::zeros(config.len());
        for (c, k) in &self.components {
            v[config.index_of(c)?] = k.value().floor();
        }
        Ok(v)
    }
}

/// Degrees of a curve `E` against the pair `(S, Delta)`, where
/// `Delta = Delta' + (1 - 1/e) E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairDegreeReport {
    pub e_self: Rational,
    pub k_deg: Rational,
    pub pair_deg: Rational,
    pub delta_deg: Rational,
    pub delta_prime_deg: Rational,
    pub ceil_count: Rational,
}

pub fn pair_degree(
    config: &CurveConfig,
    delta: &OrbifoldDivisor,
    e: &CurveId,
) -> Result<PairDegreeReport> {
    let ev = config.curve_vector(e)?;
    let delta_v = delta.to_vector(config)?;
    let prime = delta.without(e);
    let prime_v = prime.to_vector(config)?;
    let e_self = config.intersect(&ev, &ev)?;
    let k_deg = config.kdeg.dot(&ev)?;
    let delta_deg = config.intersect(&delta_v, &ev)?;
    let delta_prime_deg = config.intersect(&prime_v, &ev)?;
    let ceil_count = config.intersect(&prime.round_up(config)?, &ev)?;
    Ok(PairDegreeReport {
        pair_deg: &k_deg + &delta_deg,
        e_self,
        k_deg,
        delta_deg,
        delta_prime_deg,
        ceil_count,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ComponentRecord {
    Mult { curve: String, m: u64 },
    Frac { curve: String, d: Rational },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryRecord {
    components: Vec<ComponentRecord>,
}

impl Serialize for OrbifoldDivisor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoundaryRecord {
            components: self
                .components
                .iter()
                .map(|(c, k)| match k {
                    Coefficient::Mult(m) => ComponentRecord::Mult {
                        curve: c.0.clone(),
                        m: *m,
                    },
                    Coefficient::Frac(d) => ComponentRecord::Frac {
                        curve: c.0.clone(),
                        d: d.clone(),
                    },
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrbifoldDivisor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let record = BoundaryRecord::deserialize(d)?;
        OrbifoldDivisor::new(record.components.into_iter().map(|c| match c {
            ComponentRecord::Mult { curve, m } => (CurveId(curve), Coefficient::Mult(m)),
            ComponentRecord::Frac { curve, d } => (CurveId(curve), Coefficient::Frac(d)),
        }))
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::QMatrix;
    use crate::rational::q;
    use proptest::prelude::*;

    fn three_components() -> CurveConfig {
        CurveConfig::new(
            "abc",
            vec!["A".into(), "B".into(), "C".into()],
            QMatrix::identity(3).negated(),
            QVector::from_ints(&[-1, -1, -1]),
            None,
            true,
        )
        .unwrap()
    }

    #[test]
    fn rounding() {
        let cfg = three_components();
        let half_c = OrbifoldDivisor::from_multiplicities([("C", 2)]).unwrap();
        assert_eq!(half_c.round_up(&cfg).unwrap(), QVector::from_ints(&[0, 0, 1]));
        assert_eq!(half_c.round_down(&cfg).unwrap(), QVector::zeros(3));
        let empty = OrbifoldDivisor::empty();
        assert_eq!(empty.round_up(&cfg).unwrap(), QVector::zeros(3));
        assert_eq!(empty.round_down(&cfg).unwrap(), QVector::zeros(3));
        let abc = OrbifoldDivisor::from_multiplicities([("A", 2), ("B", 3), ("C", 5)]).unwrap();
        assert_eq!(abc.round_up(&cfg).unwrap(), QVector::from_ints(&[1, 1, 1]));
        let zero_frac =
            OrbifoldDivisor::new([(CurveId::new("A"), Coefficient::Frac(Rational::zero()))])
                .unwrap();
        assert_eq!(zero_frac.round_down(&cfg).unwrap(), QVector::zeros(3));
        assert_eq!(zero_frac.round_up(&cfg).unwrap(), QVector::zeros(3));
    }

    #[test]
    fn construction_rules() {
        let d = OrbifoldDivisor::from_multiplicities([("A", 1), ("B", 2)]).unwrap();
        assert_eq!(d.components().len(), 1);
        assert!(OrbifoldDivisor::from_multiplicities([("A", 0)]).is_err());
        assert!(OrbifoldDivisor::from_multiplicities([("A", 2), ("A", 3)]).is_err());
        assert!(OrbifoldDivisor::new([(CurveId::new("A"), Coefficient::Frac(q(1, 1)))]).is_err());
        assert!(OrbifoldDivisor::new([(CurveId::new("A"), Coefficient::Frac(q(-1, 3)))]).is_err());
        let frac =
            OrbifoldDivisor::new([(CurveId::new("A"), Coefficient::Frac(q(2, 3)))]).unwrap();
        assert!(!frac.is_strict_orbifold());
        assert_eq!(frac.coefficient_of(&"A".into()).unwrap().ramification(), Some(3));
        let unknown = OrbifoldDivisor::from_multiplicities([("Z", 2)]).unwrap();
        assert_eq!(
            unknown.check_against(&three_components()),
            Err(Error::UnknownCurve("Z".into()))
        );
    }

    #[test]
    fn pair_degree_blown_up_plane() {
        let cfg = fixtures::p2_blown_up();
        let r = pair_degree(&cfg, &OrbifoldDivisor::empty(), &"E".into()).unwrap();
        assert_eq!(r.pair_deg, q(-1, 1));
        assert_eq!(r.e_self, q(-1, 1));
    }

    #[test]
    fn pair_degree_case1() {
        let (cfg, delta) = fixtures::case1();
        let r = pair_degree(&cfg, &delta, &"E".into()).unwrap();
        assert_eq!(r.pair_deg, q(-1, 2));
        assert_eq!(r.delta_deg, q(1, 2));
    }

    #[test]
    fn pair_degree_platonic() {
        let (cfg, delta) = fixtures::platonic_235();
        let r = pair_degree(&cfg, &delta, &"E".into()).unwrap();
        // -1 - 30/31 + 59/30 = (-930 - 900 + 1829)/930
        assert_eq!(r.pair_deg, q(-1, 930));
        assert_eq!(r.delta_prime_deg, q(59, 30));
        assert_eq!(r.ceil_count, q(3, 1));
    }

    #[test]
    fn unknown_curve() {
        let cfg = fixtures::p2();
        assert!(matches!(
            pair_degree(&cfg, &OrbifoldDivisor::empty(), &"Q".into()),
            Err(Error::UnknownCurve(_))
        ));
    }

    #[test]
    fn boundary_json() {
        let json = r#"{"components":[{"curve":"A","m":2},{"curve":"B","d":"2/3"}]}"#;
        let d: OrbifoldDivisor = serde_json::from_str(json).unwrap();
        assert_eq!(d.value_of(&"B".into()), q(2, 3));
        assert_eq!(serde_json::to_string(&d).unwrap(), json);
    }

    proptest! {
        #[test]
        fn strict_coefficients_at_least_half(m in 2u64..1000) {
            prop_assert!(Coefficient::Mult(m).value() >= q(1, 2));
            prop_assert!(Coefficient::Mult(m).value() < q(1, 1));
        }

        #[test]
        fn decomposition_identity(
            e_self in -5i64..=5, k in -5i64..=5,
            meets in proptest::collection::vec(0i64..=3, 3),
            mults in proptest::collection::vec(1u64..=12, 4),
        ) {
            let mut form = QMatrix::identity(4).negated();
            form[(0, 0)] = Rational::integer(e_self);
            for i in 1..4 {
                form[(0, i)] = Rational::integer(meets[i - 1]);
                form[(i, 0)] = Rational::integer(meets[i - 1]);
            }
            let cfg = CurveConfig {
                name: "rand".into(),
                curves: vec!["E".into(), "A".into(), "B".into(), "C".into()],
                form,
                kdeg: QVector::from_ints(&[k, -1, -1, -1]),
                k_self: None,
                smooth_model: false,
            };
            let delta = OrbifoldDivisor::from_multiplicities(
                ["E", "A", "B", "C"].into_iter().zip(mults.iter().copied()),
            ).unwrap();
            let r = pair_degree(&cfg, &delta, &"E".into()).unwrap();
            let coeff = delta.value_of(&"E".into());
            prop_assert_eq!(r.pair_deg, &r.k_deg + &coeff * &r.e_self + &r.delta_prime_deg);
            prop_assert!(delta.round_down(&cfg).unwrap().is_zero());
        }
    }
}
