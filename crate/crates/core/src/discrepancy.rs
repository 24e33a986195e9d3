//! Discrepancies over bounded blowup towers and the b-discrepancy calculus.
//!
//! For an SNC pair `(S, Delta)` on a smooth model, the exceptional divisor of
//! a point blowup has discrepancy `1 - sum c(D)`, the sum running over the
//! tracked curves through the point. Boundary curves carry their coefficient
//! and an exceptional curve `E_j` already extracted carries `-a(E_j)`. The
//! tower enumerates every blowup word up to a given length over the
//! combinatorially distinct centers: the generic point, a general point of
//! each tracked curve, and each indexed intersection point of two tracked
//! curves.
//!
//! Exceptional curves created along a word are labelled `@1`, `@2`, ... by
//! the step that created them, so addresses read like `A^B#0;@1^A#0`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::orbifold::{Coefficient, OrbifoldDivisor};
use crate::rational::Rational;
use crate::surface::{BlowupCenter, CurveConfig, CurveId};

pub const DEFAULT_DEPTH: usize = 3;
pub const MAX_DEPTH: usize = 6;

/// One exceptional prime divisor in the tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerNode {
    pub address: Vec<BlowupCenter>,
    pub depth: usize,
    pub a_disc: Rational,
    pub r_index: Option<Rational>,
    pub b_disc: Option<Rational>,
    pub b_prime: Option<Rational>,
}

impl TowerNode {
    pub fn address_string(&self) -> String {
        format_address(&self.address)
    }
}

pub fn format_address(address: &[BlowupCenter]) -> String {
    address
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

impl Serialize for TowerNode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Record<'a> {
            address: String,
            depth: usize,
            a: &'a Rational,
            r: Option<&'a Rational>,
            b: Option<&'a Rational>,
            b_prime: Option<&'a Rational>,
        }
        Record {
            address: self.address_string(),
            depth: self.depth,
            a: &self.a_disc,
            r: self.r_index.as_ref(),
            b: self.b_disc.as_ref(),
            b_prime: self.b_prime.as_ref(),
        }
        .serialize(s)
    }
}

/// An infimum that may be `-infinity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Discrep {
    Finite(Rational),
    NegInfinity,
}

impl Discrep {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Discrep::Finite(r) => Some(r),
            Discrep::NegInfinity => None,
        }
    }

    fn gt(&self, t: &Rational) -> bool {
        self.finite().is_some_and(|v| v > t)
    }

    fn ge(&self, t: &Rational) -> bool {
        self.finite().is_some_and(|v| v >= t)
    }
}

impl fmt::Display for Discrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Discrep::Finite(r) => write!(f, "{r}"),
            Discrep::NegInfinity => f.write_str("-inf"),
        }
    }
}

impl Serialize for Discrep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone)]
struct TowerState {
    labels: Vec<CurveId>,
    coeffs: Vec<Rational>,
    // Number of transversal intersection points between tracked curves.
    meets: Vec<Vec<u32>>,
}

impl TowerState {
    fn from_pair(config: &CurveConfig, delta: &OrbifoldDivisor) -> Result<Self> {
        if !config.smooth_model {
            return Err(Error::NotSmoothModel);
        }
        delta.check_against(config)?;
        let labels: Vec<CurveId> = delta.components().iter().map(|(c, _)| c.clone()).collect();
        let coeffs = delta.components().iter().map(|(_, k)| k.value()).collect();
        let n = labels.len();
        let mut meets = vec![vec![0u32; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let m = config.pairing(&labels[i], &labels[j])?;
                let count = m
                    .to_i64()
                    .and_then(|k| u32::try_from(k).ok())
                    .ok_or_else(|| {
                        Error::NotSnc(format!(
                            "`{}` and `{}` meet in {m}, not a nonnegative integer",
                            labels[i], labels[j]
                        ))
                    })?;
                meets[i][j] = count;
                meets[j][i] = count;
            }
        }
        Ok(TowerState {
            labels,
            coeffs,
            meets,
        })
    }

    /// Centers in canonical order with the tracked indices through them.
    fn centers(&self) -> Vec<(BlowupCenter, Vec<usize>)> {
        let n = self.labels.len();
        let mut out = vec![(BlowupCenter::generic(), vec![])];
        for i in 0..n {
            out.push((BlowupCenter::on_curve(self.labels[i].clone()), vec![i]));
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..self.meets[i][j] {
                    out.push((
                        BlowupCenter::at_intersection(
                            self.labels[i].clone(),
                            self.labels[j].clone(),
                            k,
                        ),
                        vec![i, j],
                    ));
                }
            }
        }
        out
    }

    fn blow_up(&self, through: &[usize], label: CurveId, a: &Rational) -> TowerState {
        let mut next = self.clone();
        if let [i, j] = *through {
            next.meets[i][j] -= 1;
            next.meets[j][i] -= 1;
        }
        let n = next.labels.len();
        for (i, row) in next.meets.iter_mut().enumerate() {
            row.push(u32::from(through.contains(&i)));
        }
        let mut new_row: Vec<u32> = (0..n).map(|i| u32::from(through.contains(&i))).collect();
        new_row.push(0);
        next.meets.push(new_row);
        next.labels.push(label);
        next.coeffs.push(-a);
        next
    }

    fn explore(
        &self,
        prefix: &mut Vec<BlowupCenter>,
        remaining: usize,
        out: &mut Vec<TowerNode>,
    ) {
        if remaining == 0 {
            return;
        }
        let step = prefix.len() + 1;
        for (center, through) in self.centers() {
            let a = Rational::one() - through.iter().map(|&i| &self.coeffs[i]).sum::<Rational>();
            prefix.push(center);
            out.push(TowerNode {
                address: prefix.clone(),
                depth: step,
                a_disc: a.clone(),
                r_index: None,
                b_disc: None,
                b_prime: None,
            });
            if remaining > 1 {
                let next = self.blow_up(&through, CurveId(format!("@{step}")), &a);
                next.explore(prefix, remaining - 1, out);
            }
            prefix.pop();
        }
    }
}

fn check_depth(depth: usize, cap: usize) -> Result<()> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    if depth > cap {
        return Err(Error::DepthTooLarge {
            requested: depth,
            cap,
        });
    }
    Ok(())
}

/// Discrepancies of every exceptional divisor reachable by at most `depth`
/// point blowups, sorted by `(depth, address)`.
pub fn tower_discrepancies(
    config: &CurveConfig,
    delta: &OrbifoldDivisor,
    depth: usize,
) -> Result<Vec<TowerNode>> {
    tower_discrepancies_capped(config, delta, depth, MAX_DEPTH)
}

pub fn tower_discrepancies_capped(
    config: &CurveConfig,
    delta: &OrbifoldDivisor,
    depth: usize,
    cap: usize,
) -> Result<Vec<TowerNode>> {
    check_depth(depth, cap)?;
    let state = TowerState::from_pair(config, delta)?;
    let mut nodes = Vec::new();
    state.explore(&mut Vec::new(), depth, &mut nodes);
    let mut keyed: Vec<(usize, String, TowerNode)> = nodes
        .into_iter()
        .map(|n| (n.depth, n.address_string(), n))
        .collect();
    keyed.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    Ok(keyed.into_iter().map(|(_, _, n)| n).collect())
}

/// Minimum over a list of values, collapsing to `-infinity` once any value
/// drops below `-1`.
pub fn infimum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Discrep {
    let minus_one = Rational::integer(-1);
    let mut best: Option<Rational> = None;
    for v in values {
        if *v < minus_one {
            return Discrep::NegInfinity;
        }
        if best.as_ref().is_none_or(|b| v < b) {
            best = Some(v.clone());
        }
    }
    // The generic-point blowup always contributes, so empty input means no
    // exceptional divisors were enumerated at all.
    best.map_or(Discrep::NegInfinity, Discrep::Finite)
}

/// Witnessed infimum of `a(E; S, Delta)` over the tower of the given depth.
pub fn discrep_estimate(
    config: &CurveConfig,
    delta: &OrbifoldDivisor,
    depth: usize,
) -> Result<Discrep> {
    let nodes = tower_discrepancies(config, delta, depth)?;
    Ok(infimum(nodes.iter().map(|n| &n.a_disc)))
}

/// `min(1, min_i (1 - d_i), min_{C_i . C_j > 0} (1 - d_i - d_j))`.
pub fn snc_closed_form(config: &CurveConfig, delta: &OrbifoldDivisor) -> Result<Rational> {
    let state = TowerState::from_pair(config, delta)?;
    let one = Rational::one();
    let mut best = one.clone();
    let n = state.labels.len();
    for i in 0..n {
        best = best.min(&one - &state.coeffs[i]);
        for j in i + 1..n {
            if state.meets[i][j] > 0 {
                best = best.min(&one - &state.coeffs[i] - &state.coeffs[j]);
            }
        }
    }
    Ok(best)
}

/// Finite presentation of a b-divisor by ramification indices: named base
/// curves, named exceptional addresses, and a default for every other
/// exceptional divisor. Base curves not named have index 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BDivisorSpec {
    pub base_ram: BTreeMap<CurveId, u64>,
    pub exceptional_ram: BTreeMap<String, u64>,
    pub default_ram: u64,
}

impl BDivisorSpec {
    pub fn trivial() -> Self {
        BDivisorSpec {
            base_ram: BTreeMap::new(),
            exceptional_ram: BTreeMap::new(),
            default_ram: 1,
        }
    }

    pub fn check(&self, config: &CurveConfig) -> Result<()> {
        if self.default_ram == 0 {
            return Err(Error::BadRamification("default_ram must be at least 1".into()));
        }
        for (c, &r) in &self.base_ram {
            if r == 0 {
                return Err(Error::BadRamification(format!("index 0 on `{c}`")));
            }
            if !config.contains(c) {
                return Err(Error::UnknownCurve(c.0.clone()));
            }
        }
        for (addr, &r) in &self.exceptional_ram {
            if r == 0 {
                return Err(Error::BadRamification(format!("index 0 at `{addr}`")));
            }
        }
        Ok(())
    }

    /// The trace on the base: `(1 - 1/r) C` on each named curve, in the
    /// configuration's curve order.
    pub fn trace(&self, config: &CurveConfig) -> Result<OrbifoldDivisor> {
        self.check(config)?;
        OrbifoldDivisor::new(config.curves.iter().filter_map(|c| {
            self.base_ram
                .get(c)
                .map(|&r| (c.clone(), Coefficient::Mult(r)))
        }))
    }

    pub fn ramification_at(&self, address: &str) -> u64 {
        self.exceptional_ram
            .get(address)
            .copied()
            .unwrap_or(self.default_ram)
    }
}

/// `b = r(a + 1) - 1`.
pub fn b_discrepancy(a: &Rational, r: &Rational) -> Rational {
    r * (a + Rational::one()) - Rational::one()
}

/// Tower with ramification indices and b, b' filled in.
pub fn b_tower(config: &CurveConfig, spec: &BDivisorSpec, depth: usize) -> Result<Vec<TowerNode>> {
    let delta = spec.trace(config)?;
    let mut nodes = tower_discrepancies(config, &delta, depth)?;
    for node in &mut nodes {
        let r = Rational::integer(spec.ramification_at(&node.address_string()) as i64);
        let b = b_discrepancy(&node.a_disc, &r);
        node.b_prime = Some(&b / &r);
        node.b_disc = Some(b);
        node.r_index = Some(r);
    }
    Ok(nodes)
}

/// Verdicts for `(X, Delta)` at a fixed `epsilon`, relative to the search depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairClass {
    pub infimum: Discrep,
    pub search_depth: usize,
    pub epsilon: Rational,
    pub terminal: bool,
    pub canonical: bool,
    pub klt: bool,
    pub lc: bool,
    pub eps_terminal: bool,
    pub eps_canonical: bool,
    pub eps_plt: bool,
    pub eps_lc: bool,
    pub eps_klt: bool,
    /// True when the witnessed infimum is the true discrepancy (lc SNC pairs).
    pub exact: bool,
}

impl PairClass {
    pub fn from_infimum(
        infimum: Discrep,
        epsilon: Rational,
        floor_nonpositive: bool,
        search_depth: usize,
    ) -> Self {
        let zero = Rational::zero();
        let minus_one = Rational::integer(-1);
        let eps_minus_one = &epsilon - Rational::one();
        PairClass {
            terminal: infimum.gt(&zero),
            canonical: infimum.ge(&zero),
            klt: infimum.gt(&minus_one) && floor_nonpositive,
            lc: infimum.ge(&minus_one),
            eps_terminal: infimum.gt(&epsilon),
            eps_canonical: infimum.ge(&epsilon),
            eps_plt: infimum.gt(&eps_minus_one),
            eps_lc: infimum.ge(&eps_minus_one),
            eps_klt: infimum.gt(&eps_minus_one) && floor_nonpositive,
            exact: infimum.ge(&minus_one),
            infimum,
            search_depth,
            epsilon,
        }
    }
}

pub fn classify_pair(
    config: &CurveConfig,
    delta: &OrbifoldDivisor,
    epsilon: &Rational,
    depth: usize,
) -> Result<PairClass> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let inf = discrep_estimate(config, delta, depth)?;
    let floor_ok = delta
        .round_down(config)?
        .iter()
        .all(|x| !x.is_positive());
    Ok(PairClass::from_infimum(inf, epsilon.clone(), floor_ok, depth))
}

/// Verdicts for a b-pair `(X, D)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BPairClass {
    pub infimum: Discrep,
    pub search_depth: usize,
    pub b_terminal: bool,
    pub b_canonical: bool,
    pub b_lt: bool,
    pub b_lc: bool,
    /// All ramification indices are integers.
    pub b_orbifold: bool,
}

pub fn classify_b_pair(config: &CurveConfig, spec: &BDivisorSpec, depth: usize) -> Result<BPairClass> {
    let nodes = b_tower(config, spec, depth)?;
    let infimum = if nodes.iter().any(|n| n.a_disc < Rational::integer(-1)) {
        Discrep::NegInfinity
    } else {
        infimum(nodes.iter().filter_map(|n| n.b_disc.as_ref()))
    };
    let zero = Rational::zero();
    let minus_one = Rational::integer(-1);
    Ok(BPairClass {
        b_terminal: infimum.gt(&zero),
        b_canonical: infimum.ge(&zero),
        b_lt: infimum.gt(&minus_one),
        b_lc: infimum.ge(&minus_one),
        b_orbifold: nodes
            .iter()
            .all(|n| n.r_index.as_ref().is_some_and(Rational::is_integer)),
        infimum,
        search_depth: depth,
    })
}

/// Truth values of the hypotheses and conclusions of the comparison between
/// `a`, `b` and `b'` for one comparison operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonCheck {
    /// `b > eps + delta`
    pub i_hypothesis: bool,
    /// `b' > (eps + delta)/r`
    pub i_b_prime: bool,
    /// `a > (eps + delta + 1)/r - 1`
    pub i_a: bool,
    /// `a > eps + delta`
    pub ii_hypothesis: bool,
    /// `b > r(eps + delta + 1) - 1`
    pub ii_b: bool,
    /// `b' > eps + delta + 1 - 1/r`
    pub ii_b_prime: bool,
}

impl ComparisonCheck {
    /// Every hypothesis that holds is followed by its conclusions.
    pub fn consistent(&self) -> bool {
        (!self.i_hypothesis || (self.i_b_prime && self.i_a))
            && (!self.ii_hypothesis || (self.ii_b && self.ii_b_prime))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop51Report {
    pub a: Rational,
    pub r: Rational,
    pub b: Rational,
    pub b_prime: Rational,
    pub strict: ComparisonCheck,
    pub non_strict: ComparisonCheck,
}

impl Prop51Report {
    pub fn consistent(&self) -> bool {
        self.strict.consistent() && self.non_strict.consistent()
    }
}

/// Evaluates both implications relating `a`, `b`, `b'` on a concrete sample.
pub fn check_prop51(a: &Rational, r: &Rational, epsilon: &Rational, delta: &Rational) -> Prop51Report {
    let one = Rational::one();
    let b = b_discrepancy(a, r);
    let b_prime = &b / r;
    let s = epsilon + delta;
    let i_b_prime_bound = &s / r;
    let i_a_bound = (&s + &one) / r - &one;
    let ii_b_bound = r * (&s + &one) - &one;
    let ii_b_prime_bound = &s + &one - r.recip();
    let check = |cmp: fn(&Rational, &Rational) -> bool| ComparisonCheck {
        i_hypothesis: cmp(&b, &s),
        i_b_prime: cmp(&b_prime, &i_b_prime_bound),
        i_a: cmp(a, &i_a_bound),
        ii_hypothesis: cmp(a, &s),
        ii_b: cmp(&b, &ii_b_bound),
        ii_b_prime: cmp(&b_prime, &ii_b_prime_bound),
    };
    Prop51Report {
        strict: check(|x, y| x > y),
        non_strict: check(|x, y| x >= y),
        a: a.clone(),
        r: r.clone(),
        b,
        b_prime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::{QMatrix, QVector};
    use crate::rational::q;

    fn two_curves(meet: i64) -> CurveConfig {
        CurveConfig::new(
            "AB",
            vec!["A".into(), "B".into()],
            QMatrix::from_int_rows(&[&[1, meet], &[meet, 1]]).unwrap(),
            QVector::from_ints(&[-3, -3]),
            None,
            true,
        )
        .unwrap()
    }

    fn frac(items: &[(&str, Rational)]) -> OrbifoldDivisor {
        OrbifoldDivisor::new(
            items
                .iter()
                .map(|(c, d)| (CurveId::new(*c), Coefficient::Frac(d.clone()))),
        )
        .unwrap()
    }

    /// Independent recursion over explicit coefficient lists and meeting
    /// counts; returns every discrepancy value in the tower.
    fn brute_tower(coeffs: Vec<Rational>, meets: Vec<Vec<u32>>, depth: usize, out: &mut Vec<Rational>) {
        if depth == 0 {
            return;
        }
        let n = coeffs.len();
        let mut centers: Vec<Vec<usize>> = vec![vec![]];
        centers.extend((0..n).map(|i| vec![i]));
        for i in 0..n {
            for j in i + 1..n {
                for _ in 0..meets[i][j] {
                    centers.push(vec![i, j]);
                }
            }
        }
        for through in centers {
            let a = Rational::one() - through.iter().map(|&i| coeffs[i].clone()).sum::<Rational>();
            out.push(a.clone());
            let mut c2 = coeffs.clone();
            c2.push(-a);
            let mut m2 = meets.clone();
            if through.len() == 2 {
                m2[through[0]][through[1]] -= 1;
                m2[through[1]][through[0]] -= 1;
            }
            for (i, row) in m2.iter_mut().enumerate() {
                row.push(u32::from(through.contains(&i)));
            }
            let mut last: Vec<u32> = (0..n).map(|i| u32::from(through.contains(&i))).collect();
            last.push(0);
            m2.push(last);
            brute_tower(c2, m2, depth - 1, out);
        }
    }

    #[test]
    fn empty_boundary_depth_one() {
        let nodes = tower_discrepancies(&fixtures::p2(), &OrbifoldDivisor::empty(), 1).unwrap();
        assert_eq!(nodes.len(), 1);
        assert!(nodes.iter().all(|n| n.a_disc == q(1, 1)));
    }

    #[test]
    fn half_boundary_depth_one() {
        let cfg = fixtures::p2();
        let delta = OrbifoldDivisor::from_multiplicities([("H", 2)]).unwrap();
        let nodes = tower_discrepancies(&cfg, &delta, 1).unwrap();
        let by_addr: Vec<(String, Rational)> =
            nodes.iter().map(|n| (n.address_string(), n.a_disc.clone())).collect();
        assert_eq!(
            by_addr,
            vec![("*".to_string(), q(1, 1)), ("H".to_string(), q(1, 2))]
        );
    }

    #[test]
    fn crossing_boundary_depth_one() {
        let cfg = two_curves(1);
        let delta = OrbifoldDivisor::from_multiplicities([("A", 2), ("B", 3)]).unwrap();
        let nodes = tower_discrepancies(&cfg, &delta, 1).unwrap();
        let node = nodes.iter().find(|n| n.address_string() == "A^B#0").unwrap();
        assert_eq!(node.a_disc, q(-1, 6));
    }

    #[test]
    fn tower_matches_brute_recursion() {
        let cfg = two_curves(2);
        let delta = frac(&[("A", q(3, 5)), ("B", q(5, 7))]);
        for depth in 1..=3 {
            let nodes = tower_discrepancies(&cfg, &delta, depth).unwrap();
            let mut ours: Vec<Rational> = nodes.iter().map(|n| n.a_disc.clone()).collect();
            let mut theirs = Vec::new();
            brute_tower(vec![q(3, 5), q(5, 7)], vec![vec![0, 2], vec![2, 0]], depth, &mut theirs);
            ours.sort();
            theirs.sort();
            assert_eq!(ours, theirs);
        }
    }

    #[test]
    fn second_level_addresses() {
        let cfg = two_curves(1);
        let delta = OrbifoldDivisor::from_multiplicities([("A", 2), ("B", 3)]).unwrap();
        let nodes = tower_discrepancies(&cfg, &delta, 2).unwrap();
        // Over the exceptional of A^B#0 (coefficient 1/6) meeting A: 1 - 1/2 - 1/6.
        let n = nodes.iter().find(|n| n.address_string() == "A^B#0;A^@1#0").unwrap();
        assert_eq!(n.a_disc, q(1, 3));
        assert_eq!(n.depth, 2);
        // The original A, B point is used up after the first blowup.
        assert!(nodes.iter().all(|n| n.address_string() != "A^B#0;A^B#0"));
        let depths: Vec<usize> = nodes.iter().map(|n| n.depth).collect();
        assert!(depths.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn estimates() {
        let p2 = fixtures::p2();
        assert_eq!(
            discrep_estimate(&p2, &OrbifoldDivisor::empty(), 3).unwrap(),
            Discrep::Finite(q(1, 1))
        );
        let half = OrbifoldDivisor::from_multiplicities([("H", 2)]).unwrap();
        assert_eq!(
            discrep_estimate(&p2, &half, 1).unwrap(),
            Discrep::Finite(q(1, 2))
        );
        // SNC boundaries with coefficients below one never leave [-1, 1]:
        // the most extreme case stays above -1 at every depth.
        let cfg = two_curves(1);
        let heavy = frac(&[("A", q(24, 25)), ("B", q(24, 25))]);
        for depth in 1..=3 {
            let d = discrep_estimate(&cfg, &heavy, depth).unwrap();
            assert_eq!(d, Discrep::Finite(q(-23, 25)));
        }
    }

    #[test]
    fn infimum_collapses_below_minus_one() {
        let values = [q(1, 1), q(-3, 2), q(1, 2)];
        assert_eq!(infimum(values.iter()), Discrep::NegInfinity);
        let values = [q(1, 1), q(-1, 1)];
        assert_eq!(infimum(values.iter()), Discrep::Finite(q(-1, 1)));
    }

    #[test]
    fn closed_form_examples() {
        let p2 = fixtures::p2();
        assert_eq!(snc_closed_form(&p2, &OrbifoldDivisor::empty()).unwrap(), q(1, 1));
        let half = OrbifoldDivisor::from_multiplicities([("H", 2)]).unwrap();
        assert_eq!(snc_closed_form(&p2, &half).unwrap(), q(1, 2));
        let cfg = two_curves(1);
        let d = OrbifoldDivisor::from_multiplicities([("A", 2), ("B", 3)]).unwrap();
        assert_eq!(snc_closed_form(&cfg, &d).unwrap(), q(-1, 6));
        let apart = two_curves(0);
        assert_eq!(snc_closed_form(&apart, &d).unwrap(), q(1, 3));
    }

    #[test]
    fn depth_guards() {
        let p2 = fixtures::p2();
        let e = OrbifoldDivisor::empty();
        assert!(matches!(
            tower_discrepancies(&p2, &e, 7),
            Err(Error::DepthTooLarge { requested: 7, cap: 6 })
        ));
        assert!(matches!(
            tower_discrepancies(&p2, &e, 0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            tower_discrepancies_capped(&p2, &e, 3, 2),
            Err(Error::DepthTooLarge { .. })
        ));
        let mut singular = p2.clone();
        singular.smooth_model = false;
        assert_eq!(tower_discrepancies(&singular, &e, 1), Err(Error::NotSmoothModel));
    }

    #[test]
    fn non_snc_boundary_rejected() {
        let cfg = CurveConfig::new(
            "bad",
            vec!["A".into(), "B".into()],
            QMatrix::from_rows(vec![vec![q(-2, 1), q(1, 2)], vec![q(1, 2), q(-2, 1)]]).unwrap(),
            QVector::from_ints(&[0, 0]),
            None,
            true,
        )
        .unwrap();
        let d = OrbifoldDivisor::from_multiplicities([("A", 2), ("B", 2)]).unwrap();
        assert!(matches!(tower_discrepancies(&cfg, &d, 1), Err(Error::NotSnc(_))));
    }

    #[test]
    fn b_tower_examples() {
        let cfg = two_curves(1);
        let trivial = BDivisorSpec::trivial();
        for n in b_tower(&cfg, &trivial, 2).unwrap() {
            assert_eq!(n.b_disc.as_ref(), Some(&n.a_disc));
            assert_eq!(n.b_prime.as_ref(), Some(&n.a_disc));
        }
        assert_eq!(b_discrepancy(&q(1, 2), &q(2, 1)), q(2, 1));
        assert_eq!(&b_discrepancy(&q(1, 2), &q(2, 1)) / &q(2, 1), q(1, 1));
        assert_eq!(b_discrepancy(&q(-1, 6), &q(6, 1)), q(4, 1));
        assert_eq!(&b_discrepancy(&q(-1, 6), &q(6, 1)) / &q(6, 1), q(2, 3));

        // Named exceptional ramification reaches the right node.
        let spec = BDivisorSpec {
            base_ram: [("A".into(), 2), ("B".into(), 3)].into_iter().collect(),
            exceptional_ram: [("A^B#0".to_string(), 6)].into_iter().collect(),
            default_ram: 1,
        };
        let nodes = b_tower(&cfg, &spec, 1).unwrap();
        let n = nodes.iter().find(|n| n.address_string() == "A^B#0").unwrap();
        assert_eq!(n.a_disc, q(-1, 6));
        assert_eq!(n.b_disc, Some(q(4, 1)));
        assert_eq!(n.b_prime, Some(q(2, 3)));
    }

    #[test]
    fn bad_ramification() {
        let cfg = two_curves(1);
        let mut spec = BDivisorSpec::trivial();
        spec.default_ram = 0;
        assert!(matches!(b_tower(&cfg, &spec, 1), Err(Error::BadRamification(_))));
        let mut spec = BDivisorSpec::trivial();
        spec.base_ram.insert("A".into(), 0);
        assert!(matches!(b_tower(&cfg, &spec, 1), Err(Error::BadRamification(_))));
        let mut spec = BDivisorSpec::trivial();
        spec.base_ram.insert("Z".into(), 2);
        assert!(matches!(b_tower(&cfg, &spec, 1), Err(Error::UnknownCurve(_))));
    }

    #[test]
    fn pair_classification() {
        let p2 = fixtures::p2();
        let eps = q(1, 10);
        let c = classify_pair(&p2, &OrbifoldDivisor::empty(), &eps, 2).unwrap();
        assert!(c.terminal && c.canonical && c.klt && c.lc && c.eps_terminal);
        assert_eq!(c.infimum, Discrep::Finite(q(1, 1)));

        let half = OrbifoldDivisor::from_multiplicities([("H", 2)]).unwrap();
        let c = classify_pair(&p2, &half, &eps, 2).unwrap();
        assert!(c.terminal && c.klt);
        assert_eq!(c.infimum, Discrep::Finite(q(1, 2)));

        let cfg = two_curves(1);
        let d = OrbifoldDivisor::from_multiplicities([("A", 2), ("B", 3)]).unwrap();
        let c = classify_pair(&cfg, &d, &eps, 2).unwrap();
        assert_eq!(c.infimum, Discrep::Finite(q(-1, 6)));
        assert!(!c.canonical && !c.terminal && c.klt && c.lc);
        assert!(c.eps_plt && c.eps_klt && c.eps_lc && !c.eps_canonical);

        assert!(classify_pair(&cfg, &d, &q(0, 1), 1).is_err());
    }

    #[test]
    fn neg_infinity_fails_every_threshold() {
        let c = PairClass::from_infimum(Discrep::NegInfinity, q(1, 2), true, 3);
        assert!(!(c.terminal || c.canonical || c.klt || c.lc || c.eps_lc || c.exact));
    }

    #[test]
    fn b_pair_classification() {
        let p2 = fixtures::p2();
        let c = classify_b_pair(&p2, &BDivisorSpec::trivial(), 2).unwrap();
        assert!(c.b_terminal && c.b_orbifold);

        let half_h = BDivisorSpec {
            base_ram: [("H".into(), 2)].into_iter().collect(),
            exceptional_ram: BTreeMap::new(),
            default_ram: 1,
        };
        let c = classify_b_pair(&p2, &half_h, 1).unwrap();
        assert_eq!(c.infimum, Discrep::Finite(q(1, 2)));
        assert!(c.b_terminal);

        let cfg = two_curves(1);
        let both = BDivisorSpec {
            base_ram: [("A".into(), 2), ("B".into(), 2)].into_iter().collect(),
            exceptional_ram: BTreeMap::new(),
            default_ram: 1,
        };
        let c = classify_b_pair(&cfg, &both, 1).unwrap();
        assert_eq!(c.infimum, Discrep::Finite(q(0, 1)));
        assert!(c.b_canonical && !c.b_terminal && c.b_lt);
    }

    #[test]
    fn prop51_examples() {
        let r = check_prop51(&q(1, 1), &q(3, 1), &q(1, 2), &q(0, 1));
        assert_eq!(r.b, q(5, 1));
        assert_eq!(r.b_prime, q(5, 3));
        assert!(r.strict.ii_hypothesis && r.strict.ii_b && r.strict.ii_b_prime);
        assert!(r.consistent());

        for a in [q(-1, 1), q(-1, 2), q(0, 1), q(7, 3)] {
            let r = check_prop51(&a, &q(1, 1), &q(1, 3), &q(-1, 2));
            assert_eq!(r.b, a);
            assert_eq!(r.b_prime, a);
            assert_eq!(r.strict.i_hypothesis, r.strict.ii_hypothesis);
            assert!(r.consistent());
        }

        let r = check_prop51(&q(-1, 1), &q(4, 1), &q(1, 5), &q(-1, 1));
        assert_eq!(r.b, q(-1, 1));
        assert!(!r.strict.i_hypothesis && !r.strict.ii_hypothesis);
        assert!(!r.non_strict.i_hypothesis && !r.non_strict.ii_hypothesis);
    }

    #[test]
    fn spec_json_roundtrip() {
        let json = r#"{"base_ram":{"A":2},"exceptional_ram":{"A^B#0;@1":3},"default_ram":1}"#;
        let spec: BDivisorSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.ramification_at("A^B#0;@1"), 3);
        assert_eq!(serde_json::to_string(&spec).unwrap(), json);
    }
}
