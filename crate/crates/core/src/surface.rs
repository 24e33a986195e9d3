//! Combinatorial surface models.
//!
//! A [`CurveConfig`] records a finite list of curve classes together with
//! their intersection matrix and canonical degrees. Blowups, contractions and
//! Mumford pullbacks act on these lattice data only; no equations are kept.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{eval_form, is_negative_definite, solve_linear, QMatrix, QVector};
use crate::rational::Rational;

/// Characters reserved by the tower address grammar.
pub const RESERVED_LABEL_CHARS: &[char] = &[';', '^', '#', '@', '*'];

/// Opaque curve label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveId(pub String);

impl CurveId {
    pub fn new(s: impl Into<String>) -> Self {
        CurveId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for CurveId {
    fn from(s: &str) -> Self {
        CurveId(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveConfig {
    pub name: String,
    pub curves: Vec<CurveId>,
    pub form: QMatrix,
    pub kdeg: QVector,
    pub k_self: Option<Rational>,
    pub smooth_model: bool,
}

/// Point to blow up: the generic point (no curves), a general point of one
/// curve, or the `point_index`-th transversal intersection of two curves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlowupCenter {
    pub through: Vec<CurveId>,
    pub point_index: u32,
}

impl BlowupCenter {
    pub fn generic() -> Self {
        BlowupCenter {
            through: Vec::new(),
            point_index: 0,
        }
    }

    pub fn on_curve(c: impl Into<CurveId>) -> Self {
        BlowupCenter {
            through: vec![c.into()],
            point_index: 0,
        }
    }

    pub fn at_intersection(a: impl Into<CurveId>, b: impl Into<CurveId>, index: u32) -> Self {
        BlowupCenter {
            through: vec![a.into(), b.into()],
            point_index: index,
        }
    }
}

impl fmt::Display for BlowupCenter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.through.as_slice() {
            [] => f.write_str("*"),
            [c] => write!(f, "{c}"),
            [a, b] => write!(f, "{a}^{b}#{}", self.point_index),
            _ => write!(f, "<invalid>"),
        }
    }
}

impl From<String> for CurveId {
    fn from(s: String) -> Self {
        CurveId(s)
    }
}

/// Outcome of [`CurveConfig::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

/// Effective cycle: nonnegative integer multiplicities on a curve support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub coeffs: Vec<(CurveId, u64)>,
}

impl Cycle {
    pub fn multiplicity(&self, c: &CurveId) -> u64 {
        self.coeffs
            .iter()
            .find(|(id, _)| id == c)
            .map_or(0, |(_, m)| *m)
    }

    /// Coefficient vector in the ambient configuration.
    pub fn to_vector(&self, config: &CurveConfig) -> Result<QVector> {
        let mut v = QVector::zeros(config.len());
        for (id, m) in &self.coeffs {
            v[config.index_of(id)?] += Rational::integer(*m as i64);
        }
        Ok(v)
    }
}

impl CurveConfig {
    pub fn new(
        name: impl Into<String>,
        curves: Vec<CurveId>,
        form: QMatrix,
        kdeg: QVector,
        k_self: Option<Rational>,
        smooth_model: bool,
    ) -> Result<Self> {
        let config = CurveConfig {
            name: name.into(),
            curves,
            form,
            kdeg,
            k_self,
            smooth_model,
        };
        let report = config.validate();
        if report.valid {
            Ok(config)
        } else {
            Err(Error::Validation(report.violations.join("; ")))
        }
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn index_of(&self, id: &CurveId) -> Result<usize> {
        self.curves
            .iter()
            .position(|c| c == id)
            .ok_or_else(|| Error::UnknownCurve(id.0.clone()))
    }

    pub fn contains(&self, id: &CurveId) -> bool {
        self.curves.contains(id)
    }

    /// Class vector of a single curve.
    pub fn curve_vector(&self, id: &CurveId) -> Result<QVector> {
        Ok(QVector::unit(self.len(), self.index_of(id)?))
    }

    pub fn pairing(&self, a: &CurveId, b: &CurveId) -> Result<Rational> {
        Ok(self.form[(self.index_of(a)?, self.index_of(b)?)].clone())
    }

    pub fn self_intersection(&self, id: &CurveId) -> Result<Rational> {
        self.pairing(id, id)
    }

    pub fn canonical_degree(&self, id: &CurveId) -> Result<Rational> {
        Ok(self.kdeg[self.index_of(id)?].clone())
    }

    /// Checks every structural invariant and lists what fails.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.curves.len();
        if self.form.dim() != n {
            violations.push(format!(
                "form has dimension {} but there are {n} curves",
                self.form.dim()
            ));
        }
        if self.kdeg.len() != n {
            violations.push(format!(
                "kdeg has length {} but there are {n} curves",
                self.kdeg.len()
            ));
        }
        for (i, c) in self.curves.iter().enumerate() {
            if c.0.is_empty() {
                violations.push(format!("curve #{i} has an empty label"));
            } else if c.0.contains(RESERVED_LABEL_CHARS) {
                violations.push(format!("curve label `{c}` uses a reserved character"));
            }
            if self.curves[..i].contains(c) {
                violations.push(format!("duplicate curve label `{c}`"));
            }
        }
        if self.form.dim() == n && !self.form.is_symmetric() {
            violations.push("intersection form is not symmetric".into());
        }
        if self.smooth_model && self.form.dim() == n && self.kdeg.len() == n {
            for (i, c) in self.curves.iter().enumerate() {
                let self_int = &self.form[(i, i)];
                let k = &self.kdeg[i];
                if !(self_int.is_integer() && k.is_integer()) {
                    continue;
                }
                let genus = (self_int + k) / Rational::integer(2) + Rational::one();
                if !genus.is_integer() || genus.is_negative() {
                    violations.push(format!(
                        "curve `{c}` has arithmetic genus {genus}, expected a nonnegative integer"
                    ));
                }
            }
        }
        ValidationReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    fn check_vector(&self, v: &QVector) -> Result<()> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `D . D'` on this model.
    pub fn intersect(&self, d: &QVector, d2: &QVector) -> Result<Rational> {
        eval_form(&self.form, d, d2)
    }

    /// `p_a(Z) = (Z^2 + K.Z)/2 + 1`.
    pub fn arithmetic_genus(&self, z: &QVector) -> Result<Rational> {
        self.check_vector(z)?;
        let z2 = self.intersect(z, z)?;
        let kz = self.kdeg.dot(z)?;
        Ok((z2 + kz) / Rational::integer(2) + Rational::one())
    }

    fn fresh_label(&self) -> CurveId {
        (1..)
            .map(|k| CurveId(format!("E{k}")))
            .find(|c| !self.contains(c))
            .expect("unbounded label supply")
    }

    /// Blows up a point, naming the new exceptional curve automatically.
    pub fn blow_up(&self, center: &BlowupCenter) -> Result<(CurveConfig, CurveId)> {
        let label = self.fresh_label();
        self.blow_up_named(center, label)
    }

    /// Blows up a point on an SNC configuration; the new curve gets `label`.
    pub fn blow_up_named(
        &self,
        center: &BlowupCenter,
        label: CurveId,
    ) -> Result<(CurveConfig, CurveId)> {
        if !self.smooth_model {
            return Err(Error::NotSmoothModel);
        }
        if self.contains(&label) {
            return Err(Error::BadCenter(format!("label `{label}` already in use")));
        }
        let n = self.len();
        let mut mult = vec![0i64; n];
        match center.through.as_slice() {
            [] => {}
            [c] => mult[self.index_of(c)?] = 1,
            [a, b] => {
                let (i, j) = (self.index_of(a)?, self.index_of(b)?);
                if i == j {
                    return Err(Error::BadCenter(format!("`{a}` listed twice")));
                }
                let meet = &self.form[(i, j)];
                let available = meet.to_i64().filter(|&k| k >= 0).ok_or_else(|| {
                    Error::BadCenter(format!(
                        "`{a}` and `{b}` meet in {meet}, not a nonnegative integer"
                    ))
                })?;
                if i64::from(center.point_index) >= available {
                    return Err(Error::BadCenter(format!(
                        "point index {} but `{a}` and `{b}` meet {available} times",
                        center.point_index
                    )));
                }
                mult[i] = 1;
                mult[j] = 1;
            }
            _ => {
                return Err(Error::BadCenter(
                    "at most two curves may pass through a center".into(),
                ))
            }
        }

        let mut form = QMatrix::zeros(n + 1);
        for i in 0..n {
            for j in 0..n {
                form[(i, j)] = &self.form[(i, j)] - Rational::integer(mult[i] * mult[j]);
            }
            form[(i, n)] = Rational::integer(mult[i]);
            form[(n, i)] = Rational::integer(mult[i]);
        }
        form[(n, n)] = Rational::integer(-1);

        let mut kdeg: Vec<Rational> = self
            .kdeg
            .iter()
            .zip(&mult)
            .map(|(k, &m)| k + Rational::integer(m))
            .collect();
        kdeg.push(Rational::integer(-1));

        let mut curves = self.curves.clone();
        curves.push(label.clone());
        Ok((
            CurveConfig {
                name: self.name.clone(),
                curves,
                form,
                kdeg: QVector(kdeg),
                k_self: self.k_self.as_ref().map(|k| k - Rational::one()),
                smooth_model: true,
            },
            label,
        ))
    }

    fn bunch_indices(&self, bunch: &[CurveId]) -> Result<Vec<usize>> {
        let mut idx = Vec::with_capacity(bunch.len());
        for c in bunch {
            let i = self.index_of(c)?;
            if !idx.contains(&i) {
                idx.push(i);
            }
        }
        Ok(idx)
    }

    /// Checks negative definiteness of the restricted form and returns the
    /// indices of the bunch.
    fn negative_definite_block(&self, bunch: &[CurveId]) -> Result<(Vec<usize>, QMatrix)> {
        let idx = self.bunch_indices(bunch)?;
        let block = self.form.submatrix(&idx);
        if idx.is_empty() || !is_negative_definite(&block)? {
            return Err(Error::NotNegativeDefinite(
                bunch.iter().map(|c| c.0.clone()).collect(),
            ));
        }
        Ok((idx, block))
    }

    /// Returns `D + sum a_i E_i` orthogonal to every curve in `exceptional`.
    pub fn mumford_pullback(&self, exceptional: &[CurveId], d: &QVector) -> Result<QVector> {
        self.check_vector(d)?;
        let (idx, block) = self.negative_definite_block(exceptional)?;
        let full = self.form.mul_vec(d)?;
        let rhs = QVector(idx.iter().map(|&j| -&full[j]).collect());
        let a = solve_linear(&block, &rhs)?;
        let mut out = d.clone();
        for (k, &i) in idx.iter().enumerate() {
            out[i] += &a[k];
        }
        Ok(out)
    }

    /// Contracts a negative definite bunch, returning the model on the
    /// contracted surface with Mumford-corrected pairings.
    pub fn contract(&self, bunch: &[CurveId]) -> Result<CurveConfig> {
        let (idx, block) = self.negative_definite_block(bunch)?;
        let keep: Vec<usize> = (0..self.len()).filter(|i| !idx.contains(i)).collect();

        // Column k of `corr` holds the exceptional coefficients of the
        // pullback of the k-th surviving curve.
        let corr: Vec<QVector> = keep
            .iter()
            .map(|&c| {
                let rhs = QVector(idx.iter().map(|&e| -&self.form[(c, e)]).collect());
                solve_linear(&block, &rhs)
            })
            .collect::<Result<_>>()?;

        let mut form = QMatrix::zeros(keep.len());
        for (r, &ci) in keep.iter().enumerate() {
            for (s, &cj) in keep.iter().enumerate() {
                let correction: Rational = idx
                    .iter()
                    .enumerate()
                    .map(|(k, &e)| &corr[s][k] * &self.form[(ci, e)])
                    .sum();
                form[(r, s)] = &self.form[(ci, cj)] + correction;
            }
        }

        // pi^* K' = K - sum b_i E_i with (K - sum b_i E_i) . E_j = 0.
        let k_exc = QVector(idx.iter().map(|&e| self.kdeg[e].clone()).collect());
        let b = solve_linear(&block, &k_exc)?;
        let kdeg = QVector(
            keep.iter()
                .map(|&c| {
                    let correction: Rational = idx
                        .iter()
                        .enumerate()
                        .map(|(k, &e)| &b[k] * &self.form[(c, e)])
                        .sum();
                    &self.kdeg[c] - correction
                })
                .collect(),
        );
        let k_self = self
            .k_self
            .as_ref()
            .map(|k| k - b.dot(&k_exc).expect("same length"));

        let castelnuovo = idx.len() == 1 && {
            let e = idx[0];
            self.form[(e, e)] == Rational::integer(-1) && self.kdeg[e] == Rational::integer(-1)
        };

        Ok(CurveConfig {
            name: self.name.clone(),
            curves: keep.iter().map(|&i| self.curves[i].clone()).collect(),
            form,
            kdeg,
            k_self,
            smooth_model: self.smooth_model && castelnuovo,
        })
    }

    /// The configuration restricted to a subset of curves, in the given order.
    pub fn restrict(&self, support: &[CurveId]) -> Result<CurveConfig> {
        let idx = self.bunch_indices(support)?;
        Ok(CurveConfig {
            name: self.name.clone(),
            curves: idx.iter().map(|&i| self.curves[i].clone()).collect(),
            form: self.form.submatrix(&idx),
            kdeg: QVector(idx.iter().map(|&i| self.kdeg[i].clone()).collect()),
            k_self: self.k_self.clone(),
            smooth_model: self.smooth_model,
        })
    }
}
