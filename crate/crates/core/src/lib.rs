//! Exact intersection-theoretic tools for surface pairs with orbifold boundary:
//! contractibility of negative curves, discrepancy towers, b-discrepancies and
//! minimal model program steps.
//!
//! All arithmetic is over the rationals; no floating point is used.

pub mod contraction;
pub mod discrepancy;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod lattice;
pub mod mmp;
pub mod orbifold;
pub mod rational;
pub mod surface;

pub use contraction::{
    artin_test, classify_negative_curve, fundamental_cycle, platonic_check, CaseTag,
    ContractionVerdict, CurveClassification, MinusOneCertificate,
};
pub use discrepancy::{
    b_discrepancy, b_tower, check_prop51, classify_b_pair, classify_pair, discrep_estimate,
    snc_closed_form, tower_discrepancies, BDivisorSpec, BPairClass, Discrep, PairClass,
    Prop51Report, TowerNode,
};
pub use error::{Error, Result};
pub use io::{load_bundle, run_command, BundleSources, ConfigSource, Options, ProblemBundle};
pub use lattice::{is_negative_definite, leading_principal_minors, solve_linear, QMatrix, QVector};
pub use mmp::{find_negative_extremal, mmp_run, mmp_step, StepKind, StepOutcome};
pub use orbifold::{pair_degree, Coefficient, OrbifoldDivisor, PairDegreeReport};
pub use rational::{q, Rational};
pub use surface::{BlowupCenter, CurveConfig, CurveId, Cycle, ValidationReport};
