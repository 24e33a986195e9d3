//! File formats, problem bundles and command dispatch.
//!
//! All interchange is JSON with rationals written as canonical strings.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::contraction::{artin_test, classify_negative_curve, ContractionVerdict, DEFAULT_BOUND_MULTIPLIER};
use crate::discrepancy::{
    b_tower, classify_b_pair, classify_pair, discrep_estimate, snc_closed_form, BDivisorSpec,
    BPairClass, Discrep, PairClass, DEFAULT_DEPTH,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::lattice::{QMatrix, QVector};
use crate::mmp::mmp_run;
use crate::orbifold::OrbifoldDivisor;
use crate::rational::Rational;
use crate::surface::{CurveConfig, CurveId};

pub const COMMANDS: &[&str] = &[
    "validate",
    "classify-curve",
    "artin-test",
    "discrep",
    "b-discrep",
    "classify-pair",
    "mmp-run",
];

pub const DEFAULT_MAX_STEPS: usize = 100;

/// On-disk layout of a surface configuration; field order is the emission order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigRecord {
    pub name: String,
    pub smooth_model: bool,
    pub curves: Vec<String>,
    pub form: Vec<Vec<Rational>>,
    pub kdeg: Vec<Rational>,
    pub k_self: Option<Rational>,
}

impl From<&CurveConfig> for ConfigRecord {
    fn from(c: &CurveConfig) -> Self {
        ConfigRecord {
            name: c.name.clone(),
            smooth_model: c.smooth_model,
            curves: c.curves.iter().map(|id| id.0.clone()).collect(),
            form: c.form.rows(),
            kdeg: c.kdeg.0.clone(),
            k_self: c.k_self.clone(),
        }
    }
}

impl TryFrom<ConfigRecord> for CurveConfig {
    type Error = Error;

    fn try_from(r: ConfigRecord) -> Result<Self> {
        let form = QMatrix::from_rows(r.form)
            .map_err(|e| Error::Validation(format!("form is not square: {e}")))?;
        CurveConfig::new(
            r.name,
            r.curves.into_iter().map(CurveId).collect(),
            form,
            QVector(r.kdeg),
            r.k_self,
            r.smooth_model,
        )
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{origin}: {e}")))
}

pub fn parse_config(text: &str, origin: &str) -> Result<CurveConfig> {
    let record: ConfigRecord = parse_json(text, origin)?;
    CurveConfig::try_from(record)
}

pub fn parse_boundary(text: &str, origin: &str) -> Result<OrbifoldDivisor> {
    parse_json(text, origin)
}

pub fn parse_bdiv(text: &str, origin: &str) -> Result<BDivisorSpec> {
    parse_json(text, origin)
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn emit_config(config: &CurveConfig) -> String {
    to_pretty(&ConfigRecord::from(config))
}

pub fn emit_boundary(delta: &OrbifoldDivisor) -> String {
    to_pretty(delta)
}

pub fn emit_bdiv(spec: &BDivisorSpec) -> String {
    to_pretty(spec)
}

/// The text of each file making up a bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedBundle {
    pub config: String,
    pub boundary: Option<String>,
    pub bdiv: Option<String>,
}

pub fn emit_bundle(bundle: &ProblemBundle) -> EmittedBundle {
    EmittedBundle {
        config: emit_config(&bundle.config),
        boundary: bundle.delta.as_ref().map(emit_boundary),
        bdiv: bundle.bdiv.as_ref().map(emit_bdiv),
    }
}

/// Parses emitted text back into a bundle with the given options.
pub fn parse_bundle(text: &EmittedBundle, options: Options) -> Result<ProblemBundle> {
    let config = parse_config(&text.config, "config")?;
    let delta = text
        .boundary
        .as_deref()
        .map(|t| parse_boundary(t, "boundary"))
        .transpose()?;
    let bdiv = text.bdiv.as_deref().map(|t| parse_bdiv(t, "bdiv")).transpose()?;
    ProblemBundle::new(config, delta, bdiv, options)
}

/// Numeric options shared by all commands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub depth: usize,
    pub epsilon: Rational,
    pub bound_multiplier: u64,
    pub max_steps: usize,
    pub curves: Vec<CurveId>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            depth: DEFAULT_DEPTH,
            epsilon: Rational::new(1, 10),
            bound_multiplier: DEFAULT_BOUND_MULTIPLIER,
            max_steps: DEFAULT_MAX_STEPS,
            curves: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigSource {
    File(PathBuf),
    Fixture(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleSources {
    pub config: ConfigSource,
    pub boundary: Option<PathBuf>,
    pub bdiv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemBundle {
    pub config: CurveConfig,
    pub delta: Option<OrbifoldDivisor>,
    pub bdiv: Option<BDivisorSpec>,
    pub options: Options,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn load_bundle(sources: &BundleSources, options: Options) -> Result<ProblemBundle> {
    let (config, fixture_boundary) = match &sources.config {
        ConfigSource::File(p) => (parse_config(&read(p)?, &p.display().to_string())?, None),
        ConfigSource::Fixture(name) => {
            let f = fixtures::by_name(name)
                .ok_or_else(|| Error::Validation(format!("no fixture named `{name}`")))?;
            (f.config, f.boundary)
        }
    };
    let delta = match &sources.boundary {
        Some(p) => Some(parse_boundary(&read(p)?, &p.display().to_string())?),
        None => fixture_boundary,
    };
    let bdiv = match &sources.bdiv {
        Some(p) => Some(parse_bdiv(&read(p)?, &p.display().to_string())?),
        None => None,
    };
    ProblemBundle::new(config, delta, bdiv, options)
}

impl ProblemBundle {
    /// Checks cross-references between the parts.
    pub fn new(
        config: CurveConfig,
        delta: Option<OrbifoldDivisor>,
        bdiv: Option<BDivisorSpec>,
        options: Options,
    ) -> Result<Self> {
        let report = config.validate();
        if !report.valid {
            return Err(Error::Validation(report.violations.join("; ")));
        }
        if let Some(d) = &delta {
            for (c, _) in d.components() {
                if !config.contains(c) {
                    return Err(Error::Validation(format!(
                        "boundary references unknown curve `{c}`"
                    )));
                }
            }
        }
        if let Some(spec) = &bdiv {
            spec.check(&config)
                .map_err(|e| Error::Validation(format!("b-divisor spec: {e}")))?;
        }
        if !options.epsilon.is_positive() {
            return Err(Error::Validation("epsilon must be positive".into()));
        }
        if options.depth == 0 {
            return Err(Error::Validation("depth must be at least 1".into()));
        }
        if options.bound_multiplier == 0 {
            return Err(Error::Validation("bound multiplier must be at least 1".into()));
        }
        for c in &options.curves {
            if !config.contains(c) {
                return Err(Error::Validation(format!("unknown curve `{c}`")));
            }
        }
        Ok(ProblemBundle {
            config,
            delta,
            bdiv,
            options,
        })
    }

    /// The boundary in force: explicit, else the trace of the b-divisor, else zero.
    pub fn effective_delta(&self) -> Result<OrbifoldDivisor> {
        match (&self.delta, &self.bdiv) {
            (Some(d), _) => Ok(d.clone()),
            (None, Some(spec)) => spec.trace(&self.config),
            (None, None) => Ok(OrbifoldDivisor::empty()),
        }
    }
}

#[derive(Serialize)]
struct ValidateReport<'a> {
    name: &'a str,
    valid: bool,
    violations: Vec<String>,
    curves: usize,
}

#[derive(Serialize)]
struct ArtinReport<'a> {
    support: &'a [CurveId],
    #[serde(flatten)]
    verdict: ContractionVerdict,
}

#[derive(Serialize)]
struct DiscrepReport {
    depth: usize,
    inf: Discrep,
    closed_form: Rational,
    nodes: usize,
    exact: bool,
}

#[derive(Serialize)]
struct ClassifyPairReport {
    pair: PairClass,
    b_pair: Option<BPairClass>,
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

/// Runs a command and returns what it prints on standard output.
pub fn run_command(bundle: &ProblemBundle, command: &str) -> Result<String> {
    let cfg = &bundle.config;
    let opts = &bundle.options;
    match command {
        "validate" => {
            let report = cfg.validate();
            Ok(to_pretty(&ValidateReport {
                name: &cfg.name,
                valid: report.valid,
                violations: report.violations,
                curves: cfg.len(),
            }))
        }
        "classify-curve" => {
            let [curve] = opts.curves.as_slice() else {
                return Err(Error::InvalidArgument(
                    "classify-curve needs exactly one --curve".into(),
                ));
            };
            let delta = bundle.effective_delta()?;
            Ok(to_pretty(&classify_negative_curve(cfg, &delta, curve)?))
        }
        "artin-test" => {
            let support = if opts.curves.is_empty() {
                cfg.curves.clone()
            } else {
                opts.curves.clone()
            };
            let verdict = artin_test(cfg, &support, opts.bound_multiplier)?;
            Ok(to_pretty(&ArtinReport {
                support: &support,
                verdict,
            }))
        }
        "discrep" => {
            let delta = bundle.effective_delta()?;
            let inf = discrep_estimate(cfg, &delta, opts.depth)?;
            let nodes = crate::discrepancy::tower_discrepancies(cfg, &delta, opts.depth)?.len();
            let exact = inf.finite().is_some_and(|v| *v >= Rational::integer(-1));
            Ok(to_pretty(&DiscrepReport {
                depth: opts.depth,
                inf,
                closed_form: snc_closed_form(cfg, &delta)?,
                nodes,
                exact,
            }))
        }
        "b-discrep" => {
            let spec = bundle
                .bdiv
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("b-discrep needs --bdiv".into()))?;
            Ok(b_tower(cfg, spec, opts.depth)?
                .iter()
                .map(json_line)
                .collect())
        }
        "classify-pair" => {
            let delta = bundle.effective_delta()?;
            let pair = classify_pair(cfg, &delta, &opts.epsilon, opts.depth)?;
            let b_pair = bundle
                .bdiv
                .as_ref()
                .map(|spec| classify_b_pair(cfg, spec, opts.depth))
                .transpose()?;
            Ok(to_pretty(&ClassifyPairReport { pair, b_pair }))
        }
        "mmp-run" => {
            let delta = bundle.effective_delta()?;
            Ok(mmp_run(cfg, &delta, opts.max_steps)?
                .iter()
                .map(json_line)
                .collect())
        }
        other => Err(Error::UnknownCommand(other.to_string())),
    }
}

/// Exit status for a failed run: 64 for an unknown command, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnknownCommand(_) => 64,
        _ => 2,
    }
}

/// One line per built-in fixture.
pub fn fixture_listing() -> String {
    fixtures::all()
        .iter()
        .map(|f| format!("{:<22} {}\n", f.name, f.description))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const P2_JSON: &str = r#"{"name":"P2","smooth_model":true,"curves":["H"],"form":[["1"]],"kdeg":["-3"],"k_self":"9"}"#;

    #[test]
    fn config_parses_and_emits_canonically() {
        let c = parse_config(P2_JSON, "p2").unwrap();
        assert_eq!(c, fixtures::p2());
        let emitted = emit_config(&c);
        let again = parse_config(&emitted, "again").unwrap();
        assert_eq!(emit_config(&again), emitted);
        let compact = serde_json::to_string(&ConfigRecord::from(&c)).unwrap();
        assert_eq!(compact, P2_JSON);
    }

    #[test]
    fn zero_denominator_is_a_parse_error() {
        let bad = P2_JSON.replace(r#"[["1"]]"#, r#"[["2/0"]]"#);
        let err = parse_config(&bad, "bad").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("line 1"), "{msg}"),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn invalid_config_is_a_validation_error() {
        let bad = P2_JSON.replace(r#"["-3"]"#, r#"["-3","0"]"#);
        assert!(matches!(parse_config(&bad, "bad"), Err(Error::Validation(_))));
    }

    #[test]
    fn boundary_with_unknown_curve() {
        let delta = parse_boundary(r#"{"components":[{"curve":"Z","m":2}]}"#, "b").unwrap();
        let err = ProblemBundle::new(fixtures::p2(), Some(delta), None, Options::default());
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn option_validation() {
        let opts = Options {
            epsilon: q(0, 1),
            ..Options::default()
        };
        assert!(ProblemBundle::new(fixtures::p2(), None, None, opts).is_err());
        let opts = Options {
            depth: 0,
            ..Options::default()
        };
        assert!(ProblemBundle::new(fixtures::p2(), None, None, opts).is_err());
    }

    #[test]
    fn classify_curve_command() {
        let (c, d) = fixtures::platonic_235();
        let opts = Options {
            curves: vec!["E".into()],
            ..Options::default()
        };
        let b = ProblemBundle::new(c, Some(d), None, opts).unwrap();
        let out: serde_json::Value = serde_json::from_str(&run_command(&b, "classify-curve").unwrap()).unwrap();
        assert_eq!(out["platonic"], serde_json::json!([2, 3, 5]));
        assert_eq!(out["report"]["pair_deg"], "-1/930");
        assert_eq!(out["case_tag"], "Case2");
    }

    #[test]
    fn discrep_command() {
        let delta = OrbifoldDivisor::from_multiplicities([("H", 2)]).unwrap();
        let opts = Options {
            depth: 1,
            ..Options::default()
        };
        let b = ProblemBundle::new(fixtures::p2(), Some(delta), None, opts).unwrap();
        let out: serde_json::Value = serde_json::from_str(&run_command(&b, "discrep").unwrap()).unwrap();
        assert_eq!(out["inf"], "1/2");
        assert_eq!(out["closed_form"], "1/2");
    }

    #[test]
    fn b_discrep_is_jsonl() {
        let spec: BDivisorSpec = parse_bdiv(r#"{"base_ram":{"H":2},"exceptional_ram":{},"default_ram":3}"#, "s").unwrap();
        let opts = Options {
            depth: 2,
            ..Options::default()
        };
        let b = ProblemBundle::new(fixtures::p2(), None, Some(spec), opts).unwrap();
        let out = run_command(&b, "b-discrep").unwrap();
        let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines[0]["address"], "*");
        assert_eq!(lines[0]["depth"], 1);
        assert_eq!(lines[0]["r"], "3");
        assert_eq!(lines[0]["b"], "5");
        let h = lines.iter().find(|l| l["address"] == "H").unwrap();
        assert_eq!(h["a"], "1/2");
        assert_eq!(h["b_prime"], "7/6");
    }

    #[test]
    fn mmp_command_emits_trace() {
        let opts = Options::default();
        let b = ProblemBundle::new(fixtures::p2_blown_up(), None, None, opts).unwrap();
        let out = run_command(&b, "mmp-run").unwrap();
        let kinds: Vec<String> = out
            .lines()
            .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["kind"].as_str().unwrap().to_string())
            .collect();
        assert_eq!(kinds, vec!["ContractedDivisorial", "PlaneCase"]);
        assert!(!out.contains('.'), "no floating point in output");
    }

    #[test]
    fn unknown_command() {
        let b = ProblemBundle::new(fixtures::p2(), None, None, Options::default()).unwrap();
        let err = run_command(&b, "flip").unwrap_err();
        assert_eq!(exit_code(&err), 64);
    }
}
