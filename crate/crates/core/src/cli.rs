//! Reproducible batch scenarios with machine-readable certificates.
//!
//! A scenario is described by a declarative TOML document; running it
//! produces a certificate whose verdicts are byte-identical across runs
//! with the same config (timing fields aside). Artifacts are files only.

use crate::complex::{
    build_slab_family, inclusion_induced_map, kernel_slab_connectivity, reduced_homology_with,
    witness_shrink_chain, witness_sphere, Constraint, HomologyOptions,
};
use crate::cones::{self, BoundVerdict, Verdict};
use crate::rat::{self, Rat};
use crate::root_data::{build_root_system, PlaceSpec, TypeLetter};
use crate::trees::{build_truncation, HVertex, TreeParams};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("validation: {0}")]
    Validation(String),
    #[error("scenario mismatch: {0} vs {1}")]
    ScenarioMismatch(String, String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 4,
            _ => 2,
        }
    }
}

/// Declarative description of one experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tree_product: Option<TreeProductSection>,
    #[serde(default)]
    pub sigma: Option<SigmaSection>,
    #[serde(default)]
    pub moufang_cover: Option<MoufangSection>,
    #[serde(default)]
    pub kernel_slab: Option<KernelSlabSection>,
    #[serde(default)]
    pub finiteness: Option<FinitenessSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeProductSection {
    pub q: u32,
    pub factors: usize,
    pub window: (i64, i64),
    /// rationals as "num/den"
    pub interval: (String, String),
    #[serde(default = "default_slack")]
    pub slack: i64,
    /// also check the nested-interval inclusion map and witness sphere
    #[serde(default)]
    pub with_witness: bool,
}

fn default_slack() -> i64 {
    2
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SigmaSection {
    #[serde(rename = "type")]
    pub type_letter: char,
    pub rank: usize,
    pub places: usize,
    #[serde(default = "default_base_field")]
    pub base_field: u64,
    pub m: usize,
    /// query form in restricted (kernel) coordinates, rationals as strings
    pub query: Vec<String>,
    /// optional torus directions (ambient coordinates) for the normal
    /// subgroup certificate
    #[serde(default)]
    pub torus_directions: Vec<Vec<String>>,
}

fn default_base_field() -> u64 {
    2
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoufangSection {
    pub q: u32,
    /// extension steps from the single-group seed at level 0
    pub steps: u32,
    pub window_radius: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelSlabSection {
    pub places: usize,
    #[serde(default = "default_base_field")]
    pub base_field: u64,
    #[serde(default)]
    pub degrees: Vec<u32>,
    pub width: String,
    pub window_halfwidth: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FinitenessSection {
    pub s: usize,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<ExperimentConfig, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// The reproducible output of a scenario run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub scenario: String,
    pub config_digest: String,
    pub tool_version: String,
    pub seed: u64,
    pub verdicts: Value,
    pub indeterminate: bool,
    pub wall_clock_ms: u128,
}

pub fn digest_of(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    hex::encode(h.finalize())
}

fn places_of(n: usize, base: u64, degrees: &[u32]) -> Result<Vec<PlaceSpec>, CliError> {
    (0..n)
        .map(|i| {
            let d = degrees.get(i).copied().unwrap_or(1);
            PlaceSpec::new(&format!("p{}", i + 1), d, base)
                .map_err(|e| CliError::Validation(e.to_string()))
        })
        .collect()
}

fn type_of(c: char) -> Result<TypeLetter, CliError> {
    TypeLetter::from_char(c).ok_or_else(|| CliError::Validation(format!("unknown type letter {c}")))
}

fn parse_rat_cli(s: &str) -> Result<Rat, CliError> {
    rat::parse_rat(s).map_err(CliError::Validation)
}

/// Execute a scenario described by the given TOML text.
pub fn run_scenario_text(text: &str, jobs: usize) -> Result<Certificate, CliError> {
    let config = ExperimentConfig::from_toml(text)?;
    run_scenario(&config, digest_of(text), jobs)
}

pub fn run_scenario(
    config: &ExperimentConfig,
    config_digest: String,
    jobs: usize,
) -> Result<Certificate, CliError> {
    let started = std::time::Instant::now();
    let (verdicts, indeterminate) = match config.scenario.as_str() {
        "tree-product" => tree_product_scenario(config, jobs)?,
        "sigma" => sigma_scenario(config)?,
        "moufang-cover" => moufang_scenario(config)?,
        "kernel-slab" => kernel_slab_scenario(config)?,
        "finiteness" => finiteness_scenario(config)?,
        other => {
            return Err(CliError::Validation(format!(
                "unknown scenario `{other}` (expected tree-product | sigma | moufang-cover | kernel-slab | finiteness)"
            )))
        }
    };
    Ok(Certificate {
        scenario: config.scenario.clone(),
        config_digest,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        verdicts,
        indeterminate,
        wall_clock_ms: started.elapsed().as_millis(),
    })
}

fn tree_product_scenario(
    config: &ExperimentConfig,
    jobs: usize,
) -> Result<(Value, bool), CliError> {
    let s = config
        .tree_product
        .as_ref()
        .ok_or_else(|| CliError::Validation("missing [tree_product] section".into()))?;
    if s.factors == 0 {
        return Err(CliError::Validation("factors must be >= 1".into()));
    }
    let params = TreeParams::new(s.q, "t").map_err(|e| CliError::Validation(e.to_string()))?;
    let tree = build_truncation(&params, s.window, &HVertex::apartment(s.window.0))
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let trees: Vec<_> = (0..s.factors).map(|_| tree.clone()).collect();
    let a = parse_rat_cli(&s.interval.0)?;
    let b = parse_rat_cli(&s.interval.1)?;
    let outer = Constraint::interval(a.clone(), b.clone());
    let mut constraints = vec![outer.clone()];
    if s.with_witness {
        // nested inner interval one level up from the bottom
        let inner_lo = &a + rat::rat(1);
        constraints.push(Constraint::interval(inner_lo.clone(), b.clone()));
        constraints.push(Constraint::level(a.clone()));
    }
    let family = build_slab_family(&trees, &constraints, s.slack, false)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let outer_slab = &family[0];
    let opts = HomologyOptions {
        collapse: true,
        jobs: jobs.max(1),
    };
    let summary = reduced_homology_with(outer_slab, &opts);
    if !summary.euler_consistent {
        return Err(CliError::Internal("Euler characteristic mismatch".into()));
    }
    let mut verdicts = json!({
        "homology": serde_json::to_value(&summary).unwrap(),
        "vanishing_through": summary.vanishing_through(s.factors.saturating_sub(2)),
    });
    if s.with_witness {
        let inner = &family[1];
        let map = inclusion_induced_map(inner, outer_slab, 1)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let nonzero = map
            .iter()
            .any(|r| r.iter().any(|v| !num_traits::Zero::is_zero(v)));
        let base: Vec<HVertex> = (0..s.factors)
            .map(|_| HVertex::apartment(s.window.0))
            .collect();
        let base_h: Rat = trees.iter().zip(&base).map(|(t, v)| t.height(v)).sum();
        let radius = &a - &base_h;
        let witness = witness_sphere(&trees, &base, radius.clone())
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let level_slab = &family[2];
        let nontrivial = witness
            .verify_nontrivial(level_slab)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let shrink_ok = if radius > rat::rat(1) {
            let smaller = witness_sphere(&trees, &base, &radius - rat::rat(1))
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let shrunk = witness_shrink_chain(&trees, &witness, rat::rat(1))
                .map_err(|e| CliError::Validation(e.to_string()))?;
            shrunk == smaller.cycle
        } else {
            true
        };
        verdicts["inclusion_map_nonzero"] = json!(nonzero);
        verdicts["witness_nontrivial"] = json!(nontrivial);
        verdicts["witness_cells"] = json!(witness.cycle.len());
        verdicts["shrink_chain_identity"] = json!(shrink_ok);
    }
    Ok((verdicts, false))
}

fn sigma_scenario(config: &ExperimentConfig) -> Result<(Value, bool), CliError> {
    let s = config
        .sigma
        .as_ref()
        .ok_or_else(|| CliError::Validation("missing [sigma] section".into()))?;
    let rs = build_root_system(type_of(s.type_letter)?, s.rank)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let places = places_of(s.places, s.base_field, &[])?;
    let query: Vec<Rat> = s
        .query
        .iter()
        .map(|x| parse_rat_cli(x))
        .collect::<Result<_, _>>()?;
    let verdict = cones::sigma_bound_classify(&rs, &places, s.m, &query)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let mut indeterminate = verdict.is_indeterminate();
    let mut verdicts = json!({
        "classification": serde_json::to_value(&verdict).unwrap(),
        "finiteness": serde_json::to_value(cones::finiteness_report(s.places)).unwrap(),
    });
    if !s.torus_directions.is_empty() {
        let dirs: Vec<Vec<Rat>> = s
            .torus_directions
            .iter()
            .map(|v| v.iter().map(|x| parse_rat_cli(x)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        let nsc: BoundVerdict = cones::normal_subgroup_certificate(&rs, &places, &dirs, s.m)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        indeterminate = indeterminate || nsc.verdict == Verdict::Indeterminate;
        verdicts["normal_subgroup"] = serde_json::to_value(&nsc).unwrap();
    }
    Ok((verdicts, indeterminate))
}

fn moufang_scenario(config: &ExperimentConfig) -> Result<(Value, bool), CliError> {
    let s = config
        .moufang_cover
        .as_ref()
        .ok_or_else(|| CliError::Validation("missing [moufang_cover] section".into()))?;
    let mut e = crate::moufang::Enumeration::single_group_seed(s.q, 0)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    for _ in 0..s.steps {
        e = crate::moufang::extend_directed_enumeration(&e)
            .map_err(|err| CliError::Validation(err.to_string()))?;
    }
    let audit = crate::moufang::verify_directedness(&e);
    let params = TreeParams::new(s.q, "t").map_err(|e| CliError::Validation(e.to_string()))?;
    let window = (-s.window_radius, s.window_radius + 1);
    let tree = build_truncation(&params, window, &HVertex::apartment(window.0))
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let coverage = crate::moufang::verify_covering(&e, &tree);
    let verdicts = json!({
        "enumeration_words": e.words.len(),
        "range": e.range,
        "audit_pass": audit.pass,
        "coverage": serde_json::to_value(&coverage).unwrap(),
    });
    Ok((verdicts, false))
}

fn kernel_slab_scenario(config: &ExperimentConfig) -> Result<(Value, bool), CliError> {
    let s = config
        .kernel_slab
        .as_ref()
        .ok_or_else(|| CliError::Validation("missing [kernel_slab] section".into()))?;
    let rs = build_root_system(TypeLetter::A, 1).expect("A1 is valid");
    let places = places_of(s.places, s.base_field, &s.degrees)?;
    let width = parse_rat_cli(&s.width)?;
    let summary = kernel_slab_connectivity(&rs, &places, width, s.window_halfwidth)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let want = s.places.saturating_sub(2);
    let verdicts = json!({
        "homology": serde_json::to_value(&summary).unwrap(),
        "vanishing_through": summary.vanishing_through(want),
        "expected_vanishing_degree": want,
        "finite_horizon": summary.boundary_contact,
    });
    Ok((verdicts, false))
}

fn finiteness_scenario(config: &ExperimentConfig) -> Result<(Value, bool), CliError> {
    let s = config
        .finiteness
        .as_ref()
        .ok_or_else(|| CliError::Validation("missing [finiteness] section".into()))?;
    if s.s < 1 {
        return Err(CliError::Validation("s must be >= 1".into()));
    }
    let report = cones::finiteness_report(s.s);
    Ok((
        json!({ "finiteness": serde_json::to_value(report).unwrap() }),
        false,
    ))
}

/// Structural difference of two certificates' verdicts (timing and version
/// fields are ignored by construction).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiffReport {
    pub equal: bool,
    pub differing_paths: Vec<String>,
}

pub fn compare_certificates(a: &Certificate, b: &Certificate) -> Result<DiffReport, CliError> {
    if a.scenario != b.scenario {
        return Err(CliError::ScenarioMismatch(
            a.scenario.clone(),
            b.scenario.clone(),
        ));
    }
    let mut paths = Vec::new();
    diff_values("verdicts", &a.verdicts, &b.verdicts, &mut paths);
    Ok(DiffReport {
        equal: paths.is_empty(),
        differing_paths: paths,
    })
}

fn diff_values(path: &str, a: &Value, b: &Value, out: &mut Vec<String>) {
    match (a, b) {
        (Value::Object(ma), Value::Object(mb)) => {
            let keys: std::collections::BTreeSet<&String> = ma.keys().chain(mb.keys()).collect();
            for k in keys {
                match (ma.get(k), mb.get(k)) {
                    (Some(va), Some(vb)) => diff_values(&format!("{path}.{k}"), va, vb, out),
                    _ => out.push(format!("{path}.{k}")),
                }
            }
        }
        (Value::Array(xa), Value::Array(xb)) => {
            if xa.len() != xb.len() {
                out.push(format!("{path}.length"));
                return;
            }
            for (i, (va, vb)) in xa.iter().zip(xb).enumerate() {
                diff_values(&format!("{path}[{i}]"), va, vb, out);
            }
        }
        _ => {
            if a != b {
                out.push(path.to_string());
            }
        }
    }
}

/// CSV rendering of a homology summary (degree, betti, torsion).
pub fn betti_csv(summary: &crate::complex::HomologySummary) -> String {
    let mut out = String::from("degree,betti,torsion\n");
    for (d, b) in summary.betti.iter().enumerate() {
        let tor = summary
            .torsion
            .get(d)
            .map(|t| t.join(" "))
            .unwrap_or_default();
        out.push_str(&format!("{d},{b},{tor}\n"));
    }
    out
}

// --- minimal JSON schema validation (type/properties/required/items/enum) ---

pub fn validate_against_schema(value: &Value, schema: &Value) -> Result<(), String> {
    validate_inner(value, schema, "$")
}

fn validate_inner(value: &Value, schema: &Value, path: &str) -> Result<(), String> {
    let Some(obj) = schema.as_object() else {
        return Ok(());
    };
    if let Some(ty) = obj.get("type").and_then(|t| t.as_str()) {
        let ok = match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "integer" => value.is_i64() || value.is_u64(),
            "number" => value.is_number(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            _ => true,
        };
        if !ok {
            return Err(format!("{path}: expected {ty}, got {value}"));
        }
    }
    if let Some(en) = obj.get("enum").and_then(|e| e.as_array()) {
        if !en.contains(value) {
            return Err(format!("{path}: value {value} not in enum"));
        }
    }
    if let Some(req) = obj.get("required").and_then(|r| r.as_array()) {
        let vo = value
            .as_object()
            .ok_or_else(|| format!("{path}: required fields on non-object"))?;
        for k in req {
            let key = k.as_str().unwrap_or_default();
            if !vo.contains_key(key) {
                return Err(format!("{path}: missing required field `{key}`"));
            }
        }
    }
    if let Some(props) = obj.get("properties").and_then(|p| p.as_object()) {
        if let Some(vo) = value.as_object() {
            for (k, sub) in props {
                if let Some(v) = vo.get(k) {
                    validate_inner(v, sub, &format!("{path}.{k}"))?;
                }
            }
        }
    }
    if let Some(items) = obj.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate_inner(v, items, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

pub const CERTIFICATE_SCHEMA: &str = include_str!("../schemas/certificate.schema.json");
pub const HOMOLOGY_SCHEMA: &str = include_str!("../schemas/homology.schema.json");
pub const TREE_SCHEMA: &str = include_str!("../schemas/tree.schema.json");
pub const ENUMERATION_AUDIT_SCHEMA: &str = include_str!("../schemas/audit.schema.json");
pub const CONE_CERTIFICATE_SCHEMA: &str = include_str!("../schemas/cone_certificate.schema.json");

#[cfg(test)]
mod tests {
    use super::*;

    const TREE_PRODUCT_CFG: &str = r#"
scenario = "tree-product"
seed = 7

[tree_product]
q = 2
factors = 2
window = [0, 6]
interval = ["3/2", "7/2"]
slack = 2
with_witness = false
"#;

    #[test]
    fn tree_product_scenario_runs_and_is_deterministic() {
        let a = run_scenario_text(TREE_PRODUCT_CFG, 1).unwrap();
        let b = run_scenario_text(TREE_PRODUCT_CFG, 1).unwrap();
        let diff = compare_certificates(&a, &b).unwrap();
        assert!(diff.equal, "determinism: {:?}", diff.differing_paths);
        assert_eq!(a.config_digest, b.config_digest);
        assert!(!a.indeterminate);
        // schema check
        let schema: Value = serde_json::from_str(CERTIFICATE_SCHEMA).unwrap();
        let v = serde_json::to_value(&a).unwrap();
        validate_against_schema(&v, &schema).unwrap();
    }

    #[test]
    fn sigma_scenario_indeterminate_exit_path() {
        let cfg = r#"
scenario = "sigma"

[sigma]
type = "A"
rank = 2
places = 2
base_field = 2
m = 1
query = ["1", "1"]
torus_directions = [["1", "-1", "-1", "1"]]
"#;
        let cert = run_scenario_text(cfg, 1).unwrap();
        assert!(
            cert.indeterminate,
            "between-bounds query must report indeterminate"
        );
    }

    #[test]
    fn finiteness_scenario_and_compare_mismatch() {
        let cfg = "scenario = \"finiteness\"\n[finiteness]\ns = 2\n";
        let cert = run_scenario_text(cfg, 1).unwrap();
        assert_eq!(cert.verdicts["finiteness"]["f_type"], json!(1));
        assert_eq!(cert.verdicts["finiteness"]["not_fp"], json!(2));
        let cfg2 = "scenario = \"kernel-slab\"\n[kernel_slab]\nplaces = 2\nwidth = \"1/2\"\nwindow_halfwidth = 1\n";
        let cert2 = run_scenario_text(cfg2, 1).unwrap();
        assert!(matches!(
            compare_certificates(&cert, &cert2),
            Err(CliError::ScenarioMismatch(_, _))
        ));
    }

    #[test]
    fn kernel_slab_scenario_vanishes() {
        let cfg = "scenario = \"kernel-slab\"\n[kernel_slab]\nplaces = 2\nwidth = \"1/2\"\nwindow_halfwidth = 2\n";
        let cert = run_scenario_text(cfg, 1).unwrap();
        assert_eq!(cert.verdicts["vanishing_through"], json!(true));
    }

    #[test]
    fn moufang_scenario_covers() {
        let cfg =
            "scenario = \"moufang-cover\"\n[moufang_cover]\nq = 2\nsteps = 2\nwindow_radius = 2\n";
        let cert = run_scenario_text(cfg, 1).unwrap();
        assert_eq!(cert.verdicts["audit_pass"], json!(true));
        assert_eq!(cert.verdicts["coverage"]["minimal_prefix"], json!(32));
    }

    #[test]
    fn invalid_window_rejected_with_diagnostic() {
        let cfg = r#"
scenario = "tree-product"
[tree_product]
q = 2
factors = 2
window = [0, 3]
interval = ["3/2", "7/2"]
"#;
        match run_scenario_text(cfg, 1) {
            Err(CliError::Validation(msg)) => assert!(msg.contains("slack")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn different_q_same_vanishing_pattern() {
        let cfg3 = TREE_PRODUCT_CFG.replace("q = 2", "q = 3");
        let a = run_scenario_text(TREE_PRODUCT_CFG, 1).unwrap();
        let b = run_scenario_text(&cfg3, 1).unwrap();
        let diff = compare_certificates(&a, &b).unwrap();
        assert!(!diff.equal, "cell counts differ across q");
        assert_eq!(
            a.verdicts["vanishing_through"], b.verdicts["vanishing_through"],
            "same vanishing pattern"
        );
    }
}
