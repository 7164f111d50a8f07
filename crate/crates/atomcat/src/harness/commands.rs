//! The CLI subcommands as library calls. Each returns the text for stdout and
//! the files to write; nothing touches the filesystem until a command succeeded.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::RunConfig;
use super::io::{parse_json, read_json, Artifact};
use super::suites::{render_log, run_suite, SuiteOutcome, SuiteParams};
use super::worked::{render_table, worked_examples};
use crate::atomspec::{order_dot, spectrum, SpectrumJson, SpectrumReport};
use crate::ordertop::{alexandroff_of_poset, poset_of_topology, FiniteTopology, Poset, PosetJson, TopologyJson};
use crate::predictor::{
    crosscheck_report, predict_preset, predict_realization, preset_properties, preset_window, DiffReport, PropertyCheck, RealizationMode,
    SymbolicJson,
};
use crate::quiver::{gen_realization_acc, gen_realization_general, preset, ColoredQuiver, GeneratedQuiver, TruncationSpec};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub artifacts: Vec<Artifact>,
    /// False when a verification ran but found violations.
    pub success: bool,
}

/// `realize` and `preset` results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizeJson {
    pub generated: GeneratedQuiver,
    pub symbolic: SymbolicJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre_quotient: Option<SymbolicJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<std::collections::BTreeMap<String, String>>,
    pub brute: SpectrumJson,
    pub diff: DiffReport,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<PropertyCheck>,
}

fn ok(stdout: String, artifacts: Vec<Artifact>) -> Output {
    Output { stdout, artifacts, success: true }
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into())
}

/// Accepts a bare quiver or a generated quiver (its `quiver` field is used).
fn load_quiver(path: &Path) -> Result<ColoredQuiver, Error> {
    let v: Value = read_json(path)?;
    let inner = if v.get("quiver").is_some() { v["quiver"].clone() } else { v };
    parse_json(path, &inner.to_string())
}

pub fn spectrum_cmd(input: &Path, cfg: &RunConfig) -> Result<Output, Error> {
    let q = load_quiver(input)?;
    let r = spectrum(&q, cfg.field(), cfg.atom_options())?;
    let name = stem(input);
    let json = Artifact::json(format!("{name}.spectrum.json"), &r.to_json());
    let dot = Artifact::new(format!("{name}.spectrum.dot"), r.to_dot());
    Ok(ok(json.contents.clone(), vec![json, dot]))
}

fn realize_output(name: &str, g: GeneratedQuiver, cfg: &RunConfig, parts: RealizeParts) -> Result<Output, Error> {
    let brute = spectrum(&g.quiver, cfg.field(), cfg.atom_options())?;
    let diff = crosscheck_report(&parts.crosscheck_against, &g, &brute, cfg.field(), cfg.atom_options())?;
    let sym_dot = parts.symbolic.to_dot();
    let out = RealizeJson {
        generated: g,
        symbolic: parts.symbolic.to_json(),
        pre_quotient: parts.pre_quotient.map(|s| s.to_json()),
        witness: parts.witness,
        brute: brute.to_json(),
        diff,
        properties: parts.properties,
    };
    let json = Artifact::json(format!("{name}.json"), &out);
    let artifacts =
        vec![json.clone(), Artifact::new(format!("{name}.symbolic.dot"), sym_dot), Artifact::new(format!("{name}.brute.dot"), brute.to_dot())];
    Ok(Output { stdout: json.contents, artifacts, success: true })
}

struct RealizeParts {
    symbolic: crate::predictor::SymbolicSpectrum,
    crosscheck_against: crate::predictor::SymbolicSpectrum,
    pre_quotient: Option<crate::predictor::SymbolicSpectrum>,
    witness: Option<std::collections::BTreeMap<String, String>>,
    properties: Vec<PropertyCheck>,
}

/// Acc mode truncates at `cfg.depth` rounds; general mode at `cfg.depth`
/// ladder positions over the window `[0, 0]`.
pub fn realize_cmd(input: &Path, mode: RealizationMode, cfg: &RunConfig) -> Result<Output, Error> {
    let pj: PosetJson = read_json(input)?;
    let poset = Poset::from_json(&pj)?;
    let pred = predict_realization(&poset, mode)?;
    let (g, against) = match mode {
        RealizationMode::Acc => (gen_realization_acc(&poset, TruncationSpec::depth(cfg.depth))?, pred.spectrum.clone()),
        RealizationMode::General => (gen_realization_general(&poset, TruncationSpec::new(cfg.depth, 0, 0))?, pred.pre_quotient.clone()),
    };
    let parts = RealizeParts {
        symbolic: pred.spectrum,
        crosscheck_against: against,
        pre_quotient: Some(pred.pre_quotient),
        witness: Some(pred.witness),
        properties: Vec::new(),
    };
    realize_output(&format!("{}.realize", stem(input)), g, cfg, parts)
}

pub fn preset_cmd(name: &str, cfg: &RunConfig) -> Result<Output, Error> {
    let g = preset(name, cfg.depth)?;
    let n = preset_window(name, cfg.depth);
    let sym = predict_preset(name, n)?;
    let parts =
        RealizeParts { symbolic: sym.clone(), crosscheck_against: sym, pre_quotient: None, witness: None, properties: preset_properties(name, n)? };
    realize_output(&format!("{name}.preset"), g, cfg, parts)
}

pub fn verify_cmd(suite: &str, cfg: &RunConfig, params: SuiteParams) -> Result<Output, Error> {
    let outcomes: Vec<SuiteOutcome> = run_suite(suite, cfg, params)?;
    let log = render_log(&outcomes);
    let success = outcomes.iter().all(SuiteOutcome::passed);
    let artifacts = vec![Artifact::new(format!("verify-{suite}.log"), log.clone()), Artifact::json(format!("verify-{suite}.json"), &outcomes)];
    Ok(Output { stdout: log, artifacts, success })
}

pub fn examples_cmd(cfg: &RunConfig) -> Result<Output, Error> {
    let rows = worked_examples(cfg)?;
    let table = render_table(&rows);
    let success = rows.iter().all(|r| r.passed());
    Ok(Output { stdout: table.clone(), artifacts: vec![Artifact::new("examples.txt", table)], success })
}

/// Poset JSON becomes its Alexandroff topology and a topology its
/// specialization order, with a DOT picture of the order either way.
pub fn convert_cmd(input: &Path) -> Result<Output, Error> {
    let v: Value = read_json(input)?;
    let name = stem(input);
    let (poset, artifact) = if v.get("points").is_some() {
        let tj: TopologyJson = parse_json(input, &v.to_string())?;
        let p = poset_of_topology(&FiniteTopology::from_json(&tj)?)?;
        let a = Artifact::json(format!("{name}.poset.json"), &p.to_json());
        (p, a)
    } else {
        let pj: PosetJson = parse_json(input, &v.to_string())?;
        let p = Poset::from_json(&pj)?;
        let a = Artifact::json(format!("{name}.topology.json"), &alexandroff_of_poset(&p)?.to_json());
        (p, a)
    };
    let dot = Artifact::new(format!("{name}.order.dot"), order_dot(&poset, |_| false));
    Ok(ok(artifact.contents.clone(), vec![artifact, dot]))
}

/// Loads a spectrum report JSON back, for round-trip checks.
pub fn load_spectrum(path: &Path) -> Result<SpectrumReport, Error> {
    let j: SpectrumJson = read_json(path)?;
    Ok(SpectrumReport::from_json(&j)?)
}
