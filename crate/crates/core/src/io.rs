//! The JSON model document and Graphviz export.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{new_model, LinkMode, Model, Params};
use crate::rational::Rational;

/// On-disk form of a model. Lists are kept sorted so that equal models
/// serialize to identical bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub agents: Vec<String>,
    pub features: Vec<String>,
    /// `[influencer, influenced]` pairs.
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    pub omega: Rational,
    pub tau: Rational,
    #[serde(default)]
    pub mode: LinkMode,
}

impl ModelDocument {
    pub fn from_model(model: &Model) -> ModelDocument {
        let sig = model.signature();
        let name = |s: &dyn AsRef<str>| s.as_ref().to_string();
        ModelDocument {
            agents: sig.agents().iter().map(|a| name(a)).collect(),
            features: sig.features().iter().map(|f| name(f)).collect(),
            edges: model
                .edges()
                .iter()
                .map(|(a, b)| [name(a), name(b)])
                .collect(),
            valuation: sig
                .agents()
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let fs = (0..sig.feature_count())
                        .filter(|&k| model.has(i, k))
                        .map(|k| name(&sig.features()[k]))
                        .collect();
                    (name(a), fs)
                })
                .collect(),
            omega: model.omega(),
            tau: model.tau(),
            mode: model.mode(),
        }
    }

    pub fn to_model(&self) -> Result<Model> {
        let params = Params::new(self.omega, self.tau, self.mode)?;
        new_model(
            &self.agents,
            &self.features,
            self.edges.iter().map(|[a, b]| (a, b)),
            &self.valuation,
            params,
        )
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<ModelDocument> {
        serde_json::from_str(text).map_err(|e| Error::Document {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

/// Parses and validates a model document.
pub fn model_from_json(text: &str) -> Result<Model> {
    ModelDocument::from_json(text)?.to_model()
}

pub fn model_to_json(model: &Model) -> String {
    ModelDocument::from_model(model).to_json()
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    model_from_json(&std::fs::read_to_string(path)?)
}

pub fn save_model(model: &Model, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, model_to_json(model))?;
    Ok(())
}

/// A Graphviz digraph: one node per agent labelled with its features, one
/// arrow per influence pair.
pub fn export_dot(model: &Model) -> String {
    let sig = model.signature();
    let mut out = String::from("digraph model {\n");
    for (i, a) in sig.agents().iter().enumerate() {
        let fs: Vec<&str> = (0..sig.feature_count())
            .filter(|&k| model.has(i, k))
            .map(|k| sig.features()[k].as_str())
            .collect();
        let _ = writeln!(out, "  {a} [label=\"{a} {{{}}}\"];", fs.join(","));
    }
    for (a, b) in model.edges() {
        let _ = writeln!(out, "  {a} -> {b};");
    }
    out.push_str("}\n");
    out
}

/// Convenience for tests and tools: thresholds from `"p/q"` strings.
pub fn params_from_str(omega: &str, tau: &str, mode: LinkMode) -> Result<Params> {
    Params::new(omega.parse::<Rational>()?, tau.parse::<Rational>()?, mode)
}
