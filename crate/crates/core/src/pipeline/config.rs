use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::extractor::ExtractOptions;
use crate::mlpost::validate_ratios;
use crate::rdf::MissingImportPolicy;

/// Dataset variant. BASE skips materialization and realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Variant {
    Base,
    Materialize,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Base => "BASE",
            Variant::Materialize => "MATERIALIZE",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `builtin`, or `external:<dir>` for the file exchange with an outside
/// reasoner.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ReasonerChoice {
    #[default]
    Builtin,
    External(PathBuf),
}

impl FromStr for ReasonerChoice {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "builtin" => Ok(ReasonerChoice::Builtin),
            Some(("external", dir)) if !dir.is_empty() => Ok(ReasonerChoice::External(dir.into())),
            _ => Err(PipelineError::Config(format!(
                "reasoner must be `builtin` or `external:<dir>`, got `{s}`"
            ))),
        }
    }
}

impl TryFrom<String> for ReasonerChoice {
    type Error = PipelineError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<ReasonerChoice> for String {
    fn from(r: ReasonerChoice) -> String {
        match r {
            ReasonerChoice::Builtin => "builtin".into(),
            ReasonerChoice::External(dir) => format!("external:{}", dir.display()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImportPolicy {
    #[default]
    Fail,
    Warn,
}

impl From<ImportPolicy> for MissingImportPolicy {
    fn from(p: ImportPolicy) -> Self {
        match p {
            ImportPolicy::Fail => MissingImportPolicy::Fail,
            ImportPolicy::Warn => MissingImportPolicy::Warn,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Dataset name; bundles go to `<output>/<name>-<k>`.
    pub name: String,
    /// Schema and dump files, merged with their import closures.
    pub sources: Vec<PathBuf>,
    /// SPARQL endpoint for assertions. Without one the ABox comes from `sources`.
    pub endpoint: Option<String>,
    /// `IRI<TAB>path` catalog for `owl:imports`.
    pub catalog: Option<PathBuf>,
    pub missing_imports: ImportPolicy,
    /// Treat undeclared dump terms as individuals and object properties.
    pub infer_declarations: bool,
    pub k: u64,
    pub fixpoint: bool,
    pub degree_includes_types: bool,
    pub variants: Vec<Variant>,
    pub ratios: [f64; 3],
    pub seed: u64,
    pub leakage_filter: bool,
    pub decisions: Vec<PathBuf>,
    pub output: PathBuf,
    pub reasoner: ReasonerChoice,
    /// Unique name assumption for functional and cardinality clashes.
    pub una: bool,
    /// First id in the id maps.
    pub id_base: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            name: "KG".into(),
            sources: Vec::new(),
            endpoint: None,
            catalog: None,
            missing_imports: ImportPolicy::Fail,
            infer_declarations: true,
            k: 1,
            fixpoint: false,
            degree_includes_types: false,
            variants: vec![Variant::Base, Variant::Materialize],
            ratios: [0.8, 0.1, 0.1],
            seed: 42,
            leakage_filter: true,
            decisions: Vec::new(),
            output: PathBuf::from("out"),
            reasoner: ReasonerChoice::Builtin,
            una: true,
            id_base: 0,
        }
    }
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        let config: PipelineConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config always serializes")
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        validate_ratios(self.ratios)?;
        if self.k < 1 {
            return Err(PipelineError::Config("k must be at least 1".into()));
        }
        if self.id_base > 1 {
            return Err(PipelineError::Config("id_base must be 0 or 1".into()));
        }
        if self.sources.is_empty() {
            return Err(PipelineError::Config("no source files".into()));
        }
        if self.variants.is_empty() {
            return Err(PipelineError::Config("no variants selected".into()));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(PipelineError::Config(format!("invalid dataset name `{}`", self.name)));
        }
        Ok(())
    }

    pub fn extract_options(&self) -> ExtractOptions {
        ExtractOptions {
            k: self.k,
            fixpoint: self.fixpoint,
            degree_includes_types: self.degree_includes_types,
        }
    }

    /// `<name>-<k>`.
    pub fn dataset_name(&self) -> String {
        format!("{}-{}", self.name, self.k)
    }

    pub fn bundle_dir(&self) -> PathBuf {
        self.output.join(self.dataset_name())
    }

    pub fn checkpoint_dir(&self) -> PathBuf {
        self.output.join("checkpoints")
    }

    /// Variants to build, sorted and deduplicated.
    pub fn selected_variants(&self) -> Vec<Variant> {
        let mut v = self.variants.clone();
        v.sort();
        v.dedup();
        v
    }
}
