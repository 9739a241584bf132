//! File exchange with an external OWL reasoner.
//!
//! [`write_exchange`] writes the schema to `schema.ttl` in a directory. The
//! external tool is expected to leave its conclusions in `inferred.nt` in the
//! same directory, encoded with the usual OWL-to-RDF mapping.
//! [`read_inferred`] reads them back.

use std::fs;
use std::path::{Path, PathBuf};

use super::ReasonerError;
use crate::model::{Axiom, Ontology};
use crate::rdf::{self, DecodeOptions, RdfFormat};

pub const SCHEMA_FILE: &str = "schema.ttl";
pub const INFERRED_FILE: &str = "inferred.nt";

/// Writes the schema part of `ontology` to `dir/schema.ttl`.
pub fn write_exchange(ontology: &Ontology, dir: &Path) -> Result<PathBuf, ReasonerError> {
    fs::create_dir_all(dir)?;
    let mut schema = ontology.schema();
    schema.iri = ontology.iri.clone();
    let text = rdf::serialize(&schema, RdfFormat::Turtle)?;
    let path = dir.join(SCHEMA_FILE);
    fs::write(&path, text)?;
    Ok(path)
}

/// Reads `dir/inferred.nt` as a list of axioms.
pub fn read_inferred(dir: &Path) -> Result<Vec<Axiom>, ReasonerError> {
    let path = dir.join(INFERRED_FILE);
    if !path.exists() {
        return Err(ReasonerError::Exchange(format!(
            "{} not found",
            path.display()
        )));
    }
    let (ontology, report) = rdf::read_ontology(
        &path,
        &DecodeOptions {
            infer_declarations: true,
        },
    )?;
    if report.triples_skipped > 0 {
        log::warn!(
            "{}: {} triples did not decode to axioms",
            path.display(),
            report.triples_skipped
        );
    }
    Ok(ontology.axioms().cloned().collect())
}
