//! RDF input and output: parsing N-Triples, Turtle and RDF/XML documents,
//! mapping triples to OWL axioms and back, and collapsing import closures.

mod decode;
mod encode;
mod imports;
mod parse;
mod term;

use std::path::Path;

pub use decode::{triples_to_axioms, DecodeOptions, ParseReport, SkipReason};
pub use encode::{axioms_to_triples, serialize, write_triples};
pub use imports::{
    merge_import_closure, CatalogResolver, ChainResolver, Document, HttpResolver, ImportResolver,
    MissingImportPolicy,
};
pub use parse::{parse_document, parse_file, read_ontology, scope_blank_nodes};
pub use term::{Term, TripleRecord};

/// Supported RDF serializations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RdfFormat {
    NTriples,
    Turtle,
    /// Read-only.
    RdfXml,
}

impl RdfFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<RdfFormat> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "nt" => Some(RdfFormat::NTriples),
            "ttl" => Some(RdfFormat::Turtle),
            "rdf" | "owl" | "xml" => Some(RdfFormat::RdfXml),
            _ => None,
        }
    }

    /// Guesses the format from an HTTP content type.
    pub fn from_media_type(media_type: &str) -> Option<RdfFormat> {
        let base = media_type.split(';').next()?.trim();
        match base {
            "application/n-triples" => Some(RdfFormat::NTriples),
            "text/turtle" | "application/x-turtle" => Some(RdfFormat::Turtle),
            "application/rdf+xml" | "application/xml" | "text/xml" => Some(RdfFormat::RdfXml),
            _ => None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RdfError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: u64,
        column: u64,
        message: String,
    },
    #[error("RDF/XML error: {0}")]
    RdfXml(String),
    #[error("blank node list starting at _:{0} is not terminated by rdf:nil")]
    DanglingList(String),
    #[error("{0} cannot be written")]
    UnsupportedOutput(&'static str),
    #[error("unknown RDF format for {0}")]
    UnknownFormat(String),
    #[error("cannot resolve import <{0}>")]
    UnresolvedImport(String),
    #[error("fetching <{iri}> failed: {message}")]
    Fetch { iri: String, message: String },
    #[error("catalog line {line}: {message}")]
    Catalog { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
