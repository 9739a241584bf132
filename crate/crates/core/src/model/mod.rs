//! In-memory representation of ontologies, axioms and signatures.

mod axiom;
mod expr;
mod iri;
mod json;
mod ontology;
mod signature;

pub use axiom::{
    classify_box, is_taxonomic, signature_of, Axiom, BoxKind, Characteristic, Provenance,
    RelationTriple,
};
pub use expr::ClassExpression;
pub use iri::Iri;
pub use ontology::Ontology;
pub use signature::{EntityKind, EntityRef, Signature};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("not an absolute IRI: {0:?}")]
    InvalidIri(String),
    #[error("{0} needs at least two operands, got {1}")]
    Arity(&'static str, usize),
}
