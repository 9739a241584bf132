//! Distills RDF/OWL knowledge graphs into consistent, schema-complete
//! datasets for machine learning and reasoning.
//!
//! The crate is organised along the stages of the workflow:
//!
//! * [`model`]: ontologies, axioms, class expressions and signatures;
//! * [`rdf`]: N-Triples/Turtle/RDF-XML input, OWL-to-RDF mapping and import closure;
//! * [`reasoner`]: rule-based schema materialization, unsatisfiability
//!   detection, consistency checking with justifications and realization;
//! * [`extractor`]: degree-filtered ABox extraction from dumps or SPARQL endpoints;
//! * [`modularizer`]: signature-based module extraction and dataset decomposition;
//! * [`mlpost`]: splits, inversion-leakage filtering, id maps, JSON and COO export, statistics;
//! * [`pipeline`]: end-to-end orchestration with checkpoints and curation;
//! * [`synth`]: seeded synthetic graphs for tests and benchmarks.

pub mod extractor;
pub mod mlpost;
pub mod model;
pub mod modularizer;
pub mod pipeline;
pub mod rdf;
pub mod reasoner;
pub mod synth;
pub mod vocab;

pub use model::{
    Axiom, BoxKind, Characteristic, ClassExpression, EntityKind, EntityRef, Iri, Ontology,
    Provenance, RelationTriple, Signature,
};
