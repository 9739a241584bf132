//! Rule-based reasoning with derivation tracking.
//!
//! The engine covers a sound but incomplete fragment of OWL 2: subclass and
//! equivalence propagation, intersections, existential and universal
//! restrictions, domains and ranges, the property hierarchy with inverses,
//! characteristics and chains, disjointness, complements and cardinality
//! bounds. Every derived fact remembers the axioms it came from, and
//! justifications are minimized by replaying the engine on subsets.
//!
//! [`materialize_schema`] and [`detect_unsatisfiable`] work on the schema;
//! [`check_consistency`] and [`realize`] add an ABox. The [`external`]
//! module exchanges files with an external reasoner.

mod abox;
pub mod external;
mod index;
mod schema;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::{Axiom, Characteristic, ClassExpression, EntityKind, EntityRef, Iri, Signature};

pub use abox::{check_consistency, realize, ConsistencyOptions};
pub use schema::{detect_unsatisfiable, materialize_schema, remove_unsatisfiable, with_inferred};

/// Schema closure over named classes and properties.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaClosure {
    /// `(sub, sup)` for every entailed subsumption between distinct named
    /// classes, `owl:Thing` excluded.
    pub subsumptions: BTreeSet<(Iri, Iri)>,
    /// Partition of the satisfiable class names into equivalence classes.
    pub equivalence_classes: Vec<BTreeSet<Iri>>,
    pub property_hierarchy: BTreeSet<(Iri, Iri)>,
    /// Unordered pairs stored with the smaller IRI first.
    pub inverse_pairs: BTreeSet<(Iri, Iri)>,
    pub equivalent_properties: Vec<BTreeSet<Iri>>,
    pub entailed_domains: BTreeMap<Iri, BTreeSet<ClassExpression>>,
    pub entailed_ranges: BTreeMap<Iri, BTreeSet<ClassExpression>>,
    pub entailed_characteristics: BTreeMap<Iri, BTreeSet<Characteristic>>,
}

impl SchemaClosure {
    pub fn is_subsumed(&self, sub: &Iri, sup: &Iri) -> bool {
        sub == sup || self.subsumptions.contains(&(sub.clone(), sup.clone()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClashKind {
    DisjointInstance,
    ComplementInstance,
    IrreflexiveSelfLoop,
    AsymmetricPair,
    FunctionalFanOut,
    InverseFunctionalFanIn,
    MaxCardinalityViolation,
    BottomInstance,
}

impl ClashKind {
    /// Kinds that only exist under the unique name assumption.
    pub fn needs_una(self) -> bool {
        matches!(
            self,
            ClashKind::FunctionalFanOut
                | ClashKind::InverseFunctionalFanIn
                | ClashKind::MaxCardinalityViolation
        )
    }
}

/// A contradiction found in the materialized ABox.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Clash {
    pub kind: ClashKind,
    /// The individual the clash is about first, then any witnesses.
    pub individuals: Vec<Iri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub property: Option<Iri>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassExpression>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", content = "value")]
pub enum Conclusion {
    Unsatisfiable(EntityRef),
    Clash(Clash),
    Entailed(Axiom),
}

/// Axioms from which the engine re-derives `conclusion`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Justification {
    pub support: Vec<Axiom>,
    pub conclusion: Conclusion,
}

impl Justification {
    /// The ABox assertions in the support set.
    pub fn assertions(&self) -> impl Iterator<Item = &Axiom> {
        self.support
            .iter()
            .filter(|ax| ax.box_kind() == crate::model::BoxKind::ABox)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JustifiedClash {
    pub clash: Clash,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnsatReport {
    pub unsatisfiable_classes: BTreeSet<Iri>,
    pub unsatisfiable_properties: BTreeSet<Iri>,
    pub justifications: BTreeMap<EntityRef, Vec<Justification>>,
}

impl UnsatReport {
    pub fn is_empty(&self) -> bool {
        self.unsatisfiable_classes.is_empty() && self.unsatisfiable_properties.is_empty()
    }

    /// Flagged classes and properties as a signature.
    pub fn entities(&self) -> Signature {
        self.unsatisfiable_classes
            .iter()
            .map(|iri| EntityRef::new(iri.clone(), EntityKind::Class))
            .chain(
                self.unsatisfiable_properties
                    .iter()
                    .map(|iri| EntityRef::new(iri.clone(), EntityKind::ObjectProperty)),
            )
            .collect()
    }

    /// Every justification, in entity order.
    pub fn all_justifications(&self) -> impl Iterator<Item = &Justification> {
        self.justifications.values().flatten()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReasonerError {
    #[error("cannot realize an inconsistent ABox ({0} clashes)")]
    Inconsistent(usize),
    #[error("external reasoner exchange: {0}")]
    Exchange(String),
    #[error(transparent)]
    Rdf(#[from] crate::rdf::RdfError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
