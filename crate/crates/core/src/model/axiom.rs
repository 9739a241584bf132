use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ClassExpression, EntityKind, EntityRef, Iri, Signature};

/// Object property characteristics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Characteristic {
    Functional,
    InverseFunctional,
    Transitive,
    Symmetric,
    Asymmetric,
    Reflexive,
    Irreflexive,
}

impl Characteristic {
    pub const ALL: [Characteristic; 7] = [
        Characteristic::Functional,
        Characteristic::InverseFunctional,
        Characteristic::Transitive,
        Characteristic::Symmetric,
        Characteristic::Asymmetric,
        Characteristic::Reflexive,
        Characteristic::Irreflexive,
    ];

    /// The characteristic that holds for the inverse of a property with this one.
    pub fn for_inverse(self) -> Characteristic {
        match self {
            Characteristic::Functional => Characteristic::InverseFunctional,
            Characteristic::InverseFunctional => Characteristic::Functional,
            other => other,
        }
    }
}

/// Which component of a knowledge base an axiom belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BoxKind {
    TBox,
    RBox,
    ABox,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Provenance {
    Asserted,
    Inferred,
}

/// An OWL 2 axiom over named object properties.
///
/// Structural equality is order-insensitive for `EquivalentClasses`,
/// `DisjointClasses`, `EquivalentObjectProperties` and
/// `InverseObjectProperties` once the axiom has been passed through
/// [`Axiom::canonical`], which every [`super::Ontology`] does on insertion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "super::json::AxiomRepr", from = "super::json::AxiomRepr")]
pub enum Axiom {
    SubClassOf {
        sub: ClassExpression,
        sup: ClassExpression,
    },
    EquivalentClasses(Vec<ClassExpression>),
    DisjointClasses(Vec<ClassExpression>),
    ClassAssertion {
        individual: Iri,
        class: ClassExpression,
    },
    ObjectPropertyAssertion {
        subject: Iri,
        property: Iri,
        object: Iri,
    },
    SubObjectPropertyOf {
        sub: Iri,
        sup: Iri,
    },
    SubPropertyChainOf {
        chain: Vec<Iri>,
        sup: Iri,
    },
    EquivalentObjectProperties(Vec<Iri>),
    InverseObjectProperties(Iri, Iri),
    ObjectPropertyDomain {
        property: Iri,
        domain: ClassExpression,
    },
    ObjectPropertyRange {
        property: Iri,
        range: ClassExpression,
    },
    Characteristic {
        property: Iri,
        characteristic: Characteristic,
    },
}

impl Axiom {
    pub fn subclass(sub: ClassExpression, sup: ClassExpression) -> Self {
        Axiom::SubClassOf { sub, sup }
    }

    pub fn class_assertion(individual: Iri, class: ClassExpression) -> Self {
        Axiom::ClassAssertion { individual, class }
    }

    pub fn relation(subject: Iri, property: Iri, object: Iri) -> Self {
        Axiom::ObjectPropertyAssertion {
            subject,
            property,
            object,
        }
    }

    /// Sorts and deduplicates operand lists whose order carries no meaning.
    pub fn canonical(self) -> Axiom {
        match self {
            Axiom::EquivalentClasses(mut ops) => {
                ops.sort();
                ops.dedup();
                Axiom::EquivalentClasses(ops)
            }
            Axiom::DisjointClasses(mut ops) => {
                ops.sort();
                ops.dedup();
                Axiom::DisjointClasses(ops)
            }
            Axiom::EquivalentObjectProperties(mut ops) => {
                ops.sort();
                ops.dedup();
                Axiom::EquivalentObjectProperties(ops)
            }
            Axiom::InverseObjectProperties(p, q) if q < p => Axiom::InverseObjectProperties(q, p),
            other => other,
        }
    }

    /// Every entity name occurring in the axiom, `owl:Thing`/`owl:Nothing` excluded.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        self.collect_signature(&mut sig);
        sig
    }

    pub fn collect_signature(&self, sig: &mut Signature) {
        let prop = |sig: &mut Signature, p: &Iri| {
            sig.insert(EntityRef::new(p.clone(), EntityKind::ObjectProperty));
        };
        match self {
            Axiom::SubClassOf { sub, sup } => {
                sub.collect_signature(sig);
                sup.collect_signature(sig);
            }
            Axiom::EquivalentClasses(ops) | Axiom::DisjointClasses(ops) => {
                ops.iter().for_each(|op| op.collect_signature(sig));
            }
            Axiom::ClassAssertion { individual, class } => {
                sig.insert(EntityRef::new(individual.clone(), EntityKind::NamedIndividual));
                class.collect_signature(sig);
            }
            Axiom::ObjectPropertyAssertion {
                subject,
                property,
                object,
            } => {
                sig.insert(EntityRef::new(subject.clone(), EntityKind::NamedIndividual));
                prop(sig, property);
                sig.insert(EntityRef::new(object.clone(), EntityKind::NamedIndividual));
            }
            Axiom::SubObjectPropertyOf { sub, sup } => {
                prop(sig, sub);
                prop(sig, sup);
            }
            Axiom::SubPropertyChainOf { chain, sup } => {
                chain.iter().for_each(|p| prop(sig, p));
                prop(sig, sup);
            }
            Axiom::EquivalentObjectProperties(ps) => ps.iter().for_each(|p| prop(sig, p)),
            Axiom::InverseObjectProperties(p, q) => {
                prop(sig, p);
                prop(sig, q);
            }
            Axiom::ObjectPropertyDomain {
                property,
                domain: ce,
            }
            | Axiom::ObjectPropertyRange {
                property,
                range: ce,
            } => {
                prop(sig, property);
                ce.collect_signature(sig);
            }
            Axiom::Characteristic { property, .. } => prop(sig, property),
        }
    }

    /// Top-level class expressions of the axiom.
    pub fn class_expressions(&self) -> Vec<&ClassExpression> {
        match self {
            Axiom::SubClassOf { sub, sup } => vec![sub, sup],
            Axiom::EquivalentClasses(ops) | Axiom::DisjointClasses(ops) => ops.iter().collect(),
            Axiom::ObjectPropertyDomain { domain: ce, .. }
            | Axiom::ObjectPropertyRange { range: ce, .. }
            | Axiom::ClassAssertion { class: ce, .. } => vec![ce],
            _ => Vec::new(),
        }
    }

    pub fn box_kind(&self) -> BoxKind {
        match self {
            Axiom::SubClassOf { .. } | Axiom::EquivalentClasses(_) | Axiom::DisjointClasses(_) => {
                BoxKind::TBox
            }
            Axiom::ClassAssertion { .. } | Axiom::ObjectPropertyAssertion { .. } => BoxKind::ABox,
            Axiom::SubObjectPropertyOf { .. }
            | Axiom::SubPropertyChainOf { .. }
            | Axiom::EquivalentObjectProperties(_)
            | Axiom::InverseObjectProperties(..)
            | Axiom::ObjectPropertyDomain { .. }
            | Axiom::ObjectPropertyRange { .. }
            | Axiom::Characteristic { .. } => BoxKind::RBox,
        }
    }

    /// `SubClassOf` between two named classes.
    pub fn is_taxonomic(&self) -> bool {
        matches!(
            self,
            Axiom::SubClassOf {
                sub: ClassExpression::Named(_),
                sup: ClassExpression::Named(_)
            }
        )
    }

    /// Axioms carrying no information: `X ⊑ X`, `X ⊑ ⊤`, `⊥ ⊑ X`, `x : ⊤`,
    /// and `⊤` domains or ranges.
    pub fn is_tautology(&self) -> bool {
        match self {
            Axiom::SubClassOf { sub, sup } => {
                sub == sup
                    || *sup == ClassExpression::Top
                    || *sub == ClassExpression::Bottom
            }
            Axiom::ClassAssertion { class, .. } => *class == ClassExpression::Top,
            Axiom::ObjectPropertyDomain { domain: ce, .. }
            | Axiom::ObjectPropertyRange { range: ce, .. } => *ce == ClassExpression::Top,
            Axiom::SubObjectPropertyOf { sub, sup } => sub == sup,
            Axiom::EquivalentClasses(ops) => ops.len() < 2,
            Axiom::EquivalentObjectProperties(ps) => ps.len() < 2,
            _ => false,
        }
    }

    /// Replaces occurrences of `from` (matched by IRI and kind) with `to`.
    pub fn rename(&self, from: &EntityRef, to: &Iri) -> Axiom {
        let prop = |p: &Iri| {
            if from.kind == EntityKind::ObjectProperty && &from.iri == p {
                to.clone()
            } else {
                p.clone()
            }
        };
        let ind = |i: &Iri| {
            if from.kind == EntityKind::NamedIndividual && &from.iri == i {
                to.clone()
            } else {
                i.clone()
            }
        };
        let ce = |c: &ClassExpression| c.rename(from, to);
        let renamed = match self {
            Axiom::SubClassOf { sub, sup } => Axiom::SubClassOf {
                sub: ce(sub),
                sup: ce(sup),
            },
            Axiom::EquivalentClasses(ops) => Axiom::EquivalentClasses(ops.iter().map(ce).collect()),
            Axiom::DisjointClasses(ops) => Axiom::DisjointClasses(ops.iter().map(ce).collect()),
            Axiom::ClassAssertion { individual, class } => Axiom::ClassAssertion {
                individual: ind(individual),
                class: ce(class),
            },
            Axiom::ObjectPropertyAssertion {
                subject,
                property,
                object,
            } => Axiom::ObjectPropertyAssertion {
                subject: ind(subject),
                property: prop(property),
                object: ind(object),
            },
            Axiom::SubObjectPropertyOf { sub, sup } => Axiom::SubObjectPropertyOf {
                sub: prop(sub),
                sup: prop(sup),
            },
            Axiom::SubPropertyChainOf { chain, sup } => Axiom::SubPropertyChainOf {
                chain: chain.iter().map(prop).collect(),
                sup: prop(sup),
            },
            Axiom::EquivalentObjectProperties(ps) => {
                Axiom::EquivalentObjectProperties(ps.iter().map(prop).collect())
            }
            Axiom::InverseObjectProperties(p, q) => Axiom::InverseObjectProperties(prop(p), prop(q)),
            Axiom::ObjectPropertyDomain { property, domain } => Axiom::ObjectPropertyDomain {
                property: prop(property),
                domain: ce(domain),
            },
            Axiom::ObjectPropertyRange { property, range } => Axiom::ObjectPropertyRange {
                property: prop(property),
                range: ce(range),
            },
            Axiom::Characteristic {
                property,
                characteristic,
            } => Axiom::Characteristic {
                property: prop(property),
                characteristic: *characteristic,
            },
        };
        renamed.canonical()
    }

    /// The relation triple of an object property assertion.
    pub fn as_relation(&self) -> Option<RelationTriple> {
        match self {
            Axiom::ObjectPropertyAssertion {
                subject,
                property,
                object,
            } => Some(RelationTriple::new(
                subject.clone(),
                property.clone(),
                object.clone(),
            )),
            _ => None,
        }
    }
}

/// Returns every entity name occurring anywhere in the axiom.
pub fn signature_of(axiom: &Axiom) -> Signature {
    axiom.signature()
}

pub fn classify_box(axiom: &Axiom) -> BoxKind {
    axiom.box_kind()
}

pub fn is_taxonomic(axiom: &Axiom) -> bool {
    axiom.is_taxonomic()
}

/// A ground object property assertion `⟨subject, property, object⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelationTriple {
    pub subject: Iri,
    pub property: Iri,
    pub object: Iri,
}

impl RelationTriple {
    pub fn new(subject: Iri, property: Iri, object: Iri) -> Self {
        RelationTriple {
            subject,
            property,
            object,
        }
    }

    pub fn to_axiom(&self) -> Axiom {
        Axiom::relation(
            self.subject.clone(),
            self.property.clone(),
            self.object.clone(),
        )
    }
}

impl fmt::Display for RelationTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}> <{}> <{}>", self.subject, self.property, self.object)
    }
}
