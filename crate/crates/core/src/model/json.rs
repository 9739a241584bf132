//! JSON shape of axioms and class expressions.
//!
//! Every object carries a `"type"` key named after the OWL functional-style
//! constructor, followed by its fields. Lists are JSON arrays; there are no
//! blank node identifiers. `owl:Thing` and `owl:Nothing` are written as
//! plain `Class` objects.

use serde::{Deserialize, Serialize};

use super::{Axiom, Characteristic, ClassExpression, Iri, ModelError};
use crate::vocab;

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub(crate) enum ExprRepr {
    Class {
        iri: Iri,
    },
    ObjectUnionOf {
        operands: Vec<ClassExpression>,
    },
    ObjectIntersectionOf {
        operands: Vec<ClassExpression>,
    },
    ObjectComplementOf {
        operand: Box<ClassExpression>,
    },
    ObjectSomeValuesFrom {
        property: Iri,
        filler: Box<ClassExpression>,
    },
    ObjectAllValuesFrom {
        property: Iri,
        filler: Box<ClassExpression>,
    },
    ObjectMinCardinality {
        cardinality: u32,
        property: Iri,
        filler: Box<ClassExpression>,
    },
    ObjectMaxCardinality {
        cardinality: u32,
        property: Iri,
        filler: Box<ClassExpression>,
    },
    ObjectExactCardinality {
        cardinality: u32,
        property: Iri,
        filler: Box<ClassExpression>,
    },
}

impl From<ClassExpression> for ExprRepr {
    fn from(ce: ClassExpression) -> Self {
        match ce {
            ClassExpression::Top => ExprRepr::Class {
                iri: Iri::new_unchecked(vocab::OWL_THING),
            },
            ClassExpression::Bottom => ExprRepr::Class {
                iri: Iri::new_unchecked(vocab::OWL_NOTHING),
            },
            ClassExpression::Named(iri) => ExprRepr::Class { iri },
            ClassExpression::UnionOf(operands) => ExprRepr::ObjectUnionOf { operands },
            ClassExpression::IntersectionOf(operands) => ExprRepr::ObjectIntersectionOf { operands },
            ClassExpression::ComplementOf(operand) => ExprRepr::ObjectComplementOf { operand },
            ClassExpression::SomeValuesFrom { property, filler } => {
                ExprRepr::ObjectSomeValuesFrom { property, filler }
            }
            ClassExpression::AllValuesFrom { property, filler } => {
                ExprRepr::ObjectAllValuesFrom { property, filler }
            }
            ClassExpression::MinCardinality { n, property, filler } => ExprRepr::ObjectMinCardinality {
                cardinality: n,
                property,
                filler,
            },
            ClassExpression::MaxCardinality { n, property, filler } => ExprRepr::ObjectMaxCardinality {
                cardinality: n,
                property,
                filler,
            },
            ClassExpression::ExactCardinality { n, property, filler } => {
                ExprRepr::ObjectExactCardinality {
                    cardinality: n,
                    property,
                    filler,
                }
            }
        }
    }
}

impl TryFrom<ExprRepr> for ClassExpression {
    type Error = ModelError;

    fn try_from(repr: ExprRepr) -> Result<Self, ModelError> {
        Ok(match repr {
            ExprRepr::Class { iri } => ClassExpression::named(iri),
            ExprRepr::ObjectUnionOf { operands } => ClassExpression::union(operands)?,
            ExprRepr::ObjectIntersectionOf { operands } => ClassExpression::intersection(operands)?,
            ExprRepr::ObjectComplementOf { operand } => ClassExpression::ComplementOf(operand),
            ExprRepr::ObjectSomeValuesFrom { property, filler } => {
                ClassExpression::SomeValuesFrom { property, filler }
            }
            ExprRepr::ObjectAllValuesFrom { property, filler } => {
                ClassExpression::AllValuesFrom { property, filler }
            }
            ExprRepr::ObjectMinCardinality {
                cardinality,
                property,
                filler,
            } => ClassExpression::MinCardinality {
                n: cardinality,
                property,
                filler,
            },
            ExprRepr::ObjectMaxCardinality {
                cardinality,
                property,
                filler,
            } => ClassExpression::MaxCardinality {
                n: cardinality,
                property,
                filler,
            },
            ExprRepr::ObjectExactCardinality {
                cardinality,
                property,
                filler,
            } => ClassExpression::ExactCardinality {
                n: cardinality,
                property,
                filler,
            },
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub(crate) enum AxiomRepr {
    SubClassOf {
        sub: ClassExpression,
        sup: ClassExpression,
    },
    EquivalentClasses {
        operands: Vec<ClassExpression>,
    },
    DisjointClasses {
        operands: Vec<ClassExpression>,
    },
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
    EquivalentObjectProperties {
        properties: Vec<Iri>,
    },
    InverseObjectProperties {
        first: Iri,
        second: Iri,
    },
    ObjectPropertyDomain {
        property: Iri,
        domain: ClassExpression,
    },
    ObjectPropertyRange {
        property: Iri,
        range: ClassExpression,
    },
    FunctionalObjectProperty {
        property: Iri,
    },
    InverseFunctionalObjectProperty {
        property: Iri,
    },
    TransitiveObjectProperty {
        property: Iri,
    },
    SymmetricObjectProperty {
        property: Iri,
    },
    AsymmetricObjectProperty {
        property: Iri,
    },
    ReflexiveObjectProperty {
        property: Iri,
    },
    IrreflexiveObjectProperty {
        property: Iri,
    },
}

impl From<Axiom> for AxiomRepr {
    fn from(axiom: Axiom) -> Self {
        match axiom {
            Axiom::SubClassOf { sub, sup } => AxiomRepr::SubClassOf { sub, sup },
            Axiom::EquivalentClasses(operands) => AxiomRepr::EquivalentClasses { operands },
            Axiom::DisjointClasses(operands) => AxiomRepr::DisjointClasses { operands },
            Axiom::ClassAssertion { individual, class } => {
                AxiomRepr::ClassAssertion { individual, class }
            }
            Axiom::ObjectPropertyAssertion {
                subject,
                property,
                object,
            } => AxiomRepr::ObjectPropertyAssertion {
                subject,
                property,
                object,
            },
            Axiom::SubObjectPropertyOf { sub, sup } => AxiomRepr::SubObjectPropertyOf { sub, sup },
            Axiom::SubPropertyChainOf { chain, sup } => AxiomRepr::SubPropertyChainOf { chain, sup },
            Axiom::EquivalentObjectProperties(properties) => {
                AxiomRepr::EquivalentObjectProperties { properties }
            }
            Axiom::InverseObjectProperties(first, second) => {
                AxiomRepr::InverseObjectProperties { first, second }
            }
            Axiom::ObjectPropertyDomain { property, domain } => {
                AxiomRepr::ObjectPropertyDomain { property, domain }
            }
            Axiom::ObjectPropertyRange { property, range } => {
                AxiomRepr::ObjectPropertyRange { property, range }
            }
            Axiom::Characteristic {
                property,
                characteristic,
            } => match characteristic {
                Characteristic::Functional => AxiomRepr::FunctionalObjectProperty { property },
                Characteristic::InverseFunctional => {
                    AxiomRepr::InverseFunctionalObjectProperty { property }
                }
                Characteristic::Transitive => AxiomRepr::TransitiveObjectProperty { property },
                Characteristic::Symmetric => AxiomRepr::SymmetricObjectProperty { property },
                Characteristic::Asymmetric => AxiomRepr::AsymmetricObjectProperty { property },
                Characteristic::Reflexive => AxiomRepr::ReflexiveObjectProperty { property },
                Characteristic::Irreflexive => AxiomRepr::IrreflexiveObjectProperty { property },
            },
        }
    }
}

impl From<AxiomRepr> for Axiom {
    fn from(repr: AxiomRepr) -> Self {
        let ch = |property, characteristic| Axiom::Characteristic {
            property,
            characteristic,
        };
        match repr {
            AxiomRepr::SubClassOf { sub, sup } => Axiom::SubClassOf { sub, sup },
            AxiomRepr::EquivalentClasses { operands } => Axiom::EquivalentClasses(operands),
            AxiomRepr::DisjointClasses { operands } => Axiom::DisjointClasses(operands),
            AxiomRepr::ClassAssertion { individual, class } => {
                Axiom::ClassAssertion { individual, class }
            }
            AxiomRepr::ObjectPropertyAssertion {
                subject,
                property,
                object,
            } => Axiom::ObjectPropertyAssertion {
                subject,
                property,
                object,
            },
            AxiomRepr::SubObjectPropertyOf { sub, sup } => Axiom::SubObjectPropertyOf { sub, sup },
            AxiomRepr::SubPropertyChainOf { chain, sup } => Axiom::SubPropertyChainOf { chain, sup },
            AxiomRepr::EquivalentObjectProperties { properties } => {
                Axiom::EquivalentObjectProperties(properties)
            }
            AxiomRepr::InverseObjectProperties { first, second } => {
                Axiom::InverseObjectProperties(first, second)
            }
            AxiomRepr::ObjectPropertyDomain { property, domain } => {
                Axiom::ObjectPropertyDomain { property, domain }
            }
            AxiomRepr::ObjectPropertyRange { property, range } => {
                Axiom::ObjectPropertyRange { property, range }
            }
            AxiomRepr::FunctionalObjectProperty { property } => ch(property, Characteristic::Functional),
            AxiomRepr::InverseFunctionalObjectProperty { property } => {
                ch(property, Characteristic::InverseFunctional)
            }
            AxiomRepr::TransitiveObjectProperty { property } => ch(property, Characteristic::Transitive),
            AxiomRepr::SymmetricObjectProperty { property } => ch(property, Characteristic::Symmetric),
            AxiomRepr::AsymmetricObjectProperty { property } => ch(property, Characteristic::Asymmetric),
            AxiomRepr::ReflexiveObjectProperty { property } => ch(property, Characteristic::Reflexive),
            AxiomRepr::IrreflexiveObjectProperty { property } => {
                ch(property, Characteristic::Irreflexive)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_union_shape() {
        let axiom = Axiom::subclass(
            ClassExpression::class("http://e/A"),
            ClassExpression::UnionOf(vec![
                ClassExpression::class("http://e/B"),
                ClassExpression::class("http://e/C"),
            ]),
        );
        let json = serde_json::to_string(&axiom).unwrap();
        assert_eq!(
            json,
            r#"{"type":"SubClassOf","sub":{"type":"Class","iri":"http://e/A"},"sup":{"type":"ObjectUnionOf","operands":[{"type":"Class","iri":"http://e/B"},{"type":"Class","iri":"http://e/C"}]}}"#
        );
        let back: Axiom = serde_json::from_str(&json).unwrap();
        assert_eq!(back, axiom);
    }

    #[test]
    fn thing_is_a_plain_class() {
        let json = serde_json::to_string(&ClassExpression::Top).unwrap();
        assert_eq!(
            json,
            r#"{"type":"Class","iri":"http://www.w3.org/2002/07/owl#Thing"}"#
        );
        let back: ClassExpression = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ClassExpression::Top);
    }

    #[test]
    fn short_union_is_rejected() {
        let json = r#"{"type":"ObjectUnionOf","operands":[{"type":"Class","iri":"http://e/B"}]}"#;
        assert!(serde_json::from_str::<ClassExpression>(json).is_err());
    }

    #[test]
    fn characteristic_names() {
        let axiom = Axiom::Characteristic {
            property: Iri::new_unchecked("http://e/p"),
            characteristic: Characteristic::InverseFunctional,
        };
        let json = serde_json::to_string(&axiom).unwrap();
        assert_eq!(
            json,
            r#"{"type":"InverseFunctionalObjectProperty","property":"http://e/p"}"#
        );
    }
}
