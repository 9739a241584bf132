use serde::{Deserialize, Serialize};

use super::{EntityKind, EntityRef, Iri, ModelError, Signature};
use crate::vocab;

/// An OWL class expression.
///
/// `Top` and `Bottom` stand for `owl:Thing` and `owl:Nothing`; they never
/// appear as `Named`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "super::json::ExprRepr", try_from = "super::json::ExprRepr")]
pub enum ClassExpression {
    Top,
    Bottom,
    Named(Iri),
    UnionOf(Vec<ClassExpression>),
    IntersectionOf(Vec<ClassExpression>),
    ComplementOf(Box<ClassExpression>),
    SomeValuesFrom {
        property: Iri,
        filler: Box<ClassExpression>,
    },
    AllValuesFrom {
        property: Iri,
        filler: Box<ClassExpression>,
    },
    /// Unqualified restrictions carry `Top` as filler.
    MinCardinality {
        n: u32,
        property: Iri,
        filler: Box<ClassExpression>,
    },
    MaxCardinality {
        n: u32,
        property: Iri,
        filler: Box<ClassExpression>,
    },
    ExactCardinality {
        n: u32,
        property: Iri,
        filler: Box<ClassExpression>,
    },
}

impl ClassExpression {
    /// A named class; `owl:Thing` and `owl:Nothing` map to `Top`/`Bottom`.
    pub fn named(iri: Iri) -> Self {
        match iri.as_str() {
            vocab::OWL_THING => ClassExpression::Top,
            vocab::OWL_NOTHING => ClassExpression::Bottom,
            _ => ClassExpression::Named(iri),
        }
    }

    /// Shorthand for tests and fixtures. Panics on an invalid IRI.
    pub fn class(iri: &str) -> Self {
        Self::named(Iri::new(iri).expect("valid IRI"))
    }

    pub fn union(operands: Vec<ClassExpression>) -> Result<Self, ModelError> {
        if operands.len() < 2 {
            return Err(ModelError::Arity("ObjectUnionOf", operands.len()));
        }
        Ok(ClassExpression::UnionOf(operands))
    }

    pub fn intersection(operands: Vec<ClassExpression>) -> Result<Self, ModelError> {
        if operands.len() < 2 {
            return Err(ModelError::Arity("ObjectIntersectionOf", operands.len()));
        }
        Ok(ClassExpression::IntersectionOf(operands))
    }

    pub fn complement(operand: ClassExpression) -> Self {
        ClassExpression::ComplementOf(Box::new(operand))
    }

    pub fn some(property: Iri, filler: ClassExpression) -> Self {
        ClassExpression::SomeValuesFrom {
            property,
            filler: Box::new(filler),
        }
    }

    pub fn only(property: Iri, filler: ClassExpression) -> Self {
        ClassExpression::AllValuesFrom {
            property,
            filler: Box::new(filler),
        }
    }

    pub fn as_named(&self) -> Option<&Iri> {
        match self {
            ClassExpression::Named(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn is_named(&self) -> bool {
        matches!(self, ClassExpression::Named(_))
    }

    /// Operands of a union, or the expression itself.
    pub fn disjuncts(&self) -> &[ClassExpression] {
        match self {
            ClassExpression::UnionOf(ops) => ops,
            other => std::slice::from_ref(other),
        }
    }

    /// Calls `f` on this expression and every nested one, outermost first.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a ClassExpression)) {
        f(self);
        match self {
            ClassExpression::UnionOf(ops) | ClassExpression::IntersectionOf(ops) => {
                ops.iter().for_each(|op| op.walk(f));
            }
            ClassExpression::ComplementOf(inner) => inner.walk(f),
            ClassExpression::SomeValuesFrom { filler, .. }
            | ClassExpression::AllValuesFrom { filler, .. }
            | ClassExpression::MinCardinality { filler, .. }
            | ClassExpression::MaxCardinality { filler, .. }
            | ClassExpression::ExactCardinality { filler, .. } => filler.walk(f),
            ClassExpression::Top | ClassExpression::Bottom | ClassExpression::Named(_) => {}
        }
    }

    pub(crate) fn collect_signature(&self, sig: &mut Signature) {
        match self {
            ClassExpression::Top | ClassExpression::Bottom => {}
            ClassExpression::Named(iri) => {
                sig.insert(EntityRef::new(iri.clone(), EntityKind::Class));
            }
            ClassExpression::UnionOf(ops) | ClassExpression::IntersectionOf(ops) => {
                ops.iter().for_each(|op| op.collect_signature(sig));
            }
            ClassExpression::ComplementOf(op) => op.collect_signature(sig),
            ClassExpression::SomeValuesFrom { property, filler }
            | ClassExpression::AllValuesFrom { property, filler }
            | ClassExpression::MinCardinality {
                property, filler, ..
            }
            | ClassExpression::MaxCardinality {
                property, filler, ..
            }
            | ClassExpression::ExactCardinality {
                property, filler, ..
            } => {
                sig.insert(EntityRef::new(property.clone(), EntityKind::ObjectProperty));
                filler.collect_signature(sig);
            }
        }
    }

    /// Replaces occurrences of `from` (matched by IRI and kind) with `to`.
    pub(crate) fn rename(&self, from: &EntityRef, to: &Iri) -> ClassExpression {
        let prop = |p: &Iri| {
            if from.kind == EntityKind::ObjectProperty && &from.iri == p {
                to.clone()
            } else {
                p.clone()
            }
        };
        let boxed = |e: &ClassExpression| Box::new(e.rename(from, to));
        match self {
            ClassExpression::Top => ClassExpression::Top,
            ClassExpression::Bottom => ClassExpression::Bottom,
            ClassExpression::Named(iri) => {
                if from.kind == EntityKind::Class && &from.iri == iri {
                    ClassExpression::named(to.clone())
                } else {
                    self.clone()
                }
            }
            ClassExpression::UnionOf(ops) => {
                ClassExpression::UnionOf(ops.iter().map(|o| o.rename(from, to)).collect())
            }
            ClassExpression::IntersectionOf(ops) => {
                ClassExpression::IntersectionOf(ops.iter().map(|o| o.rename(from, to)).collect())
            }
            ClassExpression::ComplementOf(op) => ClassExpression::ComplementOf(boxed(op)),
            ClassExpression::SomeValuesFrom { property, filler } => {
                ClassExpression::SomeValuesFrom {
                    property: prop(property),
                    filler: boxed(filler),
                }
            }
            ClassExpression::AllValuesFrom { property, filler } => ClassExpression::AllValuesFrom {
                property: prop(property),
                filler: boxed(filler),
            },
            ClassExpression::MinCardinality {
                n,
                property,
                filler,
            } => ClassExpression::MinCardinality {
                n: *n,
                property: prop(property),
                filler: boxed(filler),
            },
            ClassExpression::MaxCardinality {
                n,
                property,
                filler,
            } => ClassExpression::MaxCardinality {
                n: *n,
                property: prop(property),
                filler: boxed(filler),
            },
            ClassExpression::ExactCardinality {
                n,
                property,
                filler,
            } => ClassExpression::ExactCardinality {
                n: *n,
                property: prop(property),
                filler: boxed(filler),
            },
        }
    }
}
