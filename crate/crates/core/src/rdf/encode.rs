//! Mapping from OWL axioms to RDF triples, and serialization.

use std::io::Write;

use oxttl::{NTriplesSerializer, TurtleSerializer};

use super::{RdfError, RdfFormat, Term, TripleRecord};
use crate::model::{Axiom, Characteristic, ClassExpression, EntityKind, Iri, Ontology};
use crate::vocab as v;

/// Maps an ontology to RDF triples, including the ontology header, imports
/// and declarations for its vocabulary.
///
/// The output is sorted and blank node labels are assigned in a fixed order,
/// so equal ontologies produce identical triple lists. Equivalence axioms
/// with more than two operands are written pairwise against one operand.
pub fn axioms_to_triples(ontology: &Ontology) -> Vec<TripleRecord> {
    let mut enc = Encoder::default();
    let header = match &ontology.iri {
        Some(iri) => Term::Iri(iri.clone()),
        None => Term::Blank("ontology".into()),
    };
    enc.push(header.clone(), v::RDF_TYPE, Term::iri(v::OWL_ONTOLOGY));
    for import in &ontology.imports {
        enc.push(header.clone(), v::OWL_IMPORTS, Term::Iri(import.clone()));
    }
    for entity in ontology.vocabulary() {
        let kind = match entity.kind {
            EntityKind::Class => v::OWL_CLASS,
            EntityKind::ObjectProperty => v::OWL_OBJECT_PROPERTY,
            EntityKind::DataProperty => v::OWL_DATATYPE_PROPERTY,
            EntityKind::NamedIndividual => v::OWL_NAMED_INDIVIDUAL,
        };
        enc.push(Term::Iri(entity.iri), v::RDF_TYPE, Term::iri(kind));
    }
    for axiom in ontology.axioms() {
        enc.axiom(axiom);
    }
    let mut triples = enc.triples;
    triples.sort();
    triples.dedup();
    triples
}

/// Serializes an ontology as N-Triples or Turtle.
pub fn serialize(ontology: &Ontology, format: RdfFormat) -> Result<String, RdfError> {
    let mut buf = Vec::new();
    write_triples(&axioms_to_triples(ontology), format, &mut buf)?;
    Ok(String::from_utf8(buf).expect("serializers emit UTF-8"))
}

/// Writes triples in the given order.
pub fn write_triples<W: Write>(
    triples: &[TripleRecord],
    format: RdfFormat,
    writer: W,
) -> Result<(), RdfError> {
    match format {
        RdfFormat::NTriples => {
            let mut ser = NTriplesSerializer::new().for_writer(writer);
            for t in triples {
                ser.serialize_triple(&to_ox(t))?;
            }
            ser.finish().flush()?;
        }
        RdfFormat::Turtle => {
            let mut ser = TurtleSerializer::new();
            for (prefix, ns) in [("rdf", v::RDF), ("rdfs", v::RDFS), ("owl", v::OWL), ("xsd", v::XSD)] {
                ser = ser.with_prefix(prefix, ns).expect("static namespace IRIs are valid");
            }
            let mut ser = ser.for_writer(writer);
            for t in triples {
                ser.serialize_triple(&to_ox(t))?;
            }
            ser.finish()?.flush()?;
        }
        RdfFormat::RdfXml => return Err(RdfError::UnsupportedOutput("RDF/XML")),
    }
    Ok(())
}

fn to_ox(t: &TripleRecord) -> oxrdf::Triple {
    let subject: oxrdf::NamedOrBlankNode = match &t.subject {
        Term::Iri(iri) => oxrdf::NamedNode::new_unchecked(iri.as_str()).into(),
        Term::Blank(label) => oxrdf::BlankNode::new_unchecked(label.as_str()).into(),
        Term::Literal { .. } => unreachable!("literal subjects are never produced"),
    };
    let object: oxrdf::Term = match &t.object {
        Term::Iri(iri) => oxrdf::NamedNode::new_unchecked(iri.as_str()).into(),
        Term::Blank(label) => oxrdf::BlankNode::new_unchecked(label.as_str()).into(),
        Term::Literal {
            value,
            datatype,
            language,
        } => match language {
            Some(lang) => {
                oxrdf::Literal::new_language_tagged_literal_unchecked(value.as_str(), lang.as_str()).into()
            }
            None => oxrdf::Literal::new_typed_literal(
                value.as_str(),
                oxrdf::NamedNode::new_unchecked(datatype.as_str()),
            )
            .into(),
        },
    };
    oxrdf::Triple::new(
        subject,
        oxrdf::NamedNode::new_unchecked(t.predicate.as_str()),
        object,
    )
}

#[derive(Default)]
struct Encoder {
    triples: Vec<TripleRecord>,
    next_blank: usize,
}

impl Encoder {
    fn push(&mut self, s: Term, p: &str, o: Term) {
        self.triples.push(TripleRecord::new(s, Iri::new_unchecked(p), o));
    }

    fn blank(&mut self) -> Term {
        let label = format!("b{}", self.next_blank);
        self.next_blank += 1;
        Term::Blank(label)
    }

    fn list(&mut self, items: Vec<Term>) -> Term {
        let mut head = Term::iri(v::RDF_NIL);
        for item in items.into_iter().rev() {
            let cell = self.blank();
            self.push(cell.clone(), v::RDF_FIRST, item);
            self.push(cell.clone(), v::RDF_REST, head);
            head = cell;
        }
        head
    }

    fn expr(&mut self, ce: &ClassExpression) -> Term {
        match ce {
            ClassExpression::Top => Term::iri(v::OWL_THING),
            ClassExpression::Bottom => Term::iri(v::OWL_NOTHING),
            ClassExpression::Named(iri) => Term::Iri(iri.clone()),
            ClassExpression::UnionOf(ops) | ClassExpression::IntersectionOf(ops) => {
                let node = self.blank();
                let items = ops.iter().map(|op| self.expr(op)).collect();
                let list = self.list(items);
                let pred = if matches!(ce, ClassExpression::UnionOf(_)) {
                    v::OWL_UNION_OF
                } else {
                    v::OWL_INTERSECTION_OF
                };
                self.push(node.clone(), v::RDF_TYPE, Term::iri(v::OWL_CLASS));
                self.push(node.clone(), pred, list);
                node
            }
            ClassExpression::ComplementOf(inner) => {
                let node = self.blank();
                let inner = self.expr(inner);
                self.push(node.clone(), v::RDF_TYPE, Term::iri(v::OWL_CLASS));
                self.push(node.clone(), v::OWL_COMPLEMENT_OF, inner);
                node
            }
            ClassExpression::SomeValuesFrom { property, filler }
            | ClassExpression::AllValuesFrom { property, filler } => {
                let node = self.restriction(property);
                let filler = self.expr(filler);
                let pred = if matches!(ce, ClassExpression::SomeValuesFrom { .. }) {
                    v::OWL_SOME_VALUES_FROM
                } else {
                    v::OWL_ALL_VALUES_FROM
                };
                self.push(node.clone(), pred, filler);
                node
            }
            ClassExpression::MinCardinality { n, property, filler }
            | ClassExpression::MaxCardinality { n, property, filler }
            | ClassExpression::ExactCardinality { n, property, filler } => {
                let node = self.restriction(property);
                let (plain, qualified) = match ce {
                    ClassExpression::MinCardinality { .. } => {
                        (v::OWL_MIN_CARDINALITY, v::OWL_MIN_QUALIFIED_CARDINALITY)
                    }
                    ClassExpression::MaxCardinality { .. } => {
                        (v::OWL_MAX_CARDINALITY, v::OWL_MAX_QUALIFIED_CARDINALITY)
                    }
                    _ => (v::OWL_CARDINALITY, v::OWL_QUALIFIED_CARDINALITY),
                };
                let count = Term::Literal {
                    value: n.to_string(),
                    datatype: Iri::new_unchecked(v::XSD_NON_NEGATIVE_INTEGER),
                    language: None,
                };
                if **filler == ClassExpression::Top {
                    self.push(node.clone(), plain, count);
                } else {
                    let filler = self.expr(filler);
                    self.push(node.clone(), qualified, count);
                    self.push(node.clone(), v::OWL_ON_CLASS, filler);
                }
                node
            }
        }
    }

    fn restriction(&mut self, property: &Iri) -> Term {
        let node = self.blank();
        self.push(node.clone(), v::RDF_TYPE, Term::iri(v::OWL_RESTRICTION));
        self.push(node.clone(), v::OWL_ON_PROPERTY, Term::Iri(property.clone()));
        node
    }

    fn axiom(&mut self, axiom: &Axiom) {
        match axiom {
            Axiom::SubClassOf { sub, sup } => {
                let s = self.expr(sub);
                let o = self.expr(sup);
                self.push(s, v::RDFS_SUBCLASSOF, o);
            }
            Axiom::EquivalentClasses(ops) => {
                if ops.len() < 2 {
                    return;
                }
                let pivot = ops.iter().position(|c| c.is_named()).unwrap_or(0);
                let p = self.expr(&ops[pivot]);
                for (i, op) in ops.iter().enumerate() {
                    if i != pivot {
                        let o = self.expr(op);
                        self.push(p.clone(), v::OWL_EQUIVALENT_CLASS, o);
                    }
                }
            }
            Axiom::DisjointClasses(ops) => {
                if ops.len() == 2 {
                    let s = self.expr(&ops[0]);
                    let o = self.expr(&ops[1]);
                    self.push(s, v::OWL_DISJOINT_WITH, o);
                } else if ops.len() > 2 {
                    let node = self.blank();
                    let items = ops.iter().map(|op| self.expr(op)).collect();
                    let list = self.list(items);
                    self.push(node.clone(), v::RDF_TYPE, Term::iri(v::OWL_ALL_DISJOINT_CLASSES));
                    self.push(node, v::OWL_MEMBERS, list);
                }
            }
            Axiom::ClassAssertion { individual, class } => {
                let o = self.expr(class);
                self.push(Term::Iri(individual.clone()), v::RDF_TYPE, o);
            }
            Axiom::ObjectPropertyAssertion {
                subject,
                property,
                object,
            } => self.push(
                Term::Iri(subject.clone()),
                property.as_str(),
                Term::Iri(object.clone()),
            ),
            Axiom::SubObjectPropertyOf { sub, sup } => self.push(
                Term::Iri(sub.clone()),
                v::RDFS_SUBPROPERTYOF,
                Term::Iri(sup.clone()),
            ),
            Axiom::SubPropertyChainOf { chain, sup } => {
                let list = self.list(chain.iter().cloned().map(Term::Iri).collect());
                self.push(Term::Iri(sup.clone()), v::OWL_PROPERTY_CHAIN_AXIOM, list);
            }
            Axiom::EquivalentObjectProperties(ps) => {
                for q in ps.iter().skip(1) {
                    self.push(
                        Term::Iri(ps[0].clone()),
                        v::OWL_EQUIVALENT_PROPERTY,
                        Term::Iri(q.clone()),
                    );
                }
            }
            Axiom::InverseObjectProperties(p, q) => self.push(
                Term::Iri(p.clone()),
                v::OWL_INVERSE_OF,
                Term::Iri(q.clone()),
            ),
            Axiom::ObjectPropertyDomain { property, domain } => {
                let o = self.expr(domain);
                self.push(Term::Iri(property.clone()), v::RDFS_DOMAIN, o);
            }
            Axiom::ObjectPropertyRange { property, range } => {
                let o = self.expr(range);
                self.push(Term::Iri(property.clone()), v::RDFS_RANGE, o);
            }
            Axiom::Characteristic {
                property,
                characteristic,
            } => {
                let kind = match characteristic {
                    Characteristic::Functional => v::OWL_FUNCTIONAL_PROPERTY,
                    Characteristic::InverseFunctional => v::OWL_INVERSE_FUNCTIONAL_PROPERTY,
                    Characteristic::Transitive => v::OWL_TRANSITIVE_PROPERTY,
                    Characteristic::Symmetric => v::OWL_SYMMETRIC_PROPERTY,
                    Characteristic::Asymmetric => v::OWL_ASYMMETRIC_PROPERTY,
                    Characteristic::Reflexive => v::OWL_REFLEXIVE_PROPERTY,
                    Characteristic::Irreflexive => v::OWL_IRREFLEXIVE_PROPERTY,
                };
                self.push(Term::Iri(property.clone()), v::RDF_TYPE, Term::iri(kind));
            }
        }
    }
}
