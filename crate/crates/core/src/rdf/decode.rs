//! Mapping from RDF triples to OWL axioms (the reverse OWL 2 RDF mapping).

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{RdfError, Term, TripleRecord};
use crate::model::{Axiom, Characteristic, ClassExpression, Iri, Ontology, Provenance};
use crate::vocab as v;

#[derive(Clone, Debug, Default)]
pub struct DecodeOptions {
    /// Treat every `rdf:type` subject as an individual and every
    /// non-vocabulary predicate linking two IRIs as an object property,
    /// for dumps that lack explicit declarations.
    pub infer_declarations: bool,
}

/// Why a triple did not contribute to an axiom or declaration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    LiteralObject,
    Annotation,
    DataProperty,
    Unrecognized,
    MalformedList,
}

/// Accounting of how the input triples were used.
///
/// `triples_in_axioms + declaration_triples + duplicate_triples +
/// triples_skipped == triples_total` always holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseReport {
    pub triples_total: usize,
    pub axioms_read: usize,
    pub triples_in_axioms: usize,
    pub declaration_triples: usize,
    pub duplicate_triples: usize,
    pub triples_skipped: usize,
    pub skip_reasons: BTreeMap<SkipReason, usize>,
}

impl ParseReport {
    pub fn merge(&mut self, other: &ParseReport) {
        self.triples_total += other.triples_total;
        self.axioms_read += other.axioms_read;
        self.triples_in_axioms += other.triples_in_axioms;
        self.declaration_triples += other.declaration_triples;
        self.duplicate_triples += other.duplicate_triples;
        self.triples_skipped += other.triples_skipped;
        for (reason, n) in &other.skip_reasons {
            *self.skip_reasons.entry(*reason).or_default() += n;
        }
    }

    pub fn is_balanced(&self) -> bool {
        self.triples_in_axioms + self.declaration_triples + self.duplicate_triples + self.triples_skipped
            == self.triples_total
    }
}

/// Decodes a complete document's triples into an ontology.
///
/// Unrecognized, annotation and literal-valued triples are counted in the
/// report. A blank-node list whose `rdf:rest` chain is not terminated by
/// `rdf:nil` is an error.
pub fn triples_to_axioms(
    triples: &[TripleRecord],
    options: &DecodeOptions,
) -> Result<(Ontology, ParseReport), RdfError> {
    let mut decoder = Decoder::new(triples, options);
    decoder.run()?;
    Ok((decoder.ontology, decoder.report))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Open,
    Done,
}

enum Fail {
    Skip(SkipReason),
    Fatal(RdfError),
}

impl From<SkipReason> for Fail {
    fn from(r: SkipReason) -> Self {
        Fail::Skip(r)
    }
}

struct Decoder<'a> {
    triples: &'a [TripleRecord],
    options: &'a DecodeOptions,
    state: Vec<State>,
    by_subject: HashMap<&'a Term, Vec<usize>>,
    classes: HashSet<&'a Iri>,
    object_props: HashSet<&'a Iri>,
    data_props: HashSet<&'a Iri>,
    annotation_props: HashSet<&'a Iri>,
    ambiguous_props: HashSet<&'a Iri>,
    ontologies: HashSet<&'a Iri>,
    individuals: HashSet<&'a Iri>,
    ontology: Ontology,
    report: ParseReport,
}

impl<'a> Decoder<'a> {
    fn new(triples: &'a [TripleRecord], options: &'a DecodeOptions) -> Self {
        Decoder {
            triples,
            options,
            state: vec![State::Open; triples.len()],
            by_subject: HashMap::new(),
            classes: HashSet::new(),
            object_props: HashSet::new(),
            data_props: HashSet::new(),
            annotation_props: HashSet::new(),
            ambiguous_props: HashSet::new(),
            ontologies: HashSet::new(),
            individuals: HashSet::new(),
            ontology: Ontology::new(),
            report: ParseReport {
                triples_total: triples.len(),
                ..ParseReport::default()
            },
        }
    }

    fn run(&mut self) -> Result<(), RdfError> {
        self.mark_duplicates();
        for (i, t) in self.triples.iter().enumerate() {
            if self.state[i] == State::Open {
                self.by_subject.entry(&t.subject).or_default().push(i);
            }
        }
        self.collect_declarations();
        self.collect_individuals();

        for i in 0..self.triples.len() {
            if self.state[i] != State::Open {
                continue;
            }
            let outcome = self.decode_triple(i);
            match outcome {
                Ok(Some((axiom, used))) => self.accept(axiom, used),
                Ok(None) => {}
                Err(Fail::Skip(reason)) => {
                    let mut group = vec![i];
                    self.blank_closure(&self.triples[i].object, &mut group);
                    self.skip(&group, reason);
                }
                Err(Fail::Fatal(e)) => return Err(e),
            }
        }

        // Leftover blank-node descriptions that no axiom used.
        let leftovers: Vec<usize> = (0..self.triples.len())
            .filter(|&i| self.state[i] == State::Open)
            .collect();
        for i in leftovers {
            let reason = if self.triples[i].object.is_literal()
                && !matches!(self.triples[i].subject, Term::Blank(_))
            {
                SkipReason::LiteralObject
            } else {
                SkipReason::Unrecognized
            };
            self.skip(&[i], reason);
        }

        if let Some(iri) = self.ontologies.iter().min() {
            self.ontology.iri = Some((*iri).clone());
        }
        debug_assert!(self.report.is_balanced());
        Ok(())
    }

    fn mark_duplicates(&mut self) {
        let mut seen: HashSet<&TripleRecord> = HashSet::with_capacity(self.triples.len());
        for (i, t) in self.triples.iter().enumerate() {
            if !seen.insert(t) {
                self.state[i] = State::Done;
                self.report.duplicate_triples += 1;
            }
        }
    }

    fn declare(&mut self, i: usize) {
        self.state[i] = State::Done;
        self.report.declaration_triples += 1;
    }

    fn skip(&mut self, indices: &[usize], reason: SkipReason) {
        for &i in indices {
            if self.state[i] == State::Open {
                self.state[i] = State::Done;
                self.report.triples_skipped += 1;
                *self.report.skip_reasons.entry(reason).or_default() += 1;
            }
        }
    }

    fn accept(&mut self, axiom: Axiom, used: Vec<usize>) {
        for i in used {
            if self.state[i] == State::Open {
                self.state[i] = State::Done;
                self.report.triples_in_axioms += 1;
            }
        }
        self.report.axioms_read += 1;
        self.ontology.insert(axiom, Provenance::Asserted);
    }

    fn collect_declarations(&mut self) {
        for i in 0..self.triples.len() {
            if self.state[i] != State::Open {
                continue;
            }
            let t = &self.triples[i];
            let Term::Iri(subject) = &t.subject else {
                continue;
            };
            match t.predicate.as_str() {
                v::RDF_TYPE => {
                    let Some(object) = t.object.as_iri() else {
                        continue;
                    };
                    match object.as_str() {
                        v::OWL_CLASS | v::RDFS_CLASS => {
                            self.classes.insert(subject);
                            self.declare(i);
                        }
                        v::OWL_OBJECT_PROPERTY => {
                            self.object_props.insert(subject);
                            self.declare(i);
                        }
                        v::OWL_DATATYPE_PROPERTY => {
                            self.data_props.insert(subject);
                            self.declare(i);
                        }
                        v::OWL_ANNOTATION_PROPERTY => {
                            self.annotation_props.insert(subject);
                            self.declare(i);
                        }
                        v::OWL_NAMED_INDIVIDUAL => {
                            self.individuals.insert(subject);
                            self.declare(i);
                        }
                        v::OWL_ONTOLOGY => {
                            self.ontologies.insert(subject);
                            self.declare(i);
                        }
                        v::RDF_PROPERTY => {
                            self.ambiguous_props.insert(subject);
                            self.declare(i);
                        }
                        v::RDFS_DATATYPE => self.declare(i),
                        v::OWL_TRANSITIVE_PROPERTY
                        | v::OWL_SYMMETRIC_PROPERTY
                        | v::OWL_ASYMMETRIC_PROPERTY
                        | v::OWL_REFLEXIVE_PROPERTY
                        | v::OWL_IRREFLEXIVE_PROPERTY
                        | v::OWL_INVERSE_FUNCTIONAL_PROPERTY => {
                            self.object_props.insert(subject);
                        }
                        _ => {}
                    }
                }
                v::OWL_INVERSE_OF => {
                    self.object_props.insert(subject);
                    if let Some(o) = t.object.as_iri() {
                        self.object_props.insert(o);
                    }
                }
                v::OWL_PROPERTY_CHAIN_AXIOM => {
                    self.object_props.insert(subject);
                }
                _ => {}
            }
        }
        // Object properties used inside restrictions.
        for t in self.triples {
            if t.predicate.as_str() == v::OWL_ON_PROPERTY {
                if let Some(p) = t.object.as_iri() {
                    if !self.data_props.contains(p) {
                        self.object_props.insert(p);
                    }
                }
            }
        }
        for p in self.data_props.iter().chain(self.annotation_props.iter()) {
            self.object_props.remove(p);
        }
        if self.options.infer_declarations {
            for t in self.triples {
                if let (Term::Iri(s), Term::Iri(o)) = (&t.subject, &t.object) {
                    let _ = (s, o);
                    let p = &t.predicate;
                    if !v::is_reserved(p.as_str())
                        && !self.is_annotation(p)
                        && !self.data_props.contains(p)
                    {
                        self.object_props.insert(p);
                    }
                }
            }
        }
    }

    fn is_ontology_node(&self, term: &Term) -> bool {
        self.by_subject.get(term).is_some_and(|group| {
            group.iter().any(|&j| {
                let t = &self.triples[j];
                t.predicate.as_str() == v::RDF_TYPE && t.object.is_iri(v::OWL_ONTOLOGY)
            })
        })
    }

    fn is_schema_entity(&self, iri: &Iri) -> bool {
        v::is_reserved(iri.as_str())
            || self.classes.contains(iri)
            || self.object_props.contains(iri)
            || self.data_props.contains(iri)
            || self.annotation_props.contains(iri)
            || self.ambiguous_props.contains(iri)
            || self.ontologies.contains(iri)
    }

    fn is_annotation(&self, p: &Iri) -> bool {
        self.annotation_props.contains(p)
            || v::BUILTIN_ANNOTATION_PROPERTIES.contains(&p.as_str())
            || (!self.object_props.contains(p) && v::is_annotation_predicate(p.as_str()))
    }

    /// Individuals are declared `owl:NamedIndividual`s plus subjects of class
    /// assertions; with `infer_declarations`, also the IRI endpoints of
    /// object property triples.
    fn collect_individuals(&mut self) {
        let mut found = Vec::new();
        for (i, t) in self.triples.iter().enumerate() {
            if self.state[i] != State::Open {
                continue;
            }
            let Term::Iri(s) = &t.subject else { continue };
            if self.is_schema_entity(s) {
                continue;
            }
            if t.predicate.as_str() == v::RDF_TYPE {
                let is_class = match &t.object {
                    Term::Iri(o) => !v::is_reserved(o.as_str()) || o.as_str() == v::OWL_THING,
                    Term::Blank(_) => true,
                    Term::Literal { .. } => false,
                };
                if is_class {
                    found.push(s);
                }
            } else if self.options.infer_declarations && self.object_props.contains(&t.predicate) {
                if let Term::Iri(o) = &t.object {
                    found.push(s);
                    if !self.is_schema_entity(o) {
                        found.push(o);
                    }
                }
            }
        }
        self.individuals.extend(found);
    }

    fn decode_triple(&mut self, i: usize) -> Result<Option<(Axiom, Vec<usize>)>, Fail> {
        let t = &self.triples[i];
        let predicate = t.predicate.as_str();
        let mut used = vec![i];

        if let Term::Blank(_) = &t.subject {
            return match predicate {
                v::RDFS_SUBCLASSOF | v::OWL_EQUIVALENT_CLASS | v::OWL_DISJOINT_WITH => {
                    self.class_pair_axiom(i, &mut used).map(|a| Some((a, used)))
                }
                v::RDF_TYPE if t.object.is_iri(v::OWL_ONTOLOGY) => {
                    self.declare(i);
                    Ok(None)
                }
                v::OWL_IMPORTS if self.is_ontology_node(&t.subject) => {
                    if let Term::Iri(o) = &t.object {
                        if !self.ontology.imports.contains(o) {
                            self.ontology.imports.push(o.clone());
                        }
                    }
                    self.declare(i);
                    Ok(None)
                }
                v::RDF_TYPE if t.object.is_iri(v::OWL_ALL_DISJOINT_CLASSES) => {
                    self.all_disjoint(i, &mut used).map(|a| Some((a, used)))
                }
                v::RDF_TYPE if t.object.is_iri(v::OWL_AXIOM) || t.object.is_iri(v::OWL_ANNOTATION) => {
                    let group = self.by_subject.get(&t.subject).cloned().unwrap_or_default();
                    let mut all = Vec::new();
                    for j in group {
                        all.push(j);
                        self.blank_closure(&self.triples[j].object, &mut all);
                    }
                    self.skip(&all, SkipReason::Annotation);
                    Ok(None)
                }
                // Part of a class expression; decoded when referenced.
                _ => Ok(None),
            };
        }

        let Term::Iri(subject) = &t.subject else {
            return Ok(None);
        };

        match predicate {
            v::RDF_TYPE => self.type_triple(i, subject, &mut used),
            v::RDFS_SUBCLASSOF | v::OWL_EQUIVALENT_CLASS | v::OWL_DISJOINT_WITH => {
                self.class_pair_axiom(i, &mut used).map(|a| Some((a, used)))
            }
            v::OWL_UNION_OF | v::OWL_INTERSECTION_OF | v::OWL_COMPLEMENT_OF => {
                let expr = self.constructor(predicate, &t.object, &mut used)?;
                let axiom = Axiom::EquivalentClasses(vec![ClassExpression::named(subject.clone()), expr]);
                Ok(Some((axiom, used)))
            }
            v::RDFS_SUBPROPERTYOF | v::OWL_EQUIVALENT_PROPERTY => {
                let sup = t.object.as_iri().ok_or(SkipReason::Unrecognized)?;
                self.check_object_property(subject)?;
                self.check_object_property(sup)?;
                let axiom = if predicate == v::RDFS_SUBPROPERTYOF {
                    Axiom::SubObjectPropertyOf {
                        sub: subject.clone(),
                        sup: sup.clone(),
                    }
                } else {
                    Axiom::EquivalentObjectProperties(vec![subject.clone(), sup.clone()])
                };
                Ok(Some((axiom, used)))
            }
            v::OWL_INVERSE_OF => {
                let other = t.object.as_iri().ok_or(SkipReason::Unrecognized)?;
                Ok(Some((
                    Axiom::InverseObjectProperties(subject.clone(), other.clone()),
                    used,
                )))
            }
            v::OWL_PROPERTY_CHAIN_AXIOM => {
                let items = self.list(&t.object, &mut used)?;
                let chain = items
                    .iter()
                    .map(|term| term.as_iri().cloned().ok_or(SkipReason::Unrecognized))
                    .collect::<Result<Vec<_>, _>>()?;
                if chain.is_empty() {
                    return Err(SkipReason::MalformedList.into());
                }
                Ok(Some((
                    Axiom::SubPropertyChainOf {
                        chain,
                        sup: subject.clone(),
                    },
                    used,
                )))
            }
            v::RDFS_DOMAIN | v::RDFS_RANGE => {
                self.check_object_property(subject)?;
                if let Term::Iri(o) = &t.object {
                    if o.as_str().starts_with(v::XSD) || o.as_str() == v::RDFS_LITERAL {
                        return Err(SkipReason::DataProperty.into());
                    }
                }
                let expr = self.class_expression(&t.object, &mut used, 0)?;
                let axiom = if predicate == v::RDFS_DOMAIN {
                    Axiom::ObjectPropertyDomain {
                        property: subject.clone(),
                        domain: expr,
                    }
                } else {
                    Axiom::ObjectPropertyRange {
                        property: subject.clone(),
                        range: expr,
                    }
                };
                Ok(Some((axiom, used)))
            }
            v::OWL_IMPORTS => {
                if let Term::Iri(o) = &t.object {
                    if !self.ontology.imports.contains(o) {
                        self.ontology.imports.push(o.clone());
                    }
                    self.declare(i);
                    Ok(None)
                } else {
                    Err(SkipReason::Unrecognized.into())
                }
            }
            _ => {
                let p = &t.predicate;
                if self.is_annotation(p) || self.ontologies.contains(subject) {
                    return Err(SkipReason::Annotation.into());
                }
                if t.object.is_literal() {
                    return Err(SkipReason::LiteralObject.into());
                }
                if self.data_props.contains(p) {
                    return Err(SkipReason::DataProperty.into());
                }
                let Term::Iri(object) = &t.object else {
                    return Err(SkipReason::Unrecognized.into());
                };
                if self.object_props.contains(p)
                    && self.individuals.contains(subject)
                    && self.individuals.contains(object)
                {
                    Ok(Some((
                        Axiom::relation(subject.clone(), p.clone(), object.clone()),
                        used,
                    )))
                } else {
                    Err(SkipReason::Unrecognized.into())
                }
            }
        }
    }

    fn check_object_property(&self, p: &Iri) -> Result<(), Fail> {
        if self.data_props.contains(p) {
            Err(SkipReason::DataProperty.into())
        } else if self.annotation_props.contains(p) {
            Err(SkipReason::Annotation.into())
        } else {
            Ok(())
        }
    }

    fn type_triple(
        &mut self,
        i: usize,
        subject: &Iri,
        used: &mut Vec<usize>,
    ) -> Result<Option<(Axiom, Vec<usize>)>, Fail> {
        let t = &self.triples[i];
        if let Term::Iri(o) = &t.object {
            let characteristic = match o.as_str() {
                v::OWL_FUNCTIONAL_PROPERTY => Some(Characteristic::Functional),
                v::OWL_INVERSE_FUNCTIONAL_PROPERTY => Some(Characteristic::InverseFunctional),
                v::OWL_TRANSITIVE_PROPERTY => Some(Characteristic::Transitive),
                v::OWL_SYMMETRIC_PROPERTY => Some(Characteristic::Symmetric),
                v::OWL_ASYMMETRIC_PROPERTY => Some(Characteristic::Asymmetric),
                v::OWL_REFLEXIVE_PROPERTY => Some(Characteristic::Reflexive),
                v::OWL_IRREFLEXIVE_PROPERTY => Some(Characteristic::Irreflexive),
                _ => None,
            };
            if let Some(characteristic) = characteristic {
                self.check_object_property(subject)?;
                return Ok(Some((
                    Axiom::Characteristic {
                        property: subject.clone(),
                        characteristic,
                    },
                    std::mem::take(used),
                )));
            }
            if v::is_reserved(o.as_str()) && o.as_str() != v::OWL_THING {
                return Err(SkipReason::Unrecognized.into());
            }
        }
        if t.object.is_literal() {
            return Err(SkipReason::LiteralObject.into());
        }
        if !self.individuals.contains(subject) {
            return Err(SkipReason::Unrecognized.into());
        }
        let class = self.class_expression(&t.object, used, 0)?;
        Ok(Some((
            Axiom::class_assertion(subject.clone(), class),
            std::mem::take(used),
        )))
    }

    fn class_pair_axiom(&mut self, i: usize, used: &mut Vec<usize>) -> Result<Axiom, Fail> {
        let t = &self.triples[i];
        let left = self.class_expression(&t.subject, used, 0)?;
        let right = self.class_expression(&t.object, used, 0)?;
        Ok(match t.predicate.as_str() {
            v::RDFS_SUBCLASSOF => Axiom::subclass(left, right),
            v::OWL_EQUIVALENT_CLASS => Axiom::EquivalentClasses(vec![left, right]),
            _ => Axiom::DisjointClasses(vec![left, right]),
        })
    }

    fn all_disjoint(&mut self, i: usize, used: &mut Vec<usize>) -> Result<Axiom, Fail> {
        let subject = &self.triples[i].subject;
        let group = self.by_subject.get(subject).cloned().unwrap_or_default();
        let members = group
            .iter()
            .copied()
            .find(|&j| self.triples[j].predicate.as_str() == v::OWL_MEMBERS)
            .ok_or(SkipReason::Unrecognized)?;
        used.push(members);
        let items = self.list(&self.triples[members].object, used)?;
        if items.len() < 2 {
            return Err(SkipReason::MalformedList.into());
        }
        let mut operands = Vec::with_capacity(items.len());
        for item in &items {
            operands.push(self.class_expression(item, used, 0)?);
        }
        Ok(Axiom::DisjointClasses(operands))
    }

    fn class_expression(
        &self,
        term: &Term,
        used: &mut Vec<usize>,
        depth: usize,
    ) -> Result<ClassExpression, Fail> {
        if depth > 64 {
            return Err(SkipReason::Unrecognized.into());
        }
        match term {
            Term::Iri(iri) => {
                if v::is_reserved(iri.as_str())
                    && iri.as_str() != v::OWL_THING
                    && iri.as_str() != v::OWL_NOTHING
                {
                    return Err(SkipReason::Unrecognized.into());
                }
                Ok(ClassExpression::named(iri.clone()))
            }
            Term::Literal { .. } => Err(SkipReason::LiteralObject.into()),
            Term::Blank(_) => {
                let Some(group) = self.by_subject.get(term) else {
                    return Err(SkipReason::Unrecognized.into());
                };
                let mut property = None;
                let mut on_class = None;
                let mut restriction = None;
                let mut constructor = None;
                let mut local = Vec::new();
                for &j in group {
                    let t = &self.triples[j];
                    match t.predicate.as_str() {
                        v::RDF_TYPE
                            if t.object.is_iri(v::OWL_CLASS)
                                || t.object.is_iri(v::OWL_RESTRICTION) =>
                        {
                            local.push(j)
                        }
                        v::OWL_ON_PROPERTY => {
                            property = Some(t.object.as_iri().ok_or(SkipReason::Unrecognized)?);
                            local.push(j);
                        }
                        v::OWL_ON_CLASS => {
                            on_class = Some(&t.object);
                            local.push(j);
                        }
                        v::OWL_SOME_VALUES_FROM
                        | v::OWL_ALL_VALUES_FROM
                        | v::OWL_MIN_CARDINALITY
                        | v::OWL_MAX_CARDINALITY
                        | v::OWL_CARDINALITY
                        | v::OWL_MIN_QUALIFIED_CARDINALITY
                        | v::OWL_MAX_QUALIFIED_CARDINALITY
                        | v::OWL_QUALIFIED_CARDINALITY => {
                            if restriction.is_some() {
                                return Err(SkipReason::Unrecognized.into());
                            }
                            restriction = Some(j);
                            local.push(j);
                        }
                        v::OWL_UNION_OF | v::OWL_INTERSECTION_OF | v::OWL_COMPLEMENT_OF => {
                            if constructor.is_some() {
                                return Err(SkipReason::Unrecognized.into());
                            }
                            constructor = Some(j);
                            local.push(j);
                        }
                        _ => {}
                    }
                }
                let expr = match (constructor, restriction) {
                    (Some(j), None) => {
                        let t = &self.triples[j];
                        self.constructor_at(t.predicate.as_str(), &t.object, used, depth)?
                    }
                    (None, Some(j)) => {
                        let property = property.ok_or(SkipReason::Unrecognized)?.clone();
                        let t = &self.triples[j];
                        let filler_of = |term: &Term, used: &mut Vec<usize>| {
                            self.class_expression(term, used, depth + 1).map(Box::new)
                        };
                        let qualified = |used: &mut Vec<usize>| -> Result<Box<ClassExpression>, Fail> {
                            match on_class {
                                Some(c) => filler_of(c, used),
                                None => Err(SkipReason::Unrecognized.into()),
                            }
                        };
                        match t.predicate.as_str() {
                            v::OWL_SOME_VALUES_FROM => ClassExpression::SomeValuesFrom {
                                property,
                                filler: filler_of(&t.object, used)?,
                            },
                            v::OWL_ALL_VALUES_FROM => ClassExpression::AllValuesFrom {
                                property,
                                filler: filler_of(&t.object, used)?,
                            },
                            v::OWL_MIN_CARDINALITY => ClassExpression::MinCardinality {
                                n: cardinality(&t.object)?,
                                property,
                                filler: Box::new(ClassExpression::Top),
                            },
                            v::OWL_MAX_CARDINALITY => ClassExpression::MaxCardinality {
                                n: cardinality(&t.object)?,
                                property,
                                filler: Box::new(ClassExpression::Top),
                            },
                            v::OWL_CARDINALITY => ClassExpression::ExactCardinality {
                                n: cardinality(&t.object)?,
                                property,
                                filler: Box::new(ClassExpression::Top),
                            },
                            v::OWL_MIN_QUALIFIED_CARDINALITY => ClassExpression::MinCardinality {
                                n: cardinality(&t.object)?,
                                property,
                                filler: qualified(used)?,
                            },
                            v::OWL_MAX_QUALIFIED_CARDINALITY => ClassExpression::MaxCardinality {
                                n: cardinality(&t.object)?,
                                property,
                                filler: qualified(used)?,
                            },
                            _ => ClassExpression::ExactCardinality {
                                n: cardinality(&t.object)?,
                                property,
                                filler: qualified(used)?,
                            },
                        }
                    }
                    _ => return Err(SkipReason::Unrecognized.into()),
                };
                used.extend(local);
                Ok(expr)
            }
        }
    }

    fn constructor(
        &self,
        predicate: &str,
        object: &Term,
        used: &mut Vec<usize>,
    ) -> Result<ClassExpression, Fail> {
        self.constructor_at(predicate, object, used, 0)
    }

    fn constructor_at(
        &self,
        predicate: &str,
        object: &Term,
        used: &mut Vec<usize>,
        depth: usize,
    ) -> Result<ClassExpression, Fail> {
        if predicate == v::OWL_COMPLEMENT_OF {
            let inner = self.class_expression(object, used, depth + 1)?;
            return Ok(ClassExpression::complement(inner));
        }
        let items = self.list(object, used)?;
        if items.len() < 2 {
            return Err(SkipReason::MalformedList.into());
        }
        let mut operands = Vec::with_capacity(items.len());
        for item in &items {
            operands.push(self.class_expression(item, used, depth + 1)?);
        }
        Ok(if predicate == v::OWL_UNION_OF {
            ClassExpression::UnionOf(operands)
        } else {
            ClassExpression::IntersectionOf(operands)
        })
    }

    /// Decodes an `rdf:List`, recording the list triples in `used`.
    fn list(&self, head: &Term, used: &mut Vec<usize>) -> Result<Vec<Term>, Fail> {
        let mut items = Vec::new();
        let mut current = head;
        let mut visited = HashSet::new();
        let start = match head {
            Term::Blank(label) => label.clone(),
            other => other.to_string(),
        };
        loop {
            match current {
                Term::Iri(iri) if iri.as_str() == v::RDF_NIL => return Ok(items),
                Term::Blank(_) => {
                    if !visited.insert(current) {
                        return Err(SkipReason::MalformedList.into());
                    }
                    let Some(group) = self.by_subject.get(current) else {
                        return Err(Fail::Fatal(RdfError::DanglingList(start)));
                    };
                    let mut first = None;
                    let mut rest = None;
                    for &j in group {
                        let t = &self.triples[j];
                        match t.predicate.as_str() {
                            v::RDF_FIRST => {
                                if first.replace(&t.object).is_some() {
                                    return Err(SkipReason::MalformedList.into());
                                }
                                used.push(j);
                            }
                            v::RDF_REST => {
                                if rest.replace(&t.object).is_some() {
                                    return Err(SkipReason::MalformedList.into());
                                }
                                used.push(j);
                            }
                            v::RDF_TYPE if t.object.is_iri(v::RDF_LIST) => used.push(j),
                            _ => {}
                        }
                    }
                    let Some(rest) = rest else {
                        return Err(Fail::Fatal(RdfError::DanglingList(start)));
                    };
                    let first = first.ok_or(SkipReason::MalformedList)?;
                    items.push(first.clone());
                    current = rest;
                }
                _ => return Err(SkipReason::MalformedList.into()),
            }
        }
    }

    /// Triples reachable from `term` through blank-node subjects.
    fn blank_closure(&self, term: &Term, out: &mut Vec<usize>) {
        let mut stack = vec![term];
        let mut seen = HashSet::new();
        while let Some(t) = stack.pop() {
            if !matches!(t, Term::Blank(_)) || !seen.insert(t) {
                continue;
            }
            if let Some(group) = self.by_subject.get(t) {
                for &j in group {
                    out.push(j);
                    stack.push(&self.triples[j].object);
                }
            }
        }
    }
}

fn cardinality(term: &Term) -> Result<u32, Fail> {
    match term {
        Term::Literal { value, .. } => value
            .trim()
            .parse::<u32>()
            .map_err(|_| Fail::Skip(SkipReason::Unrecognized)),
        _ => Err(SkipReason::Unrecognized.into()),
    }
}
