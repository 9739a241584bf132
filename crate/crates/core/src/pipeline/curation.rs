use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::model::{Axiom, ClassExpression, EntityKind, EntityRef, Iri, Ontology};
use crate::reasoner::{check_consistency, ConsistencyOptions, JustifiedClash};
use crate::vocab as v;

/// One ABox triple: an object property assertion, or an `rdf:type` triple
/// for a named class assertion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Removal {
    pub s: Iri,
    pub p: Iri,
    pub o: Iri,
}

impl Removal {
    pub fn from_axiom(axiom: &Axiom) -> Option<Removal> {
        match axiom {
            Axiom::ObjectPropertyAssertion {
                subject,
                property,
                object,
            } => Some(Removal {
                s: subject.clone(),
                p: property.clone(),
                o: object.clone(),
            }),
            Axiom::ClassAssertion {
                individual,
                class: ClassExpression::Named(c),
            } => Some(Removal {
                s: individual.clone(),
                p: Iri::new(v::RDF_TYPE).expect("vocabulary IRI"),
                o: c.clone(),
            }),
            _ => None,
        }
    }

    pub fn to_axiom(&self) -> Axiom {
        if self.p.as_str() == v::RDF_TYPE {
            Axiom::class_assertion(self.s.clone(), ClassExpression::Named(self.o.clone()))
        } else {
            Axiom::relation(self.s.clone(), self.p.clone(), self.o.clone())
        }
    }
}

/// Replaces the entity `from` of the given kind by `to`, e.g. to undo punning.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rename {
    pub from: Iri,
    pub to: Iri,
    pub kind: EntityKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecisionFile {
    pub removals: Vec<Removal>,
    pub renames: Vec<Rename>,
    /// Remove every suggested triple until no clash is left.
    pub accept_all_suggestions: bool,
}

impl DecisionFile {
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| PipelineError::Decision(format!("{}: {e}", path.display())))
    }

    /// Concatenation of several files; acceptance is on if any file sets it.
    pub fn combine(files: impl IntoIterator<Item = DecisionFile>) -> DecisionFile {
        let mut out = DecisionFile::default();
        for f in files {
            out.removals.extend(f.removals);
            out.renames.extend(f.renames);
            out.accept_all_suggestions |= f.accept_all_suggestions;
        }
        out
    }
}

pub fn apply_renames(ontology: &mut Ontology, renames: &[Rename]) {
    for r in renames {
        ontology.rename_entity(&EntityRef::new(r.from.clone(), r.kind), &r.to);
    }
}

/// Removes the listed triples. Every one of them must be present.
pub fn apply_removals(abox: &mut Ontology, removals: &[Removal]) -> Result<(), PipelineError> {
    let missing: Vec<String> = removals
        .iter()
        .filter(|r| !abox.contains(&r.to_axiom()))
        .map(|r| format!("<{}> <{}> <{}>", r.s, r.p, r.o))
        .collect();
    if !missing.is_empty() {
        return Err(PipelineError::Decision(format!(
            "removals not in the current ABox: {}",
            missing.join(", ")
        )));
    }
    for r in removals {
        abox.remove(&r.to_axiom());
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClashEntry {
    #[serde(flatten)]
    pub clash: JustifiedClash,
    /// The ABox triples of the justification.
    pub suggested_removals: Vec<Removal>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurationReport {
    /// Clashes still present.
    pub clashes: Vec<ClashEntry>,
    pub punning_conflicts: Vec<(Iri, Vec<EntityKind>)>,
    /// Triples removed from the ABox, from decision files or accepted
    /// suggestions.
    pub removed: Vec<Removal>,
    pub unresolved: usize,
}

impl CurationReport {
    pub fn is_clean(&self) -> bool {
        self.unresolved == 0
    }
}

pub fn suggestions(clashes: &[JustifiedClash]) -> Vec<ClashEntry> {
    clashes
        .iter()
        .map(|c| ClashEntry {
            clash: c.clone(),
            suggested_removals: c
                .justification
                .assertions()
                .filter_map(Removal::from_axiom)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        })
        .collect()
}

/// Applies the decisions to `abox` and checks it against `schema`.
///
/// With `accept_all_suggestions`, the suggested triples of every remaining
/// clash are removed and the check repeats. Clashes left at the end are
/// reported as unresolved.
pub fn curate(
    schema: &Ontology,
    abox: &Ontology,
    decisions: &DecisionFile,
    options: &ConsistencyOptions,
) -> Result<(Ontology, CurationReport), PipelineError> {
    let mut abox = abox.clone();
    apply_removals(&mut abox, &decisions.removals)?;
    let mut report = CurationReport {
        removed: decisions.removals.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect(),
        ..CurationReport::default()
    };
    loop {
        let assertions: Vec<Axiom> = abox.abox().cloned().collect();
        let clashes = check_consistency(schema, &assertions, options);
        log::info!("consistency check: {} clashes", clashes.len());
        let entries = suggestions(&clashes);
        if entries.is_empty() || !decisions.accept_all_suggestions {
            report.unresolved = entries.len();
            report.clashes = entries;
            break;
        }
        let batch: BTreeSet<Removal> = entries
            .iter()
            .flat_map(|e| e.suggested_removals.iter().cloned())
            .filter(|r| abox.contains(&r.to_axiom()))
            .collect();
        if batch.is_empty() {
            report.unresolved = entries.len();
            report.clashes = entries;
            break;
        }
        for r in batch {
            abox.remove(&r.to_axiom());
            report.removed.push(r);
        }
    }
    report.removed.sort();
    report.removed.dedup();
    Ok((abox, report))
}
