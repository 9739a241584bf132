//! Signature-based schema modules and dataset decomposition.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::model::{Axiom, BoxKind, EntityKind, EntityRef, Ontology, Provenance, Signature};
use crate::rdf::{self, RdfError, RdfFormat};

/// Result of module extraction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Module {
    /// Selected schema axioms with their provenance.
    pub axioms: Ontology,
    pub final_signature: Signature,
    /// Rounds run, including the last one that left the signature unchanged.
    pub iterations: usize,
}

/// Classes and object properties used by the assertions; individuals are
/// left out.
pub fn initial_signature<'a>(abox: impl IntoIterator<Item = &'a Axiom>) -> Signature {
    let mut sig = Signature::new();
    for axiom in abox {
        match axiom {
            Axiom::ClassAssertion { class, .. } => class.collect_signature(&mut sig),
            Axiom::ObjectPropertyAssertion { property, .. } => {
                sig.insert(EntityRef::new(property.clone(), EntityKind::ObjectProperty));
            }
            _ => {}
        }
    }
    sig
}

/// Repeatedly adds every TBox/RBox axiom that shares an entity with the
/// signature and grows the signature with the entities of the added axioms,
/// until the signature stops changing. Entities match on IRI and kind.
pub fn extract_module(ontology: &Ontology, sig0: &Signature) -> Module {
    let schema: Vec<(&Axiom, Provenance)> = ontology
        .axioms_with_provenance()
        .filter(|(ax, _)| ax.box_kind() != BoxKind::ABox)
        .collect();
    let signatures: Vec<Signature> = schema.iter().map(|(ax, _)| ax.signature()).collect();
    let mut by_entity: HashMap<&EntityRef, Vec<usize>> = HashMap::new();
    for (i, sig) in signatures.iter().enumerate() {
        for e in sig {
            by_entity.entry(e).or_default().push(i);
        }
    }

    let mut sigma = sig0.clone();
    let mut selected = vec![false; schema.len()];
    // Entities added in the previous round; only their axioms can be new.
    let mut frontier: Vec<EntityRef> = sig0.iter().cloned().collect();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut q1 = Vec::new();
        for e in &frontier {
            for &i in by_entity.get(e).map(Vec::as_slice).unwrap_or(&[]) {
                if !selected[i] {
                    selected[i] = true;
                    q1.push(i);
                }
            }
        }
        let mut next = Vec::new();
        for i in q1 {
            for e in &signatures[i] {
                if sigma.insert(e.clone()) {
                    next.push(e.clone());
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let mut axioms = Ontology::new();
    axioms.iri = ontology.iri.clone();
    for (i, (ax, provenance)) in schema.into_iter().enumerate() {
        if selected[i] {
            axioms.insert(ax.clone(), provenance);
        }
    }
    Module {
        axioms,
        final_signature: sigma,
        iterations,
    }
}

/// The five disjoint parts of a dataset.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DatasetComponents {
    /// `SubClassOf` between named classes.
    pub taxonomy: Ontology,
    pub tbox_other: Ontology,
    pub rbox: Ontology,
    pub abox_types: Ontology,
    pub abox_relations: Ontology,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCounts {
    pub taxonomy: usize,
    pub tbox_other: usize,
    pub rbox: usize,
    pub abox_types: usize,
    pub abox_relations: usize,
}

pub const COMPONENT_FILES: [&str; 5] = [
    "taxonomy.ttl",
    "tbox.ttl",
    "rbox.ttl",
    "abox_types.nt",
    "abox_relations.nt",
];

impl DatasetComponents {
    pub fn counts(&self) -> ComponentCounts {
        ComponentCounts {
            taxonomy: self.taxonomy.len(),
            tbox_other: self.tbox_other.len(),
            rbox: self.rbox.len(),
            abox_types: self.abox_types.len(),
            abox_relations: self.abox_relations.len(),
        }
    }

    pub fn total(&self) -> usize {
        self.parts().iter().map(|o| o.len()).sum()
    }

    fn parts(&self) -> [&Ontology; 5] {
        [
            &self.taxonomy,
            &self.tbox_other,
            &self.rbox,
            &self.abox_types,
            &self.abox_relations,
        ]
    }

    /// Writes each part to its fixed file name in `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, RdfError> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (part, name) in self.parts().into_iter().zip(COMPONENT_FILES) {
            let path = dir.join(name);
            let format = RdfFormat::from_path(&path).unwrap_or(RdfFormat::Turtle);
            fs::write(&path, rdf::serialize(part, format)?)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Splits `dataset` by box, taxonomy and assertion kind. Provenance is kept.
pub fn decompose(dataset: &Ontology) -> DatasetComponents {
    let mut out = DatasetComponents::default();
    for (axiom, provenance) in dataset.axioms_with_provenance() {
        let target = match axiom.box_kind() {
            BoxKind::TBox if axiom.is_taxonomic() => &mut out.taxonomy,
            BoxKind::TBox => &mut out.tbox_other,
            BoxKind::RBox => &mut out.rbox,
            BoxKind::ABox => match axiom {
                Axiom::ClassAssertion { .. } => &mut out.abox_types,
                _ => &mut out.abox_relations,
            },
        };
        target.insert(axiom.clone(), provenance);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ClassExpression, Iri};

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://e/{s}")).unwrap()
    }
    fn c(s: &str) -> ClassExpression {
        ClassExpression::Named(iri(s))
    }
    fn class(s: &str) -> EntityRef {
        EntityRef::class(iri(s))
    }

    #[test]
    fn empty_seed_is_immediate_fixpoint() {
        let o = Ontology::from_axioms([Axiom::subclass(c("A"), c("B"))]);
        let m = extract_module(&o, &Signature::new());
        assert!(m.axioms.is_empty());
        assert_eq!(m.iterations, 1);
    }

    #[test]
    fn disconnected_axiom_is_excluded() {
        let o = Ontology::from_axioms([
            Axiom::subclass(c("A"), c("B")),
            Axiom::subclass(c("C"), c("D")),
        ]);
        let m = extract_module(&o, &Signature::from_iter([class("A")]));
        assert_eq!(
            m.axioms.axioms().cloned().collect::<Vec<_>>(),
            vec![Axiom::subclass(c("A"), c("B"))]
        );
        assert_eq!(m.final_signature, Signature::from_iter([class("A"), class("B")]));
        assert_eq!(m.iterations, 2);
    }

    #[test]
    fn punned_iri_does_not_connect() {
        let o = Ontology::from_axioms([Axiom::ObjectPropertyDomain {
            property: iri("A"),
            domain: c("D"),
        }]);
        let m = extract_module(&o, &Signature::from_iter([class("A")]));
        assert!(m.axioms.is_empty());
    }

    #[test]
    fn initial_signature_skips_individuals() {
        let abox = [
            Axiom::relation(iri("a"), iri("p"), iri("b")),
            Axiom::class_assertion(iri("a"), c("A")),
        ];
        assert_eq!(
            initial_signature(&abox),
            Signature::from_iter([class("A"), EntityRef::object_property(iri("p"))])
        );
    }

    #[test]
    fn decompose_partitions() {
        let dataset = Ontology::from_axioms([
            Axiom::subclass(c("A"), c("B")),
            Axiom::DisjointClasses(vec![c("A"), c("C")]),
            Axiom::ObjectPropertyDomain {
                property: iri("p"),
                domain: c("A"),
            },
            Axiom::class_assertion(iri("x"), c("A")),
            Axiom::relation(iri("x"), iri("p"), iri("y")),
        ]);
        let parts = decompose(&dataset);
        assert_eq!(
            parts.counts(),
            ComponentCounts {
                taxonomy: 1,
                tbox_other: 1,
                rbox: 1,
                abox_types: 1,
                abox_relations: 1
            }
        );
        assert_eq!(parts.total(), dataset.len());
        assert_eq!(decompose(&Ontology::new()).total(), 0);
    }

    #[test]
    fn write_uses_fixed_names() {
        let dir = tempfile::tempdir().unwrap();
        let parts = decompose(&Ontology::from_axioms([Axiom::subclass(c("A"), c("B"))]));
        let files = parts.write(dir.path()).unwrap();
        assert_eq!(files.len(), 5);
        assert!(dir.path().join("abox_relations.nt").exists());
    }
}
