use std::collections::{BTreeMap, BTreeSet};

use super::{Axiom, BoxKind, EntityKind, EntityRef, Iri, Provenance, Signature};

/// An ontology split into TBox, RBox and ABox axiom sets.
///
/// Axioms are stored in canonical form, so the sets are duplicate-free under
/// structural equality. Inserting an axiom already present keeps the
/// strongest provenance (`Asserted` wins over `Inferred`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ontology {
    pub iri: Option<Iri>,
    pub imports: Vec<Iri>,
    tbox: BTreeMap<Axiom, Provenance>,
    rbox: BTreeMap<Axiom, Provenance>,
    abox: BTreeMap<Axiom, Provenance>,
}

impl Ontology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_axioms(axioms: impl IntoIterator<Item = Axiom>) -> Self {
        let mut ontology = Ontology::new();
        for axiom in axioms {
            ontology.insert(axiom, Provenance::Asserted);
        }
        ontology
    }

    fn bucket(&self, kind: BoxKind) -> &BTreeMap<Axiom, Provenance> {
        match kind {
            BoxKind::TBox => &self.tbox,
            BoxKind::RBox => &self.rbox,
            BoxKind::ABox => &self.abox,
        }
    }

    fn bucket_mut(&mut self, kind: BoxKind) -> &mut BTreeMap<Axiom, Provenance> {
        match kind {
            BoxKind::TBox => &mut self.tbox,
            BoxKind::RBox => &mut self.rbox,
            BoxKind::ABox => &mut self.abox,
        }
    }

    /// Inserts an axiom; returns true if it was not present before.
    pub fn insert(&mut self, axiom: Axiom, provenance: Provenance) -> bool {
        let axiom = axiom.canonical();
        let bucket = self.bucket_mut(axiom.box_kind());
        match bucket.get_mut(&axiom) {
            Some(existing) => {
                if provenance == Provenance::Asserted {
                    *existing = Provenance::Asserted;
                }
                false
            }
            None => {
                bucket.insert(axiom, provenance);
                true
            }
        }
    }

    pub fn insert_asserted(&mut self, axiom: Axiom) -> bool {
        self.insert(axiom, Provenance::Asserted)
    }

    pub fn contains(&self, axiom: &Axiom) -> bool {
        let axiom = axiom.clone().canonical();
        self.bucket(axiom.box_kind()).contains_key(&axiom)
    }

    pub fn provenance(&self, axiom: &Axiom) -> Option<Provenance> {
        let axiom = axiom.clone().canonical();
        self.bucket(axiom.box_kind()).get(&axiom).copied()
    }

    pub fn remove(&mut self, axiom: &Axiom) -> bool {
        let axiom = axiom.clone().canonical();
        self.bucket_mut(axiom.box_kind()).remove(&axiom).is_some()
    }

    pub fn len(&self) -> usize {
        self.tbox.len() + self.rbox.len() + self.abox.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All axioms, TBox first, then RBox, then ABox; sorted within each box.
    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.tbox.keys().chain(self.rbox.keys()).chain(self.abox.keys())
    }

    pub fn axioms_with_provenance(&self) -> impl Iterator<Item = (&Axiom, Provenance)> {
        self.tbox
            .iter()
            .chain(self.rbox.iter())
            .chain(self.abox.iter())
            .map(|(a, p)| (a, *p))
    }

    pub fn axioms_in(&self, kind: BoxKind) -> impl Iterator<Item = &Axiom> {
        self.bucket(kind).keys()
    }

    pub fn tbox(&self) -> impl Iterator<Item = &Axiom> {
        self.tbox.keys()
    }

    pub fn rbox(&self) -> impl Iterator<Item = &Axiom> {
        self.rbox.keys()
    }

    pub fn abox(&self) -> impl Iterator<Item = &Axiom> {
        self.abox.keys()
    }

    /// TBox and RBox axioms.
    pub fn schema_axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.tbox.keys().chain(self.rbox.keys())
    }

    /// A copy holding only the TBox and RBox, provenance preserved.
    pub fn schema(&self) -> Ontology {
        Ontology {
            iri: self.iri.clone(),
            imports: self.imports.clone(),
            tbox: self.tbox.clone(),
            rbox: self.rbox.clone(),
            abox: BTreeMap::new(),
        }
    }

    /// A copy holding only the ABox.
    pub fn abox_only(&self) -> Ontology {
        Ontology {
            iri: self.iri.clone(),
            imports: Vec::new(),
            tbox: BTreeMap::new(),
            rbox: BTreeMap::new(),
            abox: self.abox.clone(),
        }
    }

    /// Axioms marked `Inferred`.
    pub fn inferred(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms_with_provenance()
            .filter(|(_, p)| *p == Provenance::Inferred)
            .map(|(a, _)| a)
    }

    /// Union of the signatures of all axioms.
    pub fn vocabulary(&self) -> Signature {
        let mut sig = Signature::new();
        for axiom in self.axioms() {
            axiom.collect_signature(&mut sig);
        }
        sig
    }

    /// IRIs used with more than one entity kind.
    pub fn punning_conflicts(&self) -> Vec<(Iri, Vec<EntityKind>)> {
        let mut kinds: BTreeMap<Iri, BTreeSet<EntityKind>> = BTreeMap::new();
        for entity in self.vocabulary() {
            kinds.entry(entity.iri).or_default().insert(entity.kind);
        }
        kinds
            .into_iter()
            .filter(|(_, k)| k.len() > 1)
            .map(|(iri, k)| (iri, k.into_iter().collect()))
            .collect()
    }

    /// Adds every axiom of `other`. Imports of `other` are not copied.
    pub fn merge(&mut self, other: &Ontology) {
        for (axiom, provenance) in other.axioms_with_provenance() {
            self.insert(axiom.clone(), provenance);
        }
    }

    pub fn extend_asserted(&mut self, axioms: impl IntoIterator<Item = Axiom>) {
        for axiom in axioms {
            self.insert_asserted(axiom);
        }
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&Axiom) -> bool) {
        self.tbox.retain(|a, _| keep(a));
        self.rbox.retain(|a, _| keep(a));
        self.abox.retain(|a, _| keep(a));
    }

    /// Renames every occurrence of `from` to `to`, keeping provenance.
    pub fn rename_entity(&mut self, from: &EntityRef, to: &Iri) {
        let old: Vec<(Axiom, Provenance)> = self
            .axioms_with_provenance()
            .map(|(a, p)| (a.clone(), p))
            .collect();
        self.tbox.clear();
        self.rbox.clear();
        self.abox.clear();
        for (axiom, provenance) in old {
            self.insert(axiom.rename(from, to), provenance);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ClassExpression;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://e/{s}")).unwrap()
    }
    fn class(s: &str) -> ClassExpression {
        ClassExpression::Named(iri(s))
    }

    #[test]
    fn dedups_structurally_equal_axioms() {
        let mut o = Ontology::new();
        assert!(o.insert_asserted(Axiom::DisjointClasses(vec![class("A"), class("B")])));
        assert!(!o.insert_asserted(Axiom::DisjointClasses(vec![class("B"), class("A")])));
        assert_eq!(o.len(), 1);
    }

    #[test]
    fn asserted_provenance_wins() {
        let mut o = Ontology::new();
        let ax = Axiom::subclass(class("A"), class("B"));
        o.insert(ax.clone(), Provenance::Inferred);
        o.insert(ax.clone(), Provenance::Asserted);
        o.insert(ax.clone(), Provenance::Inferred);
        assert_eq!(o.provenance(&ax), Some(Provenance::Asserted));
    }

    #[test]
    fn vocabulary_is_union_of_signatures() {
        let o = Ontology::from_axioms([
            Axiom::subclass(class("A"), class("B")),
            Axiom::relation(iri("x"), iri("p"), iri("y")),
        ]);
        assert_eq!(o.vocabulary().len(), 5);
    }

    #[test]
    fn detects_punning() {
        let o = Ontology::from_axioms([
            Axiom::subclass(class("building"), class("Place")),
            Axiom::relation(iri("x"), iri("building"), iri("y")),
        ]);
        let conflicts = o.punning_conflicts();
        assert_eq!(conflicts.len(), 1);
        assert_eq!(conflicts[0].0, iri("building"));
        assert_eq!(
            conflicts[0].1,
            vec![EntityKind::Class, EntityKind::ObjectProperty]
        );
    }

    #[test]
    fn rename_resolves_punning() {
        let mut o = Ontology::from_axioms([
            Axiom::subclass(class("building"), class("Place")),
            Axiom::relation(iri("x"), iri("building"), iri("y")),
        ]);
        o.rename_entity(&EntityRef::class(iri("building")), &iri("Building"));
        assert!(o.punning_conflicts().is_empty());
        assert!(o.contains(&Axiom::subclass(class("Building"), class("Place"))));
    }
}
