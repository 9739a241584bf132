use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Iri;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityKind {
    Class,
    ObjectProperty,
    DataProperty,
    NamedIndividual,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            EntityKind::Class => "Class",
            EntityKind::ObjectProperty => "ObjectProperty",
            EntityKind::DataProperty => "DataProperty",
            EntityKind::NamedIndividual => "NamedIndividual",
        };
        f.write_str(name)
    }
}

/// A typed entity name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntityRef {
    pub iri: Iri,
    pub kind: EntityKind,
}

impl EntityRef {
    pub fn new(iri: Iri, kind: EntityKind) -> Self {
        EntityRef { iri, kind }
    }

    pub fn class(iri: Iri) -> Self {
        EntityRef::new(iri, EntityKind::Class)
    }

    pub fn object_property(iri: Iri) -> Self {
        EntityRef::new(iri, EntityKind::ObjectProperty)
    }

    pub fn individual(iri: Iri) -> Self {
        EntityRef::new(iri, EntityKind::NamedIndividual)
    }
}

impl fmt::Display for EntityRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.iri)
    }
}

/// A set of entities, compared by `(iri, kind)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    entities: BTreeSet<EntityRef>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, entity: EntityRef) -> bool {
        self.entities.insert(entity)
    }

    pub fn contains(&self, entity: &EntityRef) -> bool {
        self.entities.contains(entity)
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EntityRef> {
        self.entities.iter()
    }

    pub fn extend(&mut self, other: &Signature) {
        self.entities.extend(other.entities.iter().cloned());
    }

    pub fn intersects(&self, other: &Signature) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().any(|e| large.contains(e))
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.entities.is_subset(&other.entities)
    }

    pub fn of_kind(&self, kind: EntityKind) -> impl Iterator<Item = &Iri> {
        self.entities
            .iter()
            .filter(move |e| e.kind == kind)
            .map(|e| &e.iri)
    }
}

impl FromIterator<EntityRef> for Signature {
    fn from_iter<T: IntoIterator<Item = EntityRef>>(iter: T) -> Self {
        Signature {
            entities: iter.into_iter().collect(),
        }
    }
}

impl IntoIterator for Signature {
    type Item = EntityRef;
    type IntoIter = std::collections::btree_set::IntoIter<EntityRef>;

    fn into_iter(self) -> Self::IntoIter {
        self.entities.into_iter()
    }
}

impl<'a> IntoIterator for &'a Signature {
    type Item = &'a EntityRef;
    type IntoIter = std::collections::btree_set::Iter<'a, EntityRef>;

    fn into_iter(self) -> Self::IntoIter {
        self.entities.iter()
    }
}
