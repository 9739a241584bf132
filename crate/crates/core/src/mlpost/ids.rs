use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::model::{EntityKind, Iri, Ontology};

/// Dense ids for one category of IRIs, assigned in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdMap {
    iris: Vec<Iri>,
    ids: HashMap<Iri, u32>,
    base: u32,
}

impl IdMap {
    pub fn new(iris: impl IntoIterator<Item = Iri>, base: u32) -> Self {
        let sorted: BTreeSet<Iri> = iris.into_iter().collect();
        let iris: Vec<Iri> = sorted.into_iter().collect();
        let ids = iris
            .iter()
            .enumerate()
            .map(|(i, iri)| (iri.clone(), i as u32 + base))
            .collect();
        IdMap { iris, ids, base }
    }

    pub fn id(&self, iri: &Iri) -> Option<u32> {
        self.ids.get(iri).copied()
    }

    pub fn iri(&self, id: u32) -> Option<&Iri> {
        self.iris.get(id.checked_sub(self.base)? as usize)
    }

    pub fn len(&self) -> usize {
        self.iris.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iris.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Iri)> {
        self.iris
            .iter()
            .enumerate()
            .map(move |(i, iri)| (i as u32 + self.base, iri))
    }

    /// `id<TAB>iri` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (id, iri) in self.iter() {
            let _ = writeln!(out, "{id}\t{iri}");
        }
        out
    }
}

/// Id maps for individuals, object properties and classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdMaps {
    pub individuals: IdMap,
    pub properties: IdMap,
    pub classes: IdMap,
    /// First id of each map: 0, or 1 with one-based numbering.
    pub base: u32,
}

pub const ID_FILES: [&str; 3] = ["entity_ids.tsv", "relation_ids.tsv", "class_ids.tsv"];

/// Builds maps over the union of the vocabularies of `datasets`, so that
/// several variants of one dataset share the same ids.
pub fn build_id_maps<'a>(datasets: impl IntoIterator<Item = &'a Ontology>, base: u32) -> IdMaps {
    let mut individuals = BTreeSet::new();
    let mut properties = BTreeSet::new();
    let mut classes = BTreeSet::new();
    for dataset in datasets {
        for entity in dataset.vocabulary() {
            match entity.kind {
                EntityKind::NamedIndividual => individuals.insert(entity.iri),
                EntityKind::ObjectProperty => properties.insert(entity.iri),
                EntityKind::Class => classes.insert(entity.iri),
                EntityKind::DataProperty => false,
            };
        }
    }
    IdMaps {
        individuals: IdMap::new(individuals, base),
        properties: IdMap::new(properties, base),
        classes: IdMap::new(classes, base),
        base,
    }
}

impl IdMaps {
    /// `(file name, contents)` for the three map files.
    pub fn files(&self) -> [(&'static str, String); 3] {
        [
            (ID_FILES[0], self.individuals.to_tsv()),
            (ID_FILES[1], self.properties.to_tsv()),
            (ID_FILES[2], self.classes.to_tsv()),
        ]
    }
}
