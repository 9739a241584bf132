use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ids::IdMap;
use super::{IdMaps, MlError, Split};
use crate::model::{Axiom, ClassExpression, Iri, Ontology};

/// Serializes axioms as a JSON array; class expressions become nested
/// objects and list-valued constructs become arrays.
pub fn owl_to_json<'a>(axioms: impl IntoIterator<Item = &'a Axiom>) -> String {
    let axioms: Vec<&Axiom> = axioms.into_iter().collect();
    serde_json::to_string_pretty(&axioms).expect("axioms always serialize")
}

pub fn json_to_axioms(text: &str) -> Result<Vec<Axiom>, MlError> {
    Ok(serde_json::from_str(text)?)
}

/// Named subsumption pairs: `SubClassOf` between named classes and both
/// directions of every named pair in `EquivalentClasses`. Tautologies are
/// left out.
pub fn taxonomy_pairs(dataset: &Ontology) -> BTreeSet<(Iri, Iri)> {
    let mut out = BTreeSet::new();
    for axiom in dataset.tbox() {
        match axiom {
            Axiom::SubClassOf {
                sub: ClassExpression::Named(a),
                sup: ClassExpression::Named(b),
            } if a != b => {
                out.insert((a.clone(), b.clone()));
            }
            Axiom::EquivalentClasses(ops) => {
                let named: Vec<&Iri> = ops.iter().filter_map(ClassExpression::as_named).collect();
                for a in &named {
                    for b in &named {
                        if a != b {
                            out.insert(((*a).clone(), (*b).clone()));
                        }
                    }
                }
            }
            _ => {}
        }
    }
    out
}

fn atomic_classes(ce: &ClassExpression) -> Vec<&Iri> {
    match ce {
        ClassExpression::Named(iri) => vec![iri],
        ClassExpression::UnionOf(ops) => ops.iter().filter_map(ClassExpression::as_named).collect(),
        _ => Vec::new(),
    }
}

/// `(property, class)` for named domains and each named disjunct of a union
/// domain. With `range`, the same for ranges.
pub fn domain_pairs(dataset: &Ontology, range: bool) -> BTreeSet<(Iri, Iri)> {
    let mut out = BTreeSet::new();
    for axiom in dataset.rbox() {
        let (p, ce) = match (axiom, range) {
            (Axiom::ObjectPropertyDomain { property, domain }, false) => (property, domain),
            (Axiom::ObjectPropertyRange { property, range }, true) => (property, range),
            _ => continue,
        };
        for c in atomic_classes(ce) {
            out.insert((p.clone(), c.clone()));
        }
    }
    out
}

/// `SubObjectPropertyOf` pairs plus both directions of equivalences.
pub fn subproperty_pairs(dataset: &Ontology) -> BTreeSet<(Iri, Iri)> {
    let mut out = BTreeSet::new();
    for axiom in dataset.rbox() {
        match axiom {
            Axiom::SubObjectPropertyOf { sub, sup } if sub != sup => {
                out.insert((sub.clone(), sup.clone()));
            }
            Axiom::EquivalentObjectProperties(ps) => {
                for a in ps {
                    for b in ps {
                        if a != b {
                            out.insert((a.clone(), b.clone()));
                        }
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// `(individual, class)` for named class assertions other than `owl:Thing`.
pub fn type_pairs(dataset: &Ontology) -> BTreeSet<(Iri, Iri)> {
    dataset
        .abox()
        .filter_map(|axiom| match axiom {
            Axiom::ClassAssertion {
                individual,
                class: ClassExpression::Named(c),
            } => Some((individual.clone(), c.clone())),
            _ => None,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableInfo {
    pub file: String,
    pub rows: usize,
    pub columns: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CooManifest {
    /// First id of every map. 0 means ids index tensor dimensions directly.
    pub id_base: u32,
    pub individuals: usize,
    pub properties: usize,
    pub classes: usize,
    pub tables: BTreeMap<String, TableInfo>,
    /// SHA-256 of every written file except the manifest itself.
    pub checksums: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CooExport {
    pub dir: PathBuf,
    pub manifest: CooManifest,
}

pub const MANIFEST_FILE: &str = "manifest.json";

fn lookup(map: &IdMap, iri: &Iri) -> Result<u32, MlError> {
    map.id(iri).ok_or_else(|| MlError::Unmapped(iri.to_string()))
}

fn rows_to_tsv<const N: usize>(rows: &BTreeSet<[u32; N]>) -> String {
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

fn pair_rows(pairs: &BTreeSet<(Iri, Iri)>, left: &IdMap, right: &IdMap) -> Result<BTreeSet<[u32; 2]>, MlError> {
    pairs
        .iter()
        .map(|(a, b)| Ok([lookup(left, a)?, lookup(right, b)?]))
        .collect()
}

struct Writer {
    dir: PathBuf,
    manifest: CooManifest,
}

impl Writer {
    fn file(&mut self, name: &str, contents: &str) -> Result<(), MlError> {
        fs::write(self.dir.join(name), contents)?;
        self.manifest
            .checksums
            .insert(name.to_owned(), hex::encode(Sha256::digest(contents.as_bytes())));
        Ok(())
    }

    fn table<const N: usize>(&mut self, name: &str, rows: &BTreeSet<[u32; N]>) -> Result<(), MlError> {
        let file = format!("{name}.tsv");
        self.file(&file, &rows_to_tsv(rows))?;
        self.manifest.tables.insert(
            name.to_owned(),
            TableInfo {
                file,
                rows: rows.len(),
                columns: N,
            },
        );
        Ok(())
    }
}

/// Writes the id maps, the integer index tables, IRI-form split files and
/// `axioms.json` to `dir`, then `manifest.json`.
pub fn export_coo(dir: &Path, dataset: &Ontology, split: &Split, maps: &IdMaps) -> Result<CooExport, MlError> {
    fs::create_dir_all(dir)?;
    let mut w = Writer {
        dir: dir.to_owned(),
        manifest: CooManifest {
            id_base: maps.base,
            individuals: maps.individuals.len(),
            properties: maps.properties.len(),
            classes: maps.classes.len(),
            ..CooManifest::default()
        },
    };
    for (name, contents) in maps.files() {
        w.file(name, &contents)?;
    }
    for (name, triples) in split.parts() {
        let mut rows = BTreeSet::new();
        let mut text = String::new();
        for t in triples {
            rows.insert([
                lookup(&maps.individuals, &t.subject)?,
                lookup(&maps.properties, &t.property)?,
                lookup(&maps.individuals, &t.object)?,
            ]);
            let _ = writeln!(text, "{}\t{}\t{}", t.subject, t.property, t.object);
        }
        w.table(name, &rows)?;
        w.file(&format!("{name}.txt"), &text)?;
    }
    w.table("types", &pair_rows(&type_pairs(dataset), &maps.individuals, &maps.classes)?)?;
    w.table("taxonomy", &pair_rows(&taxonomy_pairs(dataset), &maps.classes, &maps.classes)?)?;
    w.table("domain", &pair_rows(&domain_pairs(dataset, false), &maps.properties, &maps.classes)?)?;
    w.table("range", &pair_rows(&domain_pairs(dataset, true), &maps.properties, &maps.classes)?)?;
    w.table(
        "subprop",
        &pair_rows(&subproperty_pairs(dataset), &maps.properties, &maps.properties)?,
    )?;
    let mut json = owl_to_json(dataset.axioms());
    json.push('\n');
    w.file("axioms.json", &json)?;

    let manifest = w.manifest;
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(dir.join(MANIFEST_FILE), text)?;
    Ok(CooExport {
        dir: dir.to_owned(),
        manifest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlpost::build_id_maps;
    use crate::model::RelationTriple;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://e/{s}")).unwrap()
    }
    fn c(s: &str) -> ClassExpression {
        ClassExpression::Named(iri(s))
    }

    #[test]
    fn union_json_shape() {
        let axiom = Axiom::subclass(c("A"), ClassExpression::union(vec![c("B"), c("C")]).unwrap());
        let json: serde_json::Value = serde_json::from_str(&owl_to_json([&axiom])).unwrap();
        assert_eq!(json[0]["sup"]["type"], "ObjectUnionOf");
        assert_eq!(json[0]["sup"]["operands"][1]["iri"], "http://e/C");
        assert_eq!(owl_to_json([]), "[]");
    }

    #[test]
    fn relation_rows_and_union_domain() {
        let dataset = Ontology::from_axioms([
            Axiom::relation(iri("a"), iri("p"), iri("b")),
            Axiom::ObjectPropertyDomain {
                property: iri("p"),
                domain: ClassExpression::union(vec![c("A"), c("B")]).unwrap(),
            },
        ]);
        let split = Split {
            train: BTreeSet::from([RelationTriple::new(iri("a"), iri("p"), iri("b"))]),
            ..Split::default()
        };
        let maps = build_id_maps([&dataset], 0);
        let dir = tempfile::tempdir().unwrap();
        let export = export_coo(dir.path(), &dataset, &split, &maps).unwrap();
        assert_eq!(fs::read_to_string(dir.path().join("train.tsv")).unwrap(), "0\t0\t1\n");
        assert_eq!(export.manifest.tables["domain"].rows, 2);
        assert_eq!(export.manifest.tables["valid"].rows, 0);
        assert!(dir.path().join(MANIFEST_FILE).exists());
    }

    #[test]
    fn unmapped_iri_is_an_error() {
        let dataset = Ontology::from_axioms([Axiom::class_assertion(iri("x"), c("A"))]);
        let dir = tempfile::tempdir().unwrap();
        let err = export_coo(dir.path(), &dataset, &Split::default(), &IdMaps::default());
        assert!(matches!(err, Err(MlError::Unmapped(_))));
    }
}
