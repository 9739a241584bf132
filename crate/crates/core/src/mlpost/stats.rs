use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::split::largest_remainder;
use crate::model::{Axiom, Characteristic, ClassExpression, EntityKind, Iri, Ontology, RelationTriple, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PropertyCategory {
    OneToOne,
    OneToMany,
    ManyToOne,
    ManyToMany,
}

/// Category from mean heads per tail (`hpt`) and mean tails per head (`tpt`).
pub fn categorize(hpt: f64, tpt: f64) -> PropertyCategory {
    match (hpt < 1.5, tpt < 1.5) {
        (true, true) => PropertyCategory::OneToOne,
        (true, false) => PropertyCategory::OneToMany,
        (false, true) => PropertyCategory::ManyToOne,
        (false, false) => PropertyCategory::ManyToMany,
    }
}

pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// `triples / properties` rounded to two decimals; 0 without properties.
pub fn avg_triples_per_property(triples: usize, properties: usize) -> f64 {
    if properties == 0 {
        0.0
    } else {
        round2(triples as f64 / properties as f64)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AboxStats {
    pub triples: usize,
    pub individuals: usize,
    pub properties: usize,
    /// Named classes used in class assertions.
    pub classes: usize,
    pub class_assertions: usize,
    pub one_to_one: f64,
    pub one_to_many: f64,
    pub many_to_one: f64,
    pub many_to_many: f64,
    pub avg_triples_per_property: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaStats {
    pub classes: usize,
    pub disjoints: usize,
    pub subclass: usize,
    /// `SubClassOf` axioms with an existential superclass.
    pub existential: usize,
    /// `SubClassOf` axioms with a universal superclass.
    pub universal: usize,
    pub properties: usize,
    pub with_domain: usize,
    pub with_range: usize,
    pub with_both: usize,
    pub functional: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub abox: AboxStats,
    pub schema: SchemaStats,
    /// Whether each axiom type occurs in the schema.
    pub axiom_coverage: BTreeMap<String, bool>,
}

pub const AXIOM_TYPES: [&str; 17] = [
    "ClassAssertion",
    "SubClassOf",
    "EquivalentClasses",
    "DisjointClasses",
    "UnionOf",
    "IntersectionOf",
    "ComplementOf",
    "Existential Restrictions",
    "Universal Restrictions",
    "Cardinality Restrictions",
    "ObjPropDomain",
    "ObjPropRange",
    "SubObjProp",
    "InverseObjProp",
    "EquivalentObjProp",
    "ObjPropCharacteristic",
    "ObjPropChain",
];

/// ABox statistics from the relation triples and the class assertions.
pub fn abox_stats<'a>(
    relations: &'a [RelationTriple],
    class_assertions: impl IntoIterator<Item = &'a Axiom>,
) -> AboxStats {
    relation_stats(
        relations.iter().map(|t| (&t.subject, &t.property, &t.object)),
        class_assertions,
    )
}

fn relation_stats<'a>(
    relations: impl IntoIterator<Item = (&'a Iri, &'a Iri, &'a Iri)>,
    class_assertions: impl IntoIterator<Item = &'a Axiom>,
) -> AboxStats {
    let mut ind_ids: FxHashMap<&Iri, u32> = FxHashMap::default();
    let mut by_prop: FxHashMap<&Iri, Vec<(u32, u32)>> = FxHashMap::default();
    let mut triples = 0;
    for (subject, property, object) in relations {
        triples += 1;
        let next = ind_ids.len() as u32;
        let s = *ind_ids.entry(subject).or_insert(next);
        let next = ind_ids.len() as u32;
        let o = *ind_ids.entry(object).or_insert(next);
        by_prop.entry(property).or_default().push((s, o));
    }
    let mut counts = [0usize; 4];
    let distinct = |mut v: Vec<u32>| {
        v.sort_unstable();
        v.dedup();
        v.len() as f64
    };
    for pairs in by_prop.values_mut() {
        pairs.sort_unstable();
        pairs.dedup();
        let n = pairs.len() as f64;
        let heads = distinct(pairs.iter().map(|p| p.0).collect());
        let tails = distinct(pairs.iter().map(|p| p.1).collect());
        let category = categorize(n / tails, n / heads);
        counts[category as usize] += 1;
    }
    let weights: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let hundredths = if by_prop.is_empty() {
        vec![0; 4]
    } else {
        largest_remainder(100, &weights)
    };
    let mut classes = BTreeSet::new();
    let mut class_assertions_count = 0;
    for axiom in class_assertions {
        if let Axiom::ClassAssertion { class, .. } = axiom {
            class_assertions_count += 1;
            if let ClassExpression::Named(c) = class {
                classes.insert(c);
            }
        }
    }
    AboxStats {
        triples,
        individuals: ind_ids.len(),
        properties: by_prop.len(),
        classes: classes.len(),
        class_assertions: class_assertions_count,
        one_to_one: hundredths[0] as f64 / 100.0,
        one_to_many: hundredths[1] as f64 / 100.0,
        many_to_one: hundredths[2] as f64 / 100.0,
        many_to_many: hundredths[3] as f64 / 100.0,
        avg_triples_per_property: avg_triples_per_property(triples, by_prop.len()),
    }
}

fn is_trivial(ce: &ClassExpression) -> bool {
    *ce == ClassExpression::Top
}

pub fn schema_stats(dataset: &Ontology) -> SchemaStats {
    // Relation assertions only add their property to the class and
    // property vocabulary.
    let mut vocabulary = Signature::new();
    let mut properties: FxHashSet<&Iri> = FxHashSet::default();
    for axiom in dataset.axioms() {
        match axiom {
            Axiom::ObjectPropertyAssertion { property, .. } => {
                properties.insert(property);
            }
            _ => axiom.collect_signature(&mut vocabulary),
        }
    }
    properties.extend(vocabulary.of_kind(EntityKind::ObjectProperty));
    let mut stats = SchemaStats {
        classes: vocabulary.of_kind(EntityKind::Class).count(),
        properties: properties.len(),
        ..SchemaStats::default()
    };
    let mut domains = BTreeSet::new();
    let mut ranges = BTreeSet::new();
    let mut functional = BTreeSet::new();
    for axiom in dataset.schema_axioms() {
        match axiom {
            Axiom::DisjointClasses(_) => stats.disjoints += 1,
            Axiom::SubClassOf { sup, .. } => {
                stats.subclass += 1;
                match sup {
                    ClassExpression::SomeValuesFrom { .. } => stats.existential += 1,
                    ClassExpression::AllValuesFrom { .. } => stats.universal += 1,
                    _ => {}
                }
            }
            Axiom::ObjectPropertyDomain { property, domain } if !is_trivial(domain) => {
                domains.insert(property);
            }
            Axiom::ObjectPropertyRange { property, range } if !is_trivial(range) => {
                ranges.insert(property);
            }
            Axiom::Characteristic {
                property,
                characteristic: Characteristic::Functional,
            } => {
                functional.insert(property);
            }
            _ => {}
        }
    }
    stats.with_domain = domains.len();
    stats.with_range = ranges.len();
    stats.with_both = domains.intersection(&ranges).count();
    stats.functional = functional.len();
    stats
}

/// Which of [`AXIOM_TYPES`] occur in `dataset`.
pub fn axiom_coverage(dataset: &Ontology) -> BTreeMap<String, bool> {
    let mut present: BTreeSet<&str> = BTreeSet::new();
    for axiom in dataset.axioms() {
        present.insert(match axiom {
            Axiom::ClassAssertion { .. } => "ClassAssertion",
            Axiom::ObjectPropertyAssertion { .. } => "",
            Axiom::SubClassOf { .. } => "SubClassOf",
            Axiom::EquivalentClasses(_) => "EquivalentClasses",
            Axiom::DisjointClasses(_) => "DisjointClasses",
            Axiom::ObjectPropertyDomain { .. } => "ObjPropDomain",
            Axiom::ObjectPropertyRange { .. } => "ObjPropRange",
            Axiom::SubObjectPropertyOf { .. } => "SubObjProp",
            Axiom::InverseObjectProperties(..) => "InverseObjProp",
            Axiom::EquivalentObjectProperties(_) => "EquivalentObjProp",
            Axiom::Characteristic { .. } => "ObjPropCharacteristic",
            Axiom::SubPropertyChainOf { .. } => "ObjPropChain",
        });
        if axiom.box_kind() == crate::model::BoxKind::ABox {
            continue;
        }
        for ce in axiom.class_expressions() {
            ce.walk(&mut |e| {
                let name = match e {
                    ClassExpression::UnionOf(_) => "UnionOf",
                    ClassExpression::IntersectionOf(_) => "IntersectionOf",
                    ClassExpression::ComplementOf(_) => "ComplementOf",
                    ClassExpression::SomeValuesFrom { .. } => "Existential Restrictions",
                    ClassExpression::AllValuesFrom { .. } => "Universal Restrictions",
                    ClassExpression::MinCardinality { .. }
                    | ClassExpression::MaxCardinality { .. }
                    | ClassExpression::ExactCardinality { .. } => "Cardinality Restrictions",
                    _ => return,
                };
                present.insert(name);
            });
        }
    }
    AXIOM_TYPES
        .iter()
        .map(|t| (t.to_string(), present.contains(t)))
        .collect()
}

pub fn compute_stats(dataset: &Ontology) -> StatsReport {
    let relations = dataset.abox().filter_map(|a| match a {
        Axiom::ObjectPropertyAssertion {
            subject,
            property,
            object,
        } => Some((subject, property, object)),
        _ => None,
    });
    StatsReport {
        abox: relation_stats(relations, dataset.abox()),
        schema: schema_stats(dataset),
        axiom_coverage: axiom_coverage(dataset),
    }
}

fn thousands(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

fn decimal(x: f64) -> String {
    let fixed = format!("{x:.2}");
    let (int, frac) = fixed.split_once('.').unwrap_or((&fixed, "00"));
    let int: usize = int.parse().unwrap_or(0);
    format!("{}.{frac}", thousands(int))
}

/// Markdown tables with the ABox, schema and coverage figures.
pub fn stats_markdown(name: &str, report: &StatsReport) -> String {
    let a = &report.abox;
    let s = &report.schema;
    let mut out = String::new();
    let _ = writeln!(out, "# {name}\n");
    let _ = writeln!(out, "## ABox\n");
    let _ = writeln!(
        out,
        "| Dataset | Triples | Inds | Props | Classes | 1to1 | 1toN | Nto1 | NtoN | Avg Triples | Class Assert. |"
    );
    let _ = writeln!(out, "|---|--:|--:|--:|--:|--:|--:|--:|--:|--:|--:|");
    let _ = writeln!(
        out,
        "| {name} | {} | {} | {} | {} | {:.2} | {:.2} | {:.2} | {:.2} | {} | {} |\n",
        thousands(a.triples),
        thousands(a.individuals),
        thousands(a.properties),
        thousands(a.classes),
        a.one_to_one,
        a.one_to_many,
        a.many_to_one,
        a.many_to_many,
        decimal(a.avg_triples_per_property),
        thousands(a.class_assertions),
    );
    let _ = writeln!(out, "## Schema\n");
    let _ = writeln!(
        out,
        "| Dataset | Classes | Disjoints | Subclass | ⊑∃R.C | ⊑∀R.C | Prop. | Domain | Range | Both | Functional |"
    );
    let _ = writeln!(out, "|---|--:|--:|--:|--:|--:|--:|--:|--:|--:|--:|");
    let _ = writeln!(
        out,
        "| {name} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
        s.classes,
        s.disjoints,
        s.subclass,
        s.existential,
        s.universal,
        s.properties,
        s.with_domain,
        s.with_range,
        s.with_both,
        s.functional,
    );
    let _ = writeln!(out, "## Axiom coverage\n");
    let _ = writeln!(out, "| Axiom Type | Present |");
    let _ = writeln!(out, "|---|:-:|");
    for t in AXIOM_TYPES {
        let mark = if report.axiom_coverage.get(t).copied().unwrap_or(false) {
            "yes"
        } else {
            "no"
        };
        let _ = writeln!(out, "| {t} | {mark} |");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://e/{s}")).unwrap()
    }
    fn t(s: &str, p: &str, o: &str) -> RelationTriple {
        RelationTriple::new(iri(s), iri(p), iri(o))
    }

    #[test]
    fn averages_round_to_two_decimals() {
        assert_eq!(avg_triples_per_property(28_525, 275), 103.73);
        assert_eq!(avg_triples_per_property(1_080_398, 34), 31_776.41);
        assert_eq!(avg_triples_per_property(5, 0), 0.0);
    }

    #[test]
    fn single_pair_is_one_to_one() {
        let stats = abox_stats(&[t("a", "p", "b")], []);
        assert_eq!(stats.one_to_one, 1.0);
        assert_eq!(stats.individuals, 2);
    }

    #[test]
    fn categories() {
        let rels = [
            t("a", "fan", "b1"),
            t("a", "fan", "b2"),
            t("a1", "in", "z"),
            t("a2", "in", "z"),
            t("x", "one", "y"),
        ];
        let stats = abox_stats(&rels, []);
        assert_eq!(
            (stats.one_to_one, stats.one_to_many, stats.many_to_one, stats.many_to_many),
            (0.34, 0.33, 0.33, 0.0)
        );
        let sum = stats.one_to_one + stats.one_to_many + stats.many_to_one + stats.many_to_many;
        assert!((sum - 1.0).abs() < 0.01);
    }

    #[test]
    fn markdown_uses_thousands_separators() {
        let mut report = StatsReport::default();
        report.abox.triples = 1_080_398;
        report.abox.avg_triples_per_property = 31_776.41;
        let md = stats_markdown("Y", &report);
        assert!(md.contains("1,080,398"));
        assert!(md.contains("31,776.41"));
    }

    #[test]
    fn coverage_sees_nested_constructors() {
        let dataset = Ontology::from_axioms([Axiom::subclass(
            ClassExpression::Named(iri("A")),
            ClassExpression::some(
                iri("r"),
                ClassExpression::complement(ClassExpression::Named(iri("B"))),
            ),
        )]);
        let coverage = axiom_coverage(&dataset);
        assert!(coverage["ComplementOf"]);
        assert!(coverage["Existential Restrictions"]);
        assert!(!coverage["UnionOf"]);
        assert_eq!(schema_stats(&dataset).existential, 1);
    }
}
