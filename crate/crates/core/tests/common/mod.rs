//! Generators and independent oracles shared by the property suites and
//! the acceptance target.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use kgdistill::model::{
    Axiom, BoxKind, Characteristic, ClassExpression, Iri, Ontology, RelationTriple, Signature,
};
use kgdistill::reasoner::ClashKind;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn iri(s: &str) -> Iri {
    Iri::new(format!("http://o/{s}")).unwrap()
}

pub fn c(s: &str) -> ClassExpression {
    ClassExpression::Named(iri(s))
}

pub fn class_iri(i: usize) -> Iri {
    iri(&format!("C{i}"))
}

// ---- subsumption closure ----

/// Random DAG: edges only go from a lower to a higher index.
pub fn random_dag(rng: &mut ChaCha8Rng, max_nodes: usize, max_edges: usize) -> (usize, Vec<(usize, usize)>) {
    let n = rng.random_range(2..=max_nodes);
    let m = rng.random_range(0..=max_edges);
    let mut edges = BTreeSet::new();
    for _ in 0..m {
        let a = rng.random_range(0..n - 1);
        let b = rng.random_range(a + 1..n);
        edges.insert((a, b));
    }
    (n, edges.into_iter().collect())
}

pub fn dag_ontology(edges: &[(usize, usize)]) -> Ontology {
    Ontology::from_axioms(
        edges
            .iter()
            .map(|&(a, b)| Axiom::subclass(ClassExpression::Named(class_iri(a)), ClassExpression::Named(class_iri(b)))),
    )
}

/// Floyd-Warshall reachability without the diagonal.
pub fn warshall(n: usize, edges: &[(usize, usize)]) -> BTreeSet<(Iri, Iri)> {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        let via = reach[k].clone();
        for row in reach.iter_mut() {
            if row[k] {
                for (r, v) in row.iter_mut().zip(&via) {
                    *r |= *v;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for (i, row) in reach.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            if r && i != j {
                out.insert((class_iri(i), class_iri(j)));
            }
        }
    }
    out
}

// ---- modularization ----

/// Random ontology over at most `symbols` names split among classes,
/// properties and individuals.
pub fn random_ontology(rng: &mut ChaCha8Rng, max_axioms: usize, symbols: usize) -> Ontology {
    let nc = (symbols / 2).max(2);
    let np = (symbols / 4).max(1);
    let ni = (symbols - nc - np).max(2);
    let cls = |rng: &mut ChaCha8Rng| c(&format!("K{}", rng.random_range(0..nc)));
    let prop = |rng: &mut ChaCha8Rng| iri(&format!("r{}", rng.random_range(0..np)));
    let ind = |rng: &mut ChaCha8Rng| iri(&format!("i{}", rng.random_range(0..ni)));
    let n = rng.random_range(1..=max_axioms);
    let mut axioms = Vec::new();
    for _ in 0..n {
        let ax = match rng.random_range(0..11) {
            0 | 1 => Axiom::subclass(cls(rng), cls(rng)),
            2 => Axiom::subclass(cls(rng), ClassExpression::some(prop(rng), cls(rng))),
            3 => Axiom::DisjointClasses(vec![cls(rng), cls(rng)]),
            4 => Axiom::ObjectPropertyDomain {
                property: prop(rng),
                domain: cls(rng),
            },
            5 => Axiom::SubObjectPropertyOf {
                sub: prop(rng),
                sup: prop(rng),
            },
            6 => Axiom::InverseObjectProperties(prop(rng), prop(rng)),
            7 => Axiom::Characteristic {
                property: prop(rng),
                characteristic: *Characteristic::ALL.choose(rng).unwrap(),
            },
            8 => Axiom::EquivalentClasses(vec![
                cls(rng),
                ClassExpression::IntersectionOf(vec![cls(rng), cls(rng)]),
            ]),
            9 => Axiom::class_assertion(ind(rng), cls(rng)),
            _ => Axiom::relation(ind(rng), prop(rng), ind(rng)),
        };
        axioms.push(ax);
    }
    Ontology::from_axioms(axioms)
}

/// Rescans every schema axiom until the signature stops growing.
pub fn naive_module(ontology: &Ontology, seed: &Signature) -> (BTreeSet<Axiom>, Signature) {
    let schema: Vec<&Axiom> = ontology.axioms().filter(|a| a.box_kind() != BoxKind::ABox).collect();
    let mut sigma = seed.clone();
    let mut module = BTreeSet::new();
    loop {
        let mut changed = false;
        for ax in &schema {
            if module.contains(*ax) {
                continue;
            }
            let sig = ax.signature();
            if sig.iter().any(|e| sigma.contains(e)) {
                module.insert((*ax).clone());
                for e in sig.iter() {
                    sigma.insert(e.clone());
                }
                changed = true;
            }
        }
        if !changed {
            return (module, sigma);
        }
    }
}

// ---- degree filter ----

pub fn random_graph(rng: &mut ChaCha8Rng, max_edges: usize) -> Vec<RelationTriple> {
    let nodes = rng.random_range(2..=(max_edges / 2).max(3));
    let props = rng.random_range(1..=8);
    let m = rng.random_range(1..=max_edges);
    (0..m)
        .map(|_| {
            RelationTriple::new(
                iri(&format!("n{}", rng.random_range(0..nodes))),
                iri(&format!("q{}", rng.random_range(0..props))),
                iri(&format!("n{}", rng.random_range(0..nodes))),
            )
        })
        .collect()
}

/// Degree = subject plus object occurrences over distinct triples; keep
/// triples whose two ends reach `k`.
pub fn brute_force_filter(triples: &[RelationTriple], k: u64) -> BTreeSet<RelationTriple> {
    let distinct: BTreeSet<&RelationTriple> = triples.iter().collect();
    let mut degree: BTreeMap<&Iri, u64> = BTreeMap::new();
    for t in &distinct {
        *degree.entry(&t.subject).or_default() += 1;
        *degree.entry(&t.object).or_default() += 1;
    }
    distinct
        .into_iter()
        .filter(|t| degree[&t.subject] >= k && degree[&t.object] >= k)
        .cloned()
        .collect()
}

// ---- clash fixtures ----

pub struct ClashFixture {
    pub kind: ClashKind,
    pub schema: Ontology,
    pub abox: Vec<Axiom>,
}

fn rel(s: &str, p: &str, o: &str) -> Axiom {
    Axiom::relation(iri(s), iri(p), iri(o))
}

fn typed(i: &str, cl: &str) -> Axiom {
    Axiom::class_assertion(iri(i), c(cl))
}

fn ch(p: &str, k: Characteristic) -> Axiom {
    Axiom::Characteristic {
        property: iri(p),
        characteristic: k,
    }
}

/// One seeded clash per kind, each buried in unrelated clean assertions.
pub fn clash_fixtures() -> Vec<ClashFixture> {
    let noise = || {
        vec![
            typed("n1", "Person"),
            typed("n2", "Person"),
            rel("n1", "knows", "n2"),
            rel("n2", "knows", "n1"),
        ]
    };
    let base = || {
        vec![
            Axiom::subclass(c("Student"), c("Person")),
            Axiom::ObjectPropertyDomain {
                property: iri("knows"),
                domain: c("Person"),
            },
        ]
    };
    let mk = |kind, extra_schema: Vec<Axiom>, extra_abox: Vec<Axiom>| {
        let mut schema = base();
        schema.extend(extra_schema);
        let mut abox = noise();
        abox.extend(extra_abox);
        ClashFixture {
            kind,
            schema: Ontology::from_axioms(schema),
            abox,
        }
    };
    vec![
        mk(
            ClashKind::DisjointInstance,
            vec![
                Axiom::DisjointClasses(vec![c("Person"), c("Place")]),
                Axiom::ObjectPropertyRange {
                    property: iri("bornIn"),
                    range: c("Place"),
                },
            ],
            vec![typed("x", "Student"), rel("y", "bornIn", "x")],
        ),
        mk(
            ClashKind::ComplementInstance,
            vec![Axiom::EquivalentClasses(vec![
                c("Robot"),
                ClassExpression::complement(c("Person")),
            ])],
            vec![typed("x", "Robot"), rel("x", "knows", "n1")],
        ),
        mk(
            ClashKind::IrreflexiveSelfLoop,
            vec![ch("parentOf", Characteristic::Irreflexive)],
            vec![rel("x", "parentOf", "x")],
        ),
        mk(
            ClashKind::AsymmetricPair,
            vec![ch("parentOf", Characteristic::Asymmetric)],
            vec![rel("x", "parentOf", "y"), rel("y", "parentOf", "x")],
        ),
        mk(
            ClashKind::FunctionalFanOut,
            vec![ch("hasMother", Characteristic::Functional)],
            vec![rel("x", "hasMother", "m1"), rel("x", "hasMother", "m2")],
        ),
        mk(
            ClashKind::InverseFunctionalFanIn,
            vec![ch("ssnOf", Characteristic::InverseFunctional)],
            vec![rel("s1", "ssnOf", "x"), rel("s2", "ssnOf", "x")],
        ),
        mk(
            ClashKind::MaxCardinalityViolation,
            vec![Axiom::subclass(
                c("Parent2"),
                ClassExpression::MaxCardinality {
                    n: 2,
                    property: iri("hasChild"),
                    filler: Box::new(ClassExpression::Top),
                },
            )],
            vec![
                typed("x", "Parent2"),
                rel("x", "hasChild", "k1"),
                rel("x", "hasChild", "k2"),
                rel("x", "hasChild", "k3"),
            ],
        ),
        mk(
            ClashKind::BottomInstance,
            vec![Axiom::subclass(
                ClassExpression::IntersectionOf(vec![c("Person"), c("Ghost")]),
                ClassExpression::Bottom,
            )],
            vec![typed("x", "Ghost"), rel("x", "knows", "n2")],
        ),
    ]
}

// ---- splits ----

pub fn random_assertions(rng: &mut ChaCha8Rng, max_triples: usize) -> Vec<RelationTriple> {
    let m = rng.random_range(1..=max_triples);
    let nodes = rng.random_range(2..=(m / 2).max(3));
    let props = rng.random_range(1..=10);
    (0..m)
        .map(|_| {
            RelationTriple::new(
                iri(&format!("n{}", rng.random_range(0..nodes))),
                iri(&format!("q{}", rng.random_range(0..props))),
                iri(&format!("n{}", rng.random_range(0..nodes))),
            )
        })
        .collect()
}

/// Random inverse pairs among the `q*` properties.
pub fn random_inverses(rng: &mut ChaCha8Rng) -> BTreeSet<(Iri, Iri)> {
    (0..rng.random_range(0..4))
        .map(|_| {
            (
                iri(&format!("q{}", rng.random_range(0..10))),
                iri(&format!("q{}", rng.random_range(0..10))),
            )
        })
        .collect()
}

/// Evaluation triples whose reverse, under the same or an inverse
/// property, is in train.
pub fn leaks(split: &kgdistill::mlpost::Split, inverses: &BTreeSet<(Iri, Iri)>) -> usize {
    let mut partners: BTreeMap<&Iri, BTreeSet<&Iri>> = BTreeMap::new();
    for (p, q) in inverses {
        partners.entry(p).or_default().insert(q);
        partners.entry(q).or_default().insert(p);
    }
    split
        .valid
        .iter()
        .chain(&split.test)
        .filter(|t| {
            let mut props: BTreeSet<&Iri> = partners.get(&t.property).cloned().unwrap_or_default();
            props.insert(&t.property);
            props.iter().any(|p| {
                split
                    .train
                    .contains(&RelationTriple::new(t.object.clone(), (*p).clone(), t.subject.clone()))
            })
        })
        .count()
}

// ---- round-trip corpus ----

pub fn corpus_files() -> Vec<std::path::PathBuf> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}

pub fn load_corpus_file(path: &std::path::Path) -> Ontology {
    kgdistill::rdf::read_ontology(path, &kgdistill::rdf::DecodeOptions::default())
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .0
}

/// Serializes in both writable formats and parses back; returns the first
/// mismatch.
pub fn roundtrip_mismatch(ontology: &Ontology) -> Option<String> {
    use kgdistill::rdf::{parse_document, serialize, triples_to_axioms, DecodeOptions, RdfFormat};
    for format in [RdfFormat::NTriples, RdfFormat::Turtle] {
        let text = serialize(ontology, format).unwrap();
        let triples = parse_document(text.as_bytes(), format, None).unwrap();
        let (back, _) = triples_to_axioms(&triples, &DecodeOptions::default()).unwrap();
        if &back != ontology {
            return Some(format!("{format:?}:\n{text}"));
        }
    }
    let json = kgdistill::mlpost::owl_to_json(ontology.axioms());
    let again = kgdistill::mlpost::owl_to_json(&kgdistill::mlpost::json_to_axioms(&json).unwrap());
    if json != again {
        return Some(format!("json:\n{json}"));
    }
    None
}

/// Variant names of every axiom, class expression and characteristic seen.
pub fn corpus_coverage(ontologies: &[Ontology]) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    for ax in ontologies.iter().flat_map(|o| o.axioms()) {
        let name = format!("{ax:?}");
        seen.insert(name[..name.find([' ', '(', '{']).unwrap_or(name.len())].to_string());
        if let Axiom::Characteristic { characteristic, .. } = ax {
            seen.insert(format!("{characteristic:?}"));
        }
        for ce in ax.class_expressions() {
            ce.walk(&mut |e| {
                let name = format!("{e:?}");
                seen.insert(name[..name.find([' ', '(', '{']).unwrap_or(name.len())].to_string());
            });
        }
    }
    seen
}

pub const REQUIRED_COVERAGE: &[&str] = &[
    "SubClassOf",
    "EquivalentClasses",
    "DisjointClasses",
    "ClassAssertion",
    "ObjectPropertyAssertion",
    "SubObjectPropertyOf",
    "SubPropertyChainOf",
    "EquivalentObjectProperties",
    "InverseObjectProperties",
    "ObjectPropertyDomain",
    "ObjectPropertyRange",
    "Characteristic",
    "Top",
    "Bottom",
    "Named",
    "UnionOf",
    "IntersectionOf",
    "ComplementOf",
    "SomeValuesFrom",
    "AllValuesFrom",
    "MinCardinality",
    "MaxCardinality",
    "ExactCardinality",
    "Functional",
    "InverseFunctional",
    "Transitive",
    "Symmetric",
    "Asymmetric",
    "Reflexive",
    "Irreflexive",
];
