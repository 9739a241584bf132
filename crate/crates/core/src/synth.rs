//! Seeded synthetic knowledge graphs for tests and benchmarks.
//!
//! The generated graph is consistent by construction: every individual has
//! one leaf class, disjointness only separates top-level branches, and each
//! assertion respects the domain and range of its property.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Axiom, Characteristic, ClassExpression, Iri, Ontology};

#[derive(Clone, Debug)]
pub struct SynthSpec {
    pub classes: usize,
    /// Children per class in the class tree.
    pub branching: usize,
    pub properties: usize,
    pub individuals: usize,
    pub triples: usize,
    /// `A ⊑ ∃p.B` axioms.
    pub existentials: usize,
    pub seed: u64,
    pub namespace: String,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            classes: 40,
            branching: 3,
            properties: 12,
            individuals: 200,
            triples: 1_000,
            existentials: 10,
            seed: 1,
            namespace: "http://example.org/kg/".into(),
        }
    }
}

impl SynthSpec {
    /// About 100k assertions over a schema of about 1k axioms.
    pub fn large() -> Self {
        SynthSpec {
            classes: 500,
            branching: 4,
            properties: 150,
            individuals: 20_000,
            triples: 100_000,
            existentials: 150,
            seed: 7,
            ..SynthSpec::default()
        }
    }
}

struct Tree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl Tree {
    fn new(n: usize, branching: usize) -> Self {
        let branching = branching.max(1);
        let parent: Vec<Option<usize>> = (0..n).map(|i| if i == 0 { None } else { Some((i - 1) / branching) }).collect();
        let mut children = vec![Vec::new(); n];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(i);
            }
        }
        Tree { parent, children }
    }

    fn leaves(&self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&i| self.children[i].is_empty()).collect()
    }

    fn is_ancestor(&self, a: usize, mut c: usize) -> bool {
        loop {
            if a == c {
                return true;
            }
            match self.parent[c] {
                Some(p) => c = p,
                None => return false,
            }
        }
    }
}

fn iri(ns: &str, local: String) -> Iri {
    Iri::new(format!("{ns}{local}")).expect("generated IRI")
}

/// Builds a schema and ABox from `spec`.
pub fn synthetic_kg(spec: &SynthSpec) -> Ontology {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let ns = spec.namespace.as_str();
    let n = spec.classes.max(2);
    let tree = Tree::new(n, spec.branching);
    let class = |i: usize| iri(ns, format!("C{i}"));
    let named = |i: usize| ClassExpression::Named(class(i));
    let prop = |i: usize| iri(ns, format!("p{i}"));
    let ind = |i: usize| iri(ns, format!("e{i}"));

    let mut axioms = Vec::new();
    for i in 1..n {
        axioms.push(Axiom::subclass(named(i), named(tree.parent[i].unwrap())));
    }
    let top = &tree.children[0];
    for (a, b) in top.iter().zip(top.iter().skip(1)) {
        axioms.push(Axiom::DisjointClasses(vec![named(*a), named(*b)]));
    }

    let leaves = tree.leaves();
    let individuals = spec.individuals.max(2);
    let types: Vec<usize> = (0..individuals).map(|_| *leaves.choose(&mut rng).unwrap()).collect();
    for (i, t) in types.iter().enumerate() {
        axioms.push(Axiom::class_assertion(ind(i), named(*t)));
    }
    let members = |c: usize| -> Vec<usize> { (0..individuals).filter(|&i| tree.is_ancestor(c, types[i])).collect() };

    // Domains and ranges are classes with at least two members.
    let candidates: Vec<usize> = (0..n).filter(|&c| members(c).len() >= 2).collect();
    let properties = spec.properties.max(1);
    let mut signature: Vec<(usize, usize)> = (0..properties)
        .map(|_| (*candidates.choose(&mut rng).unwrap(), *candidates.choose(&mut rng).unwrap()))
        .collect();
    let mut functional = BTreeSet::new();
    for p in 1..properties {
        match p % 10 {
            // Sub-properties share the parent's domain and range.
            1 => {
                let mut q = rng.random_range(0..p);
                while q % 10 == 5 {
                    q = rng.random_range(0..p);
                }
                signature[p] = signature[q];
                axioms.push(Axiom::SubObjectPropertyOf {
                    sub: prop(p),
                    sup: prop(q),
                });
            }
            3 => {
                let inv = iri(ns, format!("p{p}_inv"));
                axioms.push(Axiom::InverseObjectProperties(prop(p), inv));
            }
            5 => {
                functional.insert(p);
                axioms.push(Axiom::Characteristic {
                    property: prop(p),
                    characteristic: Characteristic::Functional,
                });
            }
            7 => axioms.push(Axiom::Characteristic {
                property: prop(p),
                characteristic: Characteristic::Irreflexive,
            }),
            _ => {}
        }
    }
    for (p, &(d, r)) in signature.iter().enumerate() {
        axioms.push(Axiom::ObjectPropertyDomain {
            property: prop(p),
            domain: named(d),
        });
        axioms.push(Axiom::ObjectPropertyRange {
            property: prop(p),
            range: named(r),
        });
    }
    for _ in 0..spec.existentials {
        let p = rng.random_range(0..properties);
        let (d, r) = signature[p];
        let below: Vec<usize> = (0..n).filter(|&c| tree.is_ancestor(d, c)).collect();
        let a = *below.choose(&mut rng).unwrap();
        axioms.push(Axiom::subclass(named(a), ClassExpression::some(prop(p), named(r))));
    }

    let pools: Vec<(Vec<usize>, Vec<usize>)> = signature.iter().map(|&(d, r)| (members(d), members(r))).collect();
    let mut used_subjects: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut seen: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    let mut made = 0;
    let mut attempts = 0;
    while made < spec.triples && attempts < spec.triples * 20 {
        attempts += 1;
        let p = rng.random_range(0..properties);
        let (subjects, objects) = &pools[p];
        let s = *subjects.choose(&mut rng).unwrap();
        let o = *objects.choose(&mut rng).unwrap();
        if s == o {
            continue;
        }
        if seen.contains(&(s, p, o)) || (functional.contains(&p) && !used_subjects.insert((p, s))) {
            continue;
        }
        seen.insert((s, p, o));
        axioms.push(Axiom::relation(ind(s), prop(p), ind(o)));
        made += 1;
    }
    let mut ontology = Ontology::from_axioms(axioms);
    ontology.iri = Some(iri(ns, "ontology".into()));
    ontology
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reasoner::{check_consistency, detect_unsatisfiable, ConsistencyOptions};

    #[test]
    fn generated_kg_is_clean() {
        let kg = synthetic_kg(&SynthSpec::default());
        assert!(detect_unsatisfiable(&kg.schema()).is_empty());
        let abox: Vec<Axiom> = kg.abox().cloned().collect();
        assert!(check_consistency(&kg.schema(), &abox, &ConsistencyOptions::default()).is_empty());
        assert_eq!(kg.abox().filter(|a| a.as_relation().is_some()).count(), 1_000);
    }

    #[test]
    fn seeded() {
        let spec = SynthSpec::default();
        assert_eq!(synthetic_kg(&spec), synthetic_kg(&spec));
    }
}
