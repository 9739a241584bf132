mod common;

use common::{corpus_coverage, corpus_files, load_corpus_file, roundtrip_mismatch, REQUIRED_COVERAGE};

#[test]
fn corpus_is_large_enough() {
    assert!(corpus_files().len() >= 30);
}

#[test]
fn every_document_roundtrips() {
    for path in corpus_files() {
        let ontology = load_corpus_file(&path);
        assert!(ontology.axioms().next().is_some(), "{} is empty", path.display());
        if let Some(diff) = roundtrip_mismatch(&ontology) {
            panic!("{}: {diff}", path.display());
        }
    }
}

#[test]
fn corpus_covers_every_construct() {
    let all: Vec<_> = corpus_files().iter().map(|p| load_corpus_file(p)).collect();
    let seen = corpus_coverage(&all);
    for name in REQUIRED_COVERAGE {
        assert!(seen.contains(*name), "{name} not covered");
    }
}

#[test]
fn blank_node_lists_decode() {
    use kgdistill::model::{Axiom, ClassExpression, Iri};
    let xml = load_corpus_file(&corpus_files().into_iter().find(|p| p.ends_with("32_rdfxml_lists.rdf")).unwrap());
    let nt = load_corpus_file(&corpus_files().into_iter().find(|p| p.ends_with("16_chain.ttl")).unwrap());
    let i = |s: &str| Iri::new(format!("http://c.org/{s}")).unwrap();
    let chain = Axiom::SubPropertyChainOf {
        chain: vec![i("hasParent"), i("hasBrother")],
        sup: i("hasUncle"),
    };
    assert!(xml.contains(&chain));
    assert!(nt.contains(&chain));
    let union = Axiom::EquivalentClasses(vec![
        ClassExpression::Named(i("Parent")),
        ClassExpression::UnionOf(vec![ClassExpression::Named(i("Mother")), ClassExpression::Named(i("Father"))]),
    ]);
    assert!(xml.contains(&union));
}
