use std::fs;
use std::path::Path;

use kgdistill::model::{Axiom, ClassExpression, Iri, Ontology};
use kgdistill::pipeline::{
    self, build_variants, run, DecisionFile, PipelineConfig, PipelineError, Removal, Variant,
};
use kgdistill::reasoner::{check_consistency, ConsistencyOptions};
use kgdistill::synth::{synthetic_kg, SynthSpec};

fn iri(s: &str) -> Iri {
    Iri::new(format!("http://t/{s}")).unwrap()
}
fn c(s: &str) -> ClassExpression {
    ClassExpression::Named(iri(s))
}

fn config_for(dir: &Path, kg: &Ontology) -> PipelineConfig {
    let src = dir.join("kg.nt");
    pipeline::write_ontology(&src, kg).unwrap();
    PipelineConfig {
        name: "T".into(),
        sources: vec![src],
        output: dir.join("out"),
        ..PipelineConfig::default()
    }
}

/// Person/Organization world with one domain axiom and a seeded violation:
/// `worksFor` has domain Person, and `acme` is an Organization.
fn clash_kg(with_violation: bool) -> Ontology {
    let mut axioms = vec![
        Axiom::DisjointClasses(vec![c("Person"), c("Organization")]),
        Axiom::ObjectPropertyDomain {
            property: iri("worksFor"),
            domain: c("Person"),
        },
        Axiom::ObjectPropertyRange {
            property: iri("worksFor"),
            range: c("Organization"),
        },
        Axiom::subclass(c("Employee"), c("Person")),
        Axiom::class_assertion(iri("ann"), c("Employee")),
        Axiom::class_assertion(iri("acme"), c("Organization")),
        Axiom::class_assertion(iri("bob"), c("Person")),
        Axiom::relation(iri("ann"), iri("worksFor"), iri("acme")),
        Axiom::relation(iri("bob"), iri("worksFor"), iri("acme")),
        Axiom::relation(iri("ann"), iri("knows"), iri("bob")),
        Axiom::relation(iri("bob"), iri("knows"), iri("ann")),
        Axiom::relation(iri("carol"), iri("worksFor"), iri("acme")),
    ];
    if with_violation {
        axioms.push(Axiom::relation(iri("acme"), iri("worksFor"), iri("acme2")));
        axioms.push(Axiom::relation(iri("ann"), iri("knows"), iri("acme2")));
    }
    Ontology::from_axioms(axioms)
}

#[test]
fn clean_synthetic_kg_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let config = config_for(dir.path(), &synthetic_kg(&SynthSpec::default()));
    let bundle = run(&config).unwrap();
    assert!(bundle.curation.is_clean());
    assert!(bundle.curation.removed.is_empty());
    assert_eq!(bundle.variants.len(), 2);
    for v in &bundle.variants {
        for f in kgdistill::modularizer::COMPONENT_FILES {
            assert!(v.dir.join(f).exists(), "{f}");
        }
        assert!(v.dir.join("coo/manifest.json").exists());
        assert!(v.dir.join("stats.md").exists());
    }
    assert!(bundle.dir.join(pipeline::RUN_MANIFEST_FILE).exists());
    assert!(bundle.dir.ends_with("T-1"));
}

#[test]
fn seeded_violation_halts_then_decision_completes() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = config_for(dir.path(), &clash_kg(true));
    let err = run(&config).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let PipelineError::CurationNeeded(report) = err else {
        panic!("expected a curation halt")
    };
    let bad = Removal::from_axiom(&Axiom::relation(iri("acme"), iri("worksFor"), iri("acme2"))).unwrap();
    assert!(report
        .clashes
        .iter()
        .any(|c| c.suggested_removals.contains(&bad)));
    assert!(report.clashes.iter().all(|c| c
        .suggested_removals
        .iter()
        .all(|r| r.to_axiom().box_kind() == kgdistill::BoxKind::ABox)));
    assert!(config.output.join(pipeline::CURATION_REPORT_FILE).exists());

    let decisions = DecisionFile {
        removals: vec![bad],
        ..DecisionFile::default()
    };
    let path = dir.path().join("decisions.json");
    fs::write(&path, serde_json::to_string(&decisions).unwrap()).unwrap();
    config.decisions = vec![path];
    let bundle = run(&config).unwrap();
    assert_eq!(bundle.curation.removed.len(), 1);
    for v in &bundle.variants {
        let schema = v.dataset.schema();
        let abox: Vec<Axiom> = v.dataset.abox().cloned().collect();
        assert!(check_consistency(&schema, &abox, &ConsistencyOptions::default()).is_empty());
    }
}

#[test]
fn removal_not_in_abox_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = config_for(dir.path(), &clash_kg(false));
    let path = dir.path().join("decisions.json");
    fs::write(
        &path,
        r#"{"removals": [{"s": "http://t/zed", "p": "http://t/knows", "o": "http://t/ann"}]}"#,
    )
    .unwrap();
    config.decisions = vec![path];
    let err = run(&config).unwrap_err();
    assert!(matches!(err, PipelineError::Decision(_)));
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn accept_all_suggestions_curates_unattended() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = config_for(dir.path(), &clash_kg(true));
    let path = dir.path().join("decisions.json");
    fs::write(&path, r#"{"accept_all_suggestions": true}"#).unwrap();
    config.decisions = vec![path];
    let bundle = run(&config).unwrap();
    assert!(!bundle.curation.removed.is_empty());
    assert!(bundle.curation.is_clean());
}

#[test]
fn variants_contract() {
    let dir = tempfile::tempdir().unwrap();
    let config = config_for(dir.path(), &clash_kg(false));
    let (base, mat) = build_variants(&config).unwrap();
    assert_eq!(base.variant, Variant::Base);
    for ax in base.dataset.axioms() {
        assert!(mat.dataset.contains(ax), "{ax:?}");
    }
    // ann is typed Employee only; Person follows from the taxonomy.
    let derived = Axiom::class_assertion(iri("ann"), c("Person"));
    assert!(mat.dataset.contains(&derived));
    assert!(!base.dataset.contains(&derived));
    let by_domain = Axiom::class_assertion(iri("carol"), c("Person"));
    assert!(mat.dataset.contains(&by_domain));
    assert!(!base.dataset.contains(&by_domain));
    for name in ["train", "valid", "test"] {
        for ext in ["tsv", "txt"] {
            let f = format!("coo/{name}.{ext}");
            assert_eq!(fs::read(base.dir.join(&f)).unwrap(), fs::read(mat.dir.join(&f)).unwrap());
        }
    }
    for v in [&base, &mat] {
        assert!(v.dataset.axioms().all(|a| !a.is_tautology()));
    }
}

#[test]
fn deterministic_and_resumable() {
    let kg = synthetic_kg(&SynthSpec {
        triples: 600,
        ..SynthSpec::default()
    });
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = run(&config_for(a.path(), &kg)).unwrap();
    let second = run(&config_for(b.path(), &kg)).unwrap();
    assert_eq!(first.manifest.outputs, second.manifest.outputs);
    assert_eq!(first.manifest.checkpoints, second.manifest.checkpoints);

    let config = config_for(a.path(), &kg);
    let checkpoints = config.checkpoint_dir();
    for late in ["split.json", "realized.nt", "curated.nt"] {
        fs::remove_file(checkpoints.join(late)).unwrap();
        let again = run(&config).unwrap();
        assert_eq!(again.manifest.outputs, first.manifest.outputs, "{late}");
        assert_eq!(
            fs::read(checkpoints.join(late)).unwrap(),
            fs::read(b.path().join("out/checkpoints").join(late)).unwrap()
        );
    }
}
