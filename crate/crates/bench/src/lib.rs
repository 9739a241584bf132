//! Fixtures shared by the benchmarks.

use std::path::Path;

use kgdistill::model::{Axiom, Ontology, RelationTriple};
use kgdistill::pipeline::{self, PipelineConfig};
use kgdistill::synth::{synthetic_kg, SynthSpec};

/// Synthetic graph with `triples` assertions and the default schema shape.
pub fn kg(triples: usize) -> Ontology {
    synthetic_kg(&SynthSpec {
        triples,
        individuals: (triples / 5).max(200),
        ..SynthSpec::default()
    })
}

pub fn relations(kg: &Ontology) -> Vec<RelationTriple> {
    kg.abox().filter_map(Axiom::as_relation).collect()
}

/// Writes `kg` under `dir` and returns a config reading it.
pub fn config(dir: &Path, kg: &Ontology) -> PipelineConfig {
    let src = dir.join("kg.nt");
    pipeline::write_ontology(&src, kg).expect("fixture written");
    PipelineConfig {
        name: "BENCH".into(),
        sources: vec![src],
        output: dir.join("out"),
        ..PipelineConfig::default()
    }
}
