//! End-to-end orchestration with checkpoints, curation and variants.
//!
//! Every phase writes its result under `<output>/checkpoints` together with
//! a key derived from its inputs. A re-run skips phases whose key still
//! matches and whose files are present.

mod config;
mod curation;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use config::{ImportPolicy, PipelineConfig, ReasonerChoice, Variant};
pub use curation::{
    apply_removals, apply_renames, curate, suggestions, ClashEntry, CurationReport, DecisionFile,
    Removal, Rename,
};

use crate::extractor::{self, ExtractError, LocalSource, SparqlOptions, SparqlSource};
use crate::mlpost::{
    build_id_maps, compute_stats, export_coo, filter_inversion_leakage, split, stats_markdown,
    CooManifest, MlError, Split, StatsReport,
};
use crate::model::{Axiom, EntityRef, Iri, Ontology, Provenance};
use crate::modularizer::{decompose, extract_module, initial_signature, ComponentCounts};
use crate::rdf::{
    self, merge_import_closure, CatalogResolver, ChainResolver, DecodeOptions, HttpResolver,
    ParseReport, RdfError, RdfFormat,
};
use crate::reasoner::{
    detect_unsatisfiable, external, materialize_schema, realize, remove_unsatisfiable,
    with_inferred, ConsistencyOptions, Justification, ReasonerError, UnsatReport,
};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("decision file: {0}")]
    Decision(String),
    #[error("{} unresolved clashes; see curation_report.json", .0.unresolved)]
    CurationNeeded(Box<CurationReport>),
    #[error(transparent)]
    Rdf(#[from] RdfError),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Ml(#[from] MlError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl PipelineError {
    /// 2 when curation is needed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::CurationNeeded(_) => 2,
            _ => 1,
        }
    }
}

pub const CURATION_REPORT_FILE: &str = "curation_report.json";
pub const RUN_MANIFEST_FILE: &str = "run_manifest.json";

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn key_of(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0]);
    }
    hex::encode(h.finalize())
}

fn file_key(path: &Path) -> Result<String, PipelineError> {
    Ok(sha256_hex(&fs::read(path)?))
}

pub fn write_ontology(path: &Path, ontology: &Ontology) -> Result<(), PipelineError> {
    let format = RdfFormat::from_path(path).unwrap_or(RdfFormat::NTriples);
    fs::write(path, rdf::serialize(ontology, format)?)?;
    Ok(())
}

pub fn read_ontology(path: &Path) -> Result<Ontology, PipelineError> {
    Ok(rdf::read_ontology(path, &DecodeOptions::default())?.0)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), PipelineError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, PipelineError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Removes `X ⊑ X`, `X ⊑ ⊤`, `owl:Thing` typings and similar empty axioms.
pub fn strip_tautologies(ontology: &mut Ontology) {
    ontology.retain(|a| !a.is_tautology());
}

/// Reads every source and merges it with its import closure.
pub fn load_sources(config: &PipelineConfig) -> Result<(Ontology, ParseReport), PipelineError> {
    let options = DecodeOptions {
        infer_declarations: config.infer_declarations,
    };
    let mut resolver = ChainResolver::new();
    if let Some(catalog) = &config.catalog {
        resolver = resolver.with(CatalogResolver::from_file(catalog)?);
    }
    let resolver = resolver.with(HttpResolver::default());
    let mut merged: Option<Ontology> = None;
    let mut report = ParseReport::default();
    for path in &config.sources {
        let (root, part) = rdf::read_ontology(path, &options)?;
        report.merge(&part);
        let (closure, imported, skipped) =
            merge_import_closure(&root, &resolver, config.missing_imports.into(), &options)?;
        report.merge(&imported);
        for iri in skipped {
            log::warn!("{}: import <{iri}> skipped", path.display());
        }
        match &mut merged {
            Some(m) => m.merge(&closure),
            None => merged = Some(closure),
        }
    }
    Ok((merged.unwrap_or_default(), report))
}

/// Entities removed while cleaning the schema.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnsatSummary {
    pub classes: BTreeSet<Iri>,
    pub properties: BTreeSet<Iri>,
    pub rounds: usize,
    pub justifications: Vec<(EntityRef, Vec<Justification>)>,
}

impl UnsatSummary {
    pub fn report(&self) -> UnsatReport {
        UnsatReport {
            unsatisfiable_classes: self.classes.clone(),
            unsatisfiable_properties: self.properties.clone(),
            justifications: self.justifications.iter().cloned().collect(),
        }
    }
}

/// Schema part of `ontology` with unsatisfiable entities removed, repeated
/// until detection comes back empty.
pub fn clean_schema(ontology: &Ontology) -> (Ontology, UnsatSummary) {
    let mut schema = ontology.schema();
    let mut summary = UnsatSummary::default();
    loop {
        let report = detect_unsatisfiable(&schema);
        if report.is_empty() {
            break;
        }
        summary.rounds += 1;
        log::info!(
            "round {}: {} unsatisfiable classes, {} unsatisfiable properties",
            summary.rounds,
            report.unsatisfiable_classes.len(),
            report.unsatisfiable_properties.len()
        );
        summary.classes.extend(report.unsatisfiable_classes.iter().cloned());
        summary.properties.extend(report.unsatisfiable_properties.iter().cloned());
        summary
            .justifications
            .extend(report.justifications.iter().map(|(e, j)| (e.clone(), j.clone())));
        schema = remove_unsatisfiable(&schema, &report);
    }
    (schema, summary)
}

/// Inferred schema axioms from the chosen reasoner. The external one reads
/// `inferred.nt` from its exchange directory after `schema.ttl` is written.
pub fn infer_schema(schema: &Ontology, choice: &ReasonerChoice) -> Result<Vec<Axiom>, PipelineError> {
    match choice {
        ReasonerChoice::Builtin => Ok(materialize_schema(schema).1),
        ReasonerChoice::External(dir) => {
            fs::create_dir_all(dir)?;
            let written = external::write_exchange(schema, dir)?;
            log::info!("schema written to {}", written.display());
            let mut inferred: Vec<Axiom> = external::read_inferred(dir)?
                .into_iter()
                .filter(|a| a.box_kind() != crate::BoxKind::ABox && !a.is_tautology())
                .map(Axiom::canonical)
                .filter(|a| !schema.contains(a))
                .collect();
            inferred.sort();
            inferred.dedup();
            Ok(inferred)
        }
    }
}

/// Asserted and inferred inverse property pairs of a schema.
pub fn inverse_pairs<'a>(axioms: impl IntoIterator<Item = &'a Axiom>) -> BTreeSet<(Iri, Iri)> {
    axioms
        .into_iter()
        .filter_map(|a| match a {
            Axiom::InverseObjectProperties(p, q) => Some((p.clone(), q.clone())),
            _ => None,
        })
        .collect()
}

/// Module of `schema` for `abox`, joined with `abox`, without tautologies.
pub fn assemble_dataset(schema: &Ontology, abox: &Ontology) -> (Ontology, usize) {
    let seed = initial_signature(abox.abox());
    let module = extract_module(schema, &seed);
    let mut dataset = module.axioms;
    dataset.merge(abox);
    strip_tautologies(&mut dataset);
    (dataset, module.iterations)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariantSummary {
    pub variant: Variant,
    pub axioms: usize,
    pub inferred_axioms: usize,
    pub module_iterations: usize,
    pub components: ComponentCounts,
}

#[derive(Clone, Debug)]
pub struct VariantBundle {
    pub variant: Variant,
    pub dir: PathBuf,
    pub dataset: Ontology,
    pub summary: VariantSummary,
    pub stats: StatsReport,
    pub coo: CooManifest,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub train: usize,
    pub valid: usize,
    pub test: usize,
    pub seed: u64,
    pub moved_for_coverage: usize,
    pub moved_for_leakage: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub dataset: String,
    pub config: PipelineConfig,
    pub seed: u64,
    pub unsatisfiable: UnsatSummaryCounts,
    pub removed_triples: usize,
    pub split: SplitSummary,
    pub variants: Vec<VariantSummary>,
    /// SHA-256 of every checkpoint file.
    pub checkpoints: BTreeMap<String, String>,
    /// SHA-256 of every bundle file, by path relative to the bundle.
    pub outputs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnsatSummaryCounts {
    pub classes: usize,
    pub properties: usize,
    pub rounds: usize,
}

#[derive(Clone, Debug)]
pub struct DatasetBundle {
    pub dir: PathBuf,
    pub variants: Vec<VariantBundle>,
    pub split: Split,
    pub curation: CurationReport,
    pub manifest: RunManifest,
}

impl DatasetBundle {
    pub fn variant(&self, v: Variant) -> Option<&VariantBundle> {
        self.variants.iter().find(|b| b.variant == v)
    }
}

struct Checkpoints {
    dir: PathBuf,
    checksums: BTreeMap<String, String>,
}

impl Checkpoints {
    /// Runs `compute` unless `name.key` holds `key` and all `files` exist,
    /// then loads the result from the files in either case.
    fn stage<T>(
        &mut self,
        name: &str,
        key: &str,
        files: &[&str],
        compute: impl FnOnce(&Path) -> Result<(), PipelineError>,
        load: impl FnOnce(&Path) -> Result<T, PipelineError>,
    ) -> Result<T, PipelineError> {
        let key_path = self.dir.join(format!("{name}.key"));
        let current = fs::read_to_string(&key_path).ok().is_some_and(|k| k == key)
            && files.iter().all(|f| self.dir.join(f).exists());
        if current {
            log::info!("{name}: up to date");
        } else {
            log::info!("{name}: running");
            let _ = fs::remove_file(&key_path);
            compute(&self.dir)?;
            fs::write(&key_path, key)?;
        }
        for f in files {
            self.checksums.insert(f.to_string(), file_key(&self.dir.join(f))?);
        }
        load(&self.dir)
    }
}

fn relation_ontology(abox: &Ontology) -> Vec<crate::RelationTriple> {
    abox.abox().filter_map(Axiom::as_relation).collect()
}

fn list_files(root: &Path, dir: &Path, out: &mut BTreeMap<String, String>) -> Result<(), PipelineError> {
    let mut entries: Vec<_> = fs::read_dir(dir)?.collect::<Result<_, _>>()?;
    entries.sort_by_key(|e| e.file_name());
    for entry in entries {
        let path = entry.path();
        if path.is_dir() {
            list_files(root, &path, out)?;
        } else {
            let rel = path.strip_prefix(root).unwrap_or(&path);
            let rel = rel.to_string_lossy().replace('\\', "/");
            if rel != RUN_MANIFEST_FILE {
                out.insert(rel, file_key(&path)?);
            }
        }
    }
    Ok(())
}

/// Runs every phase and writes the bundle to `<output>/<name>-<k>`.
///
/// Returns [`PipelineError::CurationNeeded`] after writing
/// `curation_report.json` to the output directory when clashes remain.
pub fn run(config: &PipelineConfig) -> Result<DatasetBundle, PipelineError> {
    config.validate()?;
    let variants = config.selected_variants();
    let materialize = variants.contains(&Variant::Materialize);
    fs::create_dir_all(config.checkpoint_dir())?;
    let mut cp = Checkpoints {
        dir: config.checkpoint_dir(),
        checksums: BTreeMap::new(),
    };
    let decisions = DecisionFile::combine(
        config
            .decisions
            .iter()
            .map(|p| DecisionFile::load(p))
            .collect::<Result<Vec<_>, _>>()?,
    );
    let version = env!("CARGO_PKG_VERSION");

    // merge
    let mut parts = vec![version.to_string(), config.infer_declarations.to_string()];
    for path in &config.sources {
        parts.push(path.display().to_string());
        parts.push(file_key(path)?);
    }
    if let Some(catalog) = &config.catalog {
        parts.push(file_key(catalog)?);
    }
    parts.push(format!("{:?}", config.missing_imports));
    parts.push(serde_json::to_string(&decisions.renames)?);
    let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
    let merge_key = key_of(&refs);
    let merged = cp.stage(
        "merge",
        &merge_key,
        &["merged.nt"],
        |dir| {
            let (mut merged, report) = load_sources(config)?;
            log::info!("{} axioms from {} triples", merged.len(), report.triples_total);
            apply_renames(&mut merged, &decisions.renames);
            write_ontology(&dir.join("merged.nt"), &merged)
        },
        |dir| read_ontology(&dir.join("merged.nt")),
    )?;
    let punning = merged.punning_conflicts();
    for (iri, kinds) in &punning {
        log::warn!("<{iri}> is used as {kinds:?}");
    }

    // detect and remove unsatisfiable entities
    let clean_key = key_of(&[&merge_key, "clean"]);
    let (schema, unsat) = cp.stage(
        "clean",
        &clean_key,
        &["schema_clean.ttl", "unsat.json"],
        |dir| {
            let (schema, summary) = clean_schema(&merged);
            write_ontology(&dir.join("schema_clean.ttl"), &schema)?;
            write_json(&dir.join("unsat.json"), &summary)
        },
        |dir| {
            Ok((
                read_ontology(&dir.join("schema_clean.ttl"))?,
                read_json::<UnsatSummary>(&dir.join("unsat.json"))?,
            ))
        },
    )?;
    let unsat_report = unsat.report();

    // materialize
    let mut reasoner_part = String::from(config.reasoner.clone());
    if let ReasonerChoice::External(dir) = &config.reasoner {
        let inferred = dir.join(external::INFERRED_FILE);
        if inferred.exists() {
            reasoner_part.push_str(&file_key(&inferred)?);
        }
    }
    let materialize_key = key_of(&[&clean_key, &reasoner_part]);
    let inferred: Vec<Axiom> = cp.stage(
        "materialize",
        &materialize_key,
        &["inferred.nt"],
        |dir| {
            let inferred = infer_schema(&schema, &config.reasoner)?;
            log::info!("{} inferred schema axioms", inferred.len());
            write_ontology(&dir.join("inferred.nt"), &Ontology::from_axioms(inferred))
        },
        |dir| Ok(read_ontology(&dir.join("inferred.nt"))?.axioms().cloned().collect()),
    )?;

    // extract
    let options = config.extract_options();
    let extract_key = key_of(&[
        &clean_key,
        &serde_json::to_string(&options)?,
        config.endpoint.as_deref().unwrap_or(""),
    ]);
    let extracted = cp.stage(
        "extract",
        &extract_key,
        &["extracted.nt"],
        |dir| {
            let subset = match &config.endpoint {
                Some(endpoint) => {
                    let mut source = SparqlSource::new(endpoint.clone(), SparqlOptions::default());
                    let subset = extractor::extract(&mut source, &options, &unsat_report)?;
                    write_json(&dir.join("fetch_manifest.json"), source.manifest())?;
                    subset
                }
                None => {
                    let mut source = LocalSource::new(&merged);
                    extractor::extract(&mut source, &options, &unsat_report)?
                }
            };
            write_ontology(&dir.join("extracted.nt"), &Ontology::from_axioms(subset.axioms()))
        },
        |dir| read_ontology(&dir.join("extracted.nt")),
    )?;

    // consistency check and curation
    let consistency = ConsistencyOptions {
        una: config.una,
        minimize: true,
    };
    let curate_key = key_of(&[
        &extract_key,
        &serde_json::to_string(&decisions.removals)?,
        &decisions.accept_all_suggestions.to_string(),
        &config.una.to_string(),
    ]);
    let report_path = config.output.join(CURATION_REPORT_FILE);
    let (curated, curation) = cp.stage(
        "curate",
        &curate_key,
        &["curated.nt", "curation.json"],
        |dir| {
            let (curated, mut report) = curate(&schema, &extracted, &decisions, &consistency)?;
            report.punning_conflicts = punning.clone();
            write_json(&report_path, &report)?;
            if !report.is_clean() {
                return Err(PipelineError::CurationNeeded(Box::new(report)));
            }
            write_ontology(&dir.join("curated.nt"), &curated)?;
            write_json(&dir.join("curation.json"), &report)
        },
        |dir| {
            Ok((
                read_ontology(&dir.join("curated.nt"))?,
                read_json::<CurationReport>(&dir.join("curation.json"))?,
            ))
        },
    )?;
    write_json(&report_path, &curation)?;

    let schema_inferred = with_inferred(&schema, &inferred);

    // realize
    let realize_key = key_of(&[&curate_key, &materialize_key]);
    let realized: Vec<Axiom> = if materialize {
        cp.stage(
            "realize",
            &realize_key,
            &["realized.nt"],
            |dir| {
                let assertions: Vec<Axiom> = curated.abox().cloned().collect();
                let realized = realize(&schema_inferred, &assertions)?;
                log::info!("{} realized class assertions", realized.len());
                write_ontology(&dir.join("realized.nt"), &Ontology::from_axioms(realized))
            },
            |dir| Ok(read_ontology(&dir.join("realized.nt"))?.axioms().cloned().collect()),
        )?
    } else {
        Vec::new()
    };

    // split
    let inverses = inverse_pairs(schema_inferred.axioms());
    let split_key = key_of(&[
        &curate_key,
        &materialize_key,
        &serde_json::to_string(&config.ratios)?,
        &config.seed.to_string(),
        &config.leakage_filter.to_string(),
    ]);
    let the_split: Split = cp.stage(
        "split",
        &split_key,
        &["split.json"],
        |dir| {
            let mut s = split(relation_ontology(&curated), config.ratios, config.seed)?;
            if config.leakage_filter {
                s = filter_inversion_leakage(&s, &inverses);
            }
            write_json(&dir.join("split.json"), &s)
        },
        |dir| read_json(&dir.join("split.json")),
    )?;

    // variants
    let mut datasets = Vec::new();
    for &variant in &variants {
        let (schema_v, abox_v) = match variant {
            Variant::Base => (schema.clone(), curated.clone()),
            Variant::Materialize => {
                let mut abox = curated.clone();
                for a in &realized {
                    abox.insert(a.clone(), Provenance::Inferred);
                }
                (schema_inferred.clone(), abox)
            }
        };
        let (dataset, iterations) = assemble_dataset(&schema_v, &abox_v);
        datasets.push((variant, dataset, iterations));
    }
    let maps = build_id_maps(datasets.iter().map(|(_, d, _)| d), config.id_base);

    let bundle_dir = config.bundle_dir();
    let mut bundles = Vec::new();
    for (variant, dataset, iterations) in datasets {
        let dir = bundle_dir.join(variant.name());
        if dir.exists() {
            fs::remove_dir_all(&dir)?;
        }
        fs::create_dir_all(&dir)?;
        let components = decompose(&dataset);
        components.write(&dir)?;
        let stats = compute_stats(&dataset);
        let label = format!("{}-{}", config.dataset_name(), variant.name());
        write_json(&dir.join("stats.json"), &stats)?;
        fs::write(dir.join("stats.md"), stats_markdown(&label, &stats))?;
        let coo = export_coo(&dir.join("coo"), &dataset, &the_split, &maps)?;
        let summary = VariantSummary {
            variant,
            axioms: dataset.len(),
            inferred_axioms: dataset.inferred().count(),
            module_iterations: iterations,
            components: components.counts(),
        };
        write_json(&dir.join("summary.json"), &summary)?;
        bundles.push(VariantBundle {
            variant,
            dir,
            dataset,
            summary,
            stats,
            coo: coo.manifest,
        });
    }

    let mut outputs = BTreeMap::new();
    list_files(&bundle_dir, &bundle_dir, &mut outputs)?;
    let manifest = RunManifest {
        tool: "kgdistill".into(),
        version: version.into(),
        dataset: config.dataset_name(),
        config: config.clone(),
        seed: config.seed,
        unsatisfiable: UnsatSummaryCounts {
            classes: unsat.classes.len(),
            properties: unsat.properties.len(),
            rounds: unsat.rounds,
        },
        removed_triples: curation.removed.len(),
        split: SplitSummary {
            train: the_split.train.len(),
            valid: the_split.valid.len(),
            test: the_split.test.len(),
            seed: the_split.seed,
            moved_for_coverage: the_split.moved_for_coverage,
            moved_for_leakage: the_split.moved_for_leakage,
        },
        variants: bundles.iter().map(|b| b.summary.clone()).collect(),
        checkpoints: cp.checksums,
        outputs,
    };
    write_json(&bundle_dir.join(RUN_MANIFEST_FILE), &manifest)?;
    Ok(DatasetBundle {
        dir: bundle_dir,
        variants: bundles,
        split: the_split,
        curation,
        manifest,
    })
}

/// Runs with both variants selected and returns `(BASE, MATERIALIZE)`.
pub fn build_variants(config: &PipelineConfig) -> Result<(VariantBundle, VariantBundle), PipelineError> {
    let config = PipelineConfig {
        variants: vec![Variant::Base, Variant::Materialize],
        ..config.clone()
    };
    let bundle = run(&config)?;
    let mut it = bundle.variants.into_iter();
    match (it.next(), it.next()) {
        (Some(base), Some(mat)) => Ok((base, mat)),
        _ => unreachable!("both variants are selected"),
    }
}
