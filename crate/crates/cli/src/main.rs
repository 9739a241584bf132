//! `kgdistill` command line.
//!
//! Each phase has its own subcommand that reads and writes plain RDF files,
//! and `run` chains them with checkpoints. Exit status is 0 on success, 2
//! when clashes need a curation decision and 1 on any other error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kgdistill::extractor::{self, ExtractOptions, LocalSource, SparqlOptions, SparqlSource};
use kgdistill::mlpost::{build_id_maps, compute_stats, export_coo, filter_inversion_leakage, split, stats_markdown};
use kgdistill::model::{Axiom, Ontology};
use kgdistill::modularizer::decompose;
use kgdistill::pipeline::{
    self, assemble_dataset, clean_schema, infer_schema, inverse_pairs, suggestions, ImportPolicy,
    PipelineConfig, PipelineError, ReasonerChoice, UnsatSummary, Variant,
};
use kgdistill::reasoner::{check_consistency, realize, ConsistencyOptions, UnsatReport};

const CURATION_NEEDED: u8 = 2;

#[derive(Parser)]
#[command(name = "kgdistill", version, about = "Schema-complete ML datasets from OWL knowledge graphs")]
struct Cli {
    /// Only log warnings and errors.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Merge sources and their import closures into one ontology.
    Merge(MergeArgs),
    /// Remove unsatisfiable classes and properties from the schema.
    CheckSchema(CheckSchemaArgs),
    /// Write the inferred schema axioms.
    Materialize(MaterializeArgs),
    /// Select the assertions whose individuals reach a minimum degree.
    Extract(ExtractArgs),
    /// Report clashes between a schema and assertions.
    CheckConsistency(ConsistencyArgs),
    /// Derive class assertions from a schema and assertions.
    Realize(RealizeArgs),
    /// Extract the schema module for assertions and write the components.
    Modularize(ModularizeArgs),
    /// Split, compute statistics and export index tables.
    Postprocess(PostprocessArgs),
    /// Run the whole pipeline.
    Run(RunArgs),
    /// Print dataset statistics.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MissingImports {
    Fail,
    Warn,
}

impl From<MissingImports> for ImportPolicy {
    fn from(m: MissingImports) -> Self {
        match m {
            MissingImports::Fail => ImportPolicy::Fail,
            MissingImports::Warn => ImportPolicy::Warn,
        }
    }
}

#[derive(Args)]
struct MergeArgs {
    #[arg(required = true)]
    sources: Vec<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "fail")]
    missing_imports: MissingImports,
    /// Declare rdf:type subjects as individuals and IRI-linking predicates
    /// as object properties.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value = "true")]
    infer_declarations: bool,
}

#[derive(Args)]
struct CheckSchemaArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Where to write the removed entities and their justifications.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct MaterializeArgs {
    schema: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// `builtin` or `external:<dir>`.
    #[arg(long, default_value = "builtin")]
    reasoner: ReasonerChoice,
}

#[derive(Args)]
struct ExtractArgs {
    /// SPARQL endpoint URL or RDF file.
    #[arg(long)]
    source: String,
    #[arg(long = "min-degree", short = 'k', default_value_t = 1)]
    k: u64,
    #[arg(long)]
    fixpoint: bool,
    #[arg(long)]
    degree_includes_types: bool,
    /// Output of `check-schema --report`; assertions about removed entities are dropped.
    #[arg(long)]
    unsat: Option<PathBuf>,
    /// Page log for SPARQL sources.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ConsistencyArgs {
    #[arg(long)]
    schema: PathBuf,
    abox: PathBuf,
    /// Treat distinct IRIs as possibly the same individual.
    #[arg(long)]
    no_una: bool,
    /// Clash report with suggested removals.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct RealizeArgs {
    #[arg(long)]
    schema: PathBuf,
    abox: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ModularizeArgs {
    #[arg(long)]
    schema: PathBuf,
    abox: PathBuf,
    /// Directory for the component files.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct PostprocessArgs {
    /// Dataset ontology, for example `modularize` output merged into one file.
    dataset: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_parser = parse_ratios, default_value = "0.8,0.1,0.1")]
    ratios: [f64; 3],
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    no_leakage_filter: bool,
    /// Number ids from 1.
    #[arg(long)]
    one_based: bool,
    #[arg(long, default_value = "KG")]
    name: String,
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    name: Option<String>,
    #[arg(long = "source")]
    sources: Vec<PathBuf>,
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, value_enum)]
    missing_imports: Option<MissingImports>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    infer_declarations: Option<bool>,
    #[arg(long = "min-degree", short = 'k')]
    k: Option<u64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    fixpoint: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    degree_includes_types: Option<bool>,
    /// Repeatable: `base`, `materialize`.
    #[arg(long = "variant", value_parser = parse_variant)]
    variants: Vec<Variant>,
    #[arg(long, value_parser = parse_ratios)]
    ratios: Option<[f64; 3]>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    leakage_filter: Option<bool>,
    /// Repeatable decision files.
    #[arg(long = "decisions")]
    decisions: Vec<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    reasoner: Option<ReasonerChoice>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true", conflicts_with = "no_una")]
    una: Option<bool>,
    #[arg(long)]
    no_una: bool,
    #[arg(long)]
    one_based: bool,
    /// Print the effective configuration and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Args)]
struct StatsArgs {
    dataset: PathBuf,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value = "KG")]
    name: String,
}

fn parse_ratios(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p}: {e}")))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| "expected three comma-separated ratios".to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    match s.to_ascii_lowercase().as_str() {
        "base" => Ok(Variant::Base),
        "materialize" => Ok(Variant::Materialize),
        _ => Err(format!("unknown variant `{s}`")),
    }
}

fn read(path: &Path) -> Result<Ontology> {
    pipeline::read_ontology(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, ontology: &Ontology) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    pipeline::write_ontology(path, ontology).with_context(|| format!("writing {}", path.display()))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn merge(args: MergeArgs) -> Result<ExitCode> {
    let config = PipelineConfig {
        sources: args.sources,
        catalog: args.catalog,
        missing_imports: args.missing_imports.into(),
        infer_declarations: args.infer_declarations,
        ..PipelineConfig::default()
    };
    let (merged, report) = pipeline::load_sources(&config)?;
    log::info!(
        "{} axioms from {} triples ({} skipped)",
        merged.len(),
        report.triples_total,
        report.triples_skipped
    );
    for (iri, kinds) in merged.punning_conflicts() {
        log::warn!("<{iri}> is used as {kinds:?}");
    }
    write(&args.output, &merged)?;
    Ok(ExitCode::SUCCESS)
}

fn check_schema(args: CheckSchemaArgs) -> Result<ExitCode> {
    let (schema, summary) = clean_schema(&read(&args.input)?);
    println!(
        "{} unsatisfiable classes, {} unsatisfiable properties",
        summary.classes.len(),
        summary.properties.len()
    );
    for c in &summary.classes {
        println!("  class {c}");
    }
    for p in &summary.properties {
        println!("  property {p}");
    }
    write(&args.output, &schema)?;
    if let Some(report) = args.report {
        write_json(&report, &summary)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn materialize(args: MaterializeArgs) -> Result<ExitCode> {
    let schema = read(&args.schema)?.schema();
    let inferred = infer_schema(&schema, &args.reasoner)?;
    log::info!("{} inferred schema axioms", inferred.len());
    write(&args.output, &Ontology::from_axioms(inferred))?;
    Ok(ExitCode::SUCCESS)
}

fn extract(args: ExtractArgs) -> Result<ExitCode> {
    let options = ExtractOptions {
        k: args.k,
        fixpoint: args.fixpoint,
        degree_includes_types: args.degree_includes_types,
    };
    if options.k < 1 {
        bail!("--min-degree must be at least 1");
    }
    let unsat = match &args.unsat {
        Some(path) => serde_json::from_str::<UnsatSummary>(&fs::read_to_string(path)?)?.report(),
        None => UnsatReport::default(),
    };
    let subset = if args.source.starts_with("http://") || args.source.starts_with("https://") {
        let mut source = SparqlSource::new(args.source.clone(), SparqlOptions::default());
        let subset = extractor::extract(&mut source, &options, &unsat)?;
        if let Some(path) = &args.manifest {
            write_json(path, source.manifest())?;
        }
        subset
    } else {
        let kg = read(Path::new(&args.source))?;
        extractor::extract(&mut LocalSource::new(&kg), &options, &unsat)?
    };
    log::info!(
        "{} property assertions, {} class assertions",
        subset.property_assertions.len(),
        subset.class_assertions.len()
    );
    write(&args.output, &Ontology::from_axioms(subset.axioms()))?;
    Ok(ExitCode::SUCCESS)
}

fn abox_axioms(path: &Path) -> Result<Vec<Axiom>> {
    Ok(read(path)?.abox().cloned().collect())
}

fn check_consistency_cmd(args: ConsistencyArgs) -> Result<ExitCode> {
    let schema = read(&args.schema)?.schema();
    let abox = abox_axioms(&args.abox)?;
    let options = ConsistencyOptions {
        una: !args.no_una,
        minimize: true,
    };
    let clashes = check_consistency(&schema, &abox, &options);
    let entries = suggestions(&clashes);
    for e in &entries {
        println!("{:?} on {:?}", e.clash.clash.kind, e.clash.clash.individuals);
        for r in &e.suggested_removals {
            println!("  remove <{}> <{}> <{}>", r.s, r.p, r.o);
        }
    }
    if let Some(path) = &args.report {
        write_json(path, &entries)?;
    }
    if entries.is_empty() {
        println!("consistent");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{} clashes", entries.len());
        Ok(ExitCode::from(CURATION_NEEDED))
    }
}

fn realize_cmd(args: RealizeArgs) -> Result<ExitCode> {
    let schema = read(&args.schema)?.schema();
    let realized = realize(&schema, &abox_axioms(&args.abox)?)?;
    log::info!("{} realized class assertions", realized.len());
    write(&args.output, &Ontology::from_axioms(realized))?;
    Ok(ExitCode::SUCCESS)
}

fn modularize(args: ModularizeArgs) -> Result<ExitCode> {
    let schema = read(&args.schema)?.schema();
    let abox = Ontology::from_axioms(abox_axioms(&args.abox)?);
    let (dataset, iterations) = assemble_dataset(&schema, &abox);
    log::info!("module reached a fixpoint after {iterations} iterations");
    fs::create_dir_all(&args.output)?;
    let components = decompose(&dataset);
    components.write(&args.output)?;
    write_json(&args.output.join("summary.json"), &components.counts())?;
    Ok(ExitCode::SUCCESS)
}

fn postprocess(args: PostprocessArgs) -> Result<ExitCode> {
    let dataset = read(&args.dataset)?;
    let relations: Vec<_> = dataset.abox().filter_map(Axiom::as_relation).collect();
    let mut s = split(relations, args.ratios, args.seed)?;
    if !args.no_leakage_filter {
        s = filter_inversion_leakage(&s, &inverse_pairs(dataset.axioms()));
    }
    println!(
        "train {}, valid {}, test {} ({} moved for coverage, {} for leakage)",
        s.train.len(),
        s.valid.len(),
        s.test.len(),
        s.moved_for_coverage,
        s.moved_for_leakage
    );
    fs::create_dir_all(&args.output)?;
    let stats = compute_stats(&dataset);
    write_json(&args.output.join("stats.json"), &stats)?;
    fs::write(args.output.join("stats.md"), stats_markdown(&args.name, &stats))?;
    let maps = build_id_maps([&dataset], u32::from(args.one_based));
    export_coo(&args.output.join("coo"), &dataset, &s, &maps)?;
    Ok(ExitCode::SUCCESS)
}

fn run_config(args: &RunArgs) -> Result<PipelineConfig> {
    let mut c = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => PipelineConfig::default(),
    };
    if let Some(v) = &args.name {
        c.name = v.clone();
    }
    if !args.sources.is_empty() {
        c.sources = args.sources.clone();
    }
    if let Some(v) = &args.endpoint {
        c.endpoint = Some(v.clone());
    }
    if let Some(v) = &args.catalog {
        c.catalog = Some(v.clone());
    }
    if let Some(v) = args.missing_imports {
        c.missing_imports = v.into();
    }
    if let Some(v) = args.infer_declarations {
        c.infer_declarations = v;
    }
    if let Some(v) = args.k {
        c.k = v;
    }
    if let Some(v) = args.fixpoint {
        c.fixpoint = v;
    }
    if let Some(v) = args.degree_includes_types {
        c.degree_includes_types = v;
    }
    if !args.variants.is_empty() {
        c.variants = args.variants.clone();
    }
    if let Some(v) = args.ratios {
        c.ratios = v;
    }
    if let Some(v) = args.seed {
        c.seed = v;
    }
    if let Some(v) = args.leakage_filter {
        c.leakage_filter = v;
    }
    if !args.decisions.is_empty() {
        c.decisions = args.decisions.clone();
    }
    if let Some(v) = &args.output {
        c.output = v.clone();
    }
    if let Some(v) = &args.reasoner {
        c.reasoner = v.clone();
    }
    if let Some(v) = args.una {
        c.una = v;
    }
    if args.no_una {
        c.una = false;
    }
    if args.one_based {
        c.id_base = 1;
    }
    c.validate()?;
    Ok(c)
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let config = run_config(&args)?;
    if args.print_config {
        println!("{}", config.to_json());
        return Ok(ExitCode::SUCCESS);
    }
    match pipeline::run(&config) {
        Ok(bundle) => {
            let m = &bundle.manifest;
            println!("{} written to {}", m.dataset, bundle.dir.display());
            println!(
                "split: train {}, valid {}, test {}",
                m.split.train, m.split.valid, m.split.test
            );
            for v in &m.variants {
                println!("{}: {} axioms", v.variant.name(), v.axioms);
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(PipelineError::CurationNeeded(report)) => {
            eprintln!(
                "{} clashes need a decision; see {}",
                report.clashes.len(),
                config.output.join(pipeline::CURATION_REPORT_FILE).display()
            );
            for e in &report.clashes {
                eprintln!("  {:?} on {:?}", e.clash.clash.kind, e.clash.clash.individuals);
            }
            Ok(ExitCode::from(CURATION_NEEDED))
        }
        Err(e) => Err(e.into()),
    }
}

fn stats(args: StatsArgs) -> Result<ExitCode> {
    let report = compute_stats(&read(&args.dataset)?);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", stats_markdown(&args.name, &report));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    let result = match cli.command {
        Command::Merge(a) => merge(a),
        Command::CheckSchema(a) => check_schema(a),
        Command::Materialize(a) => materialize(a),
        Command::Extract(a) => extract(a),
        Command::CheckConsistency(a) => check_consistency_cmd(a),
        Command::Realize(a) => realize_cmd(a),
        Command::Modularize(a) => modularize(a),
        Command::Postprocess(a) => postprocess(a),
        Command::Run(a) => run(a),
        Command::Stats(a) => stats(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
