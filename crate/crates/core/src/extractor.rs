//! Degree-filtered ABox extraction from a local graph or a SPARQL endpoint.

use std::collections::{BTreeSet, HashMap};
use std::thread;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::model::{Axiom, ClassExpression, EntityKind, EntityRef, Iri, Ontology, RelationTriple};
use crate::reasoner::UnsatReport;
use crate::vocab as v;

#[derive(Debug, thiserror::Error)]
pub enum ExtractError {
    #[error("extraction threshold k must be at least 1")]
    InvalidThreshold,
    #[error("endpoint {endpoint} unreachable after {attempts} attempts: {message}")]
    Unreachable {
        endpoint: String,
        attempts: u32,
        message: String,
    },
    #[error("malformed SPARQL results: {0}")]
    Results(String),
}

/// Number of assertions each individual takes part in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeIndex {
    degree: HashMap<Iri, u64>,
}

impl DegreeIndex {
    pub fn get(&self, individual: &Iri) -> u64 {
        self.degree.get(individual).copied().unwrap_or(0)
    }

    pub fn add(&mut self, individual: &Iri, count: u64) {
        *self.degree.entry(individual.clone()).or_default() += count;
    }

    pub fn len(&self) -> usize {
        self.degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degree.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.degree.values().sum()
    }

    /// Entries in IRI order.
    pub fn sorted(&self) -> Vec<(&Iri, u64)> {
        let mut out: Vec<(&Iri, u64)> = self.degree.iter().map(|(k, v)| (k, *v)).collect();
        out.sort();
        out
    }
}

/// Counts subject and object occurrences; a self-loop counts twice.
pub fn compute_degrees<'a>(assertions: impl IntoIterator<Item = &'a RelationTriple>) -> DegreeIndex {
    let mut index = DegreeIndex::default();
    for t in assertions {
        index.add(&t.subject, 1);
        index.add(&t.object, 1);
    }
    index
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ABoxSubset {
    pub property_assertions: BTreeSet<RelationTriple>,
    /// `ClassAssertion` axioms.
    pub class_assertions: BTreeSet<Axiom>,
    pub individuals: BTreeSet<Iri>,
    pub properties: BTreeSet<Iri>,
    pub extraction_k: u64,
}

impl ABoxSubset {
    /// All assertions as axioms, class assertions first.
    pub fn axioms(&self) -> Vec<Axiom> {
        self.class_assertions
            .iter()
            .cloned()
            .chain(self.property_assertions.iter().map(RelationTriple::to_axiom))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractOptions {
    pub k: u64,
    /// Re-filter on the degrees of the retained set until nothing changes.
    pub fixpoint: bool,
    /// Count class assertions toward an individual's degree.
    pub degree_includes_types: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            k: 1,
            fixpoint: false,
            degree_includes_types: false,
        }
    }
}

/// Where assertions come from.
pub trait AboxSource {
    /// Every object property assertion between individuals.
    fn property_assertions(&mut self) -> Result<Vec<RelationTriple>, ExtractError>;
    /// Number of class assertions per individual.
    fn type_counts(&mut self) -> Result<HashMap<Iri, u64>, ExtractError>;
    /// Named class assertions of the given individuals.
    fn class_assertions(&mut self, individuals: &BTreeSet<Iri>) -> Result<Vec<Axiom>, ExtractError>;
}

/// A source backed by an in-memory ontology, e.g. a decoded dump.
pub struct LocalSource<'a> {
    ontology: &'a Ontology,
}

impl<'a> LocalSource<'a> {
    pub fn new(ontology: &'a Ontology) -> Self {
        LocalSource { ontology }
    }
}

impl AboxSource for LocalSource<'_> {
    fn property_assertions(&mut self) -> Result<Vec<RelationTriple>, ExtractError> {
        Ok(self.ontology.abox().filter_map(Axiom::as_relation).collect())
    }

    fn type_counts(&mut self) -> Result<HashMap<Iri, u64>, ExtractError> {
        let mut out: HashMap<Iri, u64> = HashMap::new();
        for axiom in self.ontology.abox() {
            if let Axiom::ClassAssertion { individual, .. } = axiom {
                *out.entry(individual.clone()).or_default() += 1;
            }
        }
        Ok(out)
    }

    fn class_assertions(&mut self, individuals: &BTreeSet<Iri>) -> Result<Vec<Axiom>, ExtractError> {
        Ok(self
            .ontology
            .abox()
            .filter(|ax| {
                matches!(ax, Axiom::ClassAssertion { individual, .. } if individuals.contains(individual))
            })
            .cloned()
            .collect())
    }
}

fn degree_filter(
    assertions: Vec<RelationTriple>,
    degrees: &DegreeIndex,
    k: u64,
    unsat: &UnsatReport,
) -> Vec<RelationTriple> {
    assertions
        .into_iter()
        .filter(|t| {
            degrees.get(&t.subject) >= k
                && degrees.get(&t.object) >= k
                && !unsat.unsatisfiable_properties.contains(&t.property)
        })
        .collect()
}

/// Keeps the assertions whose subject and object both have degree at least
/// `k` in the whole source and whose property is satisfiable. Class
/// assertions are left empty; see [`fetch_class_assertions`].
pub fn extract_subset(
    source: &mut dyn AboxSource,
    options: &ExtractOptions,
    unsat: &UnsatReport,
) -> Result<ABoxSubset, ExtractError> {
    if options.k < 1 {
        return Err(ExtractError::InvalidThreshold);
    }
    let all = source.property_assertions()?;
    let mut degrees = compute_degrees(&all);
    if options.degree_includes_types {
        for (ind, n) in source.type_counts()? {
            if degrees.get(&ind) > 0 {
                degrees.add(&ind, n);
            }
        }
    }
    let mut kept = degree_filter(all, &degrees, options.k, unsat);
    if options.fixpoint {
        loop {
            let before = kept.len();
            let local = compute_degrees(&kept);
            kept = degree_filter(kept, &local, options.k, unsat);
            if kept.len() == before {
                break;
            }
        }
    }
    let mut subset = ABoxSubset {
        extraction_k: options.k,
        ..ABoxSubset::default()
    };
    for t in kept {
        subset.individuals.insert(t.subject.clone());
        subset.individuals.insert(t.object.clone());
        subset.properties.insert(t.property.clone());
        subset.property_assertions.insert(t);
    }
    log::info!(
        "extracted {} assertions over {} individuals (k = {})",
        subset.property_assertions.len(),
        subset.individuals.len(),
        options.k
    );
    Ok(subset)
}

fn mentions_unsat(class: &ClassExpression, unsat: &UnsatReport) -> bool {
    let mut sig = crate::model::Signature::new();
    class.collect_signature(&mut sig);
    let flagged = sig.iter().any(|e| match e.kind {
        EntityKind::Class => unsat.unsatisfiable_classes.contains(&e.iri),
        EntityKind::ObjectProperty => unsat.unsatisfiable_properties.contains(&e.iri),
        _ => false,
    });
    flagged
}

/// Class assertions of `individuals`, minus those naming unsatisfiable
/// entities and `owl:Thing` typings.
pub fn fetch_class_assertions(
    source: &mut dyn AboxSource,
    individuals: &BTreeSet<Iri>,
    unsat: &UnsatReport,
) -> Result<BTreeSet<Axiom>, ExtractError> {
    Ok(source
        .class_assertions(individuals)?
        .into_iter()
        .filter(|ax| match ax {
            Axiom::ClassAssertion { individual, class } => {
                individuals.contains(individual)
                    && *class != ClassExpression::Top
                    && class.as_named().is_none_or(|c| c.as_str() != v::OWL_NAMED_INDIVIDUAL)
                    && !mentions_unsat(class, unsat)
            }
            _ => false,
        })
        .map(Axiom::canonical)
        .collect())
}

/// [`extract_subset`] followed by [`fetch_class_assertions`].
pub fn extract(
    source: &mut dyn AboxSource,
    options: &ExtractOptions,
    unsat: &UnsatReport,
) -> Result<ABoxSubset, ExtractError> {
    let mut subset = extract_subset(source, options, unsat)?;
    subset.class_assertions = fetch_class_assertions(source, &subset.individuals, unsat)?;
    Ok(subset)
}

/// Whether `axiom` names no entity flagged in `unsat`.
pub fn is_clean(axiom: &Axiom, unsat: &UnsatReport) -> bool {
    !axiom.signature().iter().any(|e: &EntityRef| match e.kind {
        EntityKind::Class => unsat.unsatisfiable_classes.contains(&e.iri),
        EntityKind::ObjectProperty => unsat.unsatisfiable_properties.contains(&e.iri),
        _ => false,
    })
}

#[derive(Clone, Debug)]
pub struct SparqlOptions {
    pub page_size: usize,
    pub max_attempts: u32,
    /// Delay before the first retry; doubled after each failure.
    pub backoff: Duration,
    pub timeout: Duration,
    /// Number of individuals per `VALUES` block when fetching types.
    pub values_batch: usize,
}

impl Default for SparqlOptions {
    fn default() -> Self {
        SparqlOptions {
            page_size: 10_000,
            max_attempts: 5,
            backoff: Duration::from_millis(500),
            timeout: Duration::from_secs(120),
            values_batch: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRecord {
    pub query: String,
    pub rows: usize,
    pub sha256: String,
}

/// What was fetched from an endpoint, for the run manifest.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchManifest {
    pub endpoint: String,
    pub started_at_unix: u64,
    pub pages: Vec<PageRecord>,
}

/// A SPARQL 1.1 endpoint read through keyset-paginated SELECT queries.
pub struct SparqlSource {
    endpoint: String,
    options: SparqlOptions,
    agent: ureq::Agent,
    manifest: FetchManifest,
}

const PREFIX: &str = "PREFIX owl: <http://www.w3.org/2002/07/owl#>\n";

fn sparql_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            other => out.push(other),
        }
    }
    out.push('"');
    out
}

/// `FILTER` selecting rows strictly after `last` in `(vars...)` order.
fn keyset_filter(vars: &[&str], last: &[String]) -> String {
    let mut clauses = Vec::new();
    for i in 0..vars.len() {
        let mut parts: Vec<String> = (0..i)
            .map(|j| format!("STR(?{}) = {}", vars[j], sparql_string(&last[j])))
            .collect();
        parts.push(format!("STR(?{}) > {}", vars[i], sparql_string(&last[i])));
        clauses.push(format!("({})", parts.join(" && ")));
    }
    format!("FILTER ({})", clauses.join(" || "))
}

fn bindings(body: &str, vars: &[&str]) -> Result<Vec<Vec<String>>, ExtractError> {
    let json: serde_json::Value =
        serde_json::from_str(body).map_err(|e| ExtractError::Results(e.to_string()))?;
    let rows = json
        .pointer("/results/bindings")
        .and_then(|b| b.as_array())
        .ok_or_else(|| ExtractError::Results("missing results.bindings".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let mut values = Vec::with_capacity(vars.len());
        for var in vars {
            let cell = row
                .get(*var)
                .ok_or_else(|| ExtractError::Results(format!("unbound ?{var}")))?;
            if cell.get("type").and_then(|t| t.as_str()) != Some("uri") {
                break;
            }
            let value = cell
                .get("value")
                .and_then(|v| v.as_str())
                .ok_or_else(|| ExtractError::Results(format!("?{var} has no value")))?;
            values.push(value.to_owned());
        }
        if values.len() == vars.len() {
            out.push(values);
        }
    }
    Ok(out)
}

fn checksum(rows: &[Vec<String>]) -> String {
    let mut hasher = Sha256::new();
    for row in rows {
        hasher.update(row.join("\t").as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

fn iri(value: &str) -> Result<Iri, ExtractError> {
    Iri::new(value).map_err(|e| ExtractError::Results(e.to_string()))
}

impl SparqlSource {
    pub fn new(endpoint: impl Into<String>, options: SparqlOptions) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(options.timeout))
            .build()
            .into();
        SparqlSource {
            endpoint: endpoint.into(),
            options,
            agent,
            manifest: FetchManifest::default(),
        }
    }

    pub fn manifest(&self) -> &FetchManifest {
        &self.manifest
    }

    fn post(&self, query: &str) -> Result<String, ExtractError> {
        let mut delay = self.options.backoff;
        let mut last_error = String::new();
        for attempt in 1..=self.options.max_attempts.max(1) {
            let result = self
                .agent
                .post(&self.endpoint)
                .header("Accept", "application/sparql-results+json")
                .send_form([("query", query)])
                .and_then(|mut r| r.body_mut().read_to_string());
            match result {
                Ok(body) => return Ok(body),
                Err(e) => {
                    last_error = e.to_string();
                    log::warn!("query attempt {attempt} against {} failed: {e}", self.endpoint);
                    if attempt < self.options.max_attempts {
                        thread::sleep(delay);
                        delay *= 2;
                    }
                }
            }
        }
        Err(ExtractError::Unreachable {
            endpoint: self.endpoint.clone(),
            attempts: self.options.max_attempts.max(1),
            message: last_error,
        })
    }

    fn run(&mut self, query: String, vars: &[&str]) -> Result<Vec<Vec<String>>, ExtractError> {
        if self.manifest.pages.is_empty() {
            self.manifest.endpoint = self.endpoint.clone();
            self.manifest.started_at_unix = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
        }
        let body = self.post(&query)?;
        let rows = bindings(&body, vars)?;
        self.manifest.pages.push(PageRecord {
            rows: rows.len(),
            sha256: checksum(&rows),
            query,
        });
        Ok(rows)
    }

    /// Runs `pattern` page by page, ordered on `vars`.
    fn paged(&mut self, pattern: &str, vars: &[&str]) -> Result<Vec<Vec<String>>, ExtractError> {
        let select: Vec<String> = vars.iter().map(|v| format!("?{v}")).collect();
        let mut out: Vec<Vec<String>> = Vec::new();
        loop {
            let filter = out
                .last()
                .map(|last| keyset_filter(vars, last))
                .unwrap_or_default();
            let query = format!(
                "{PREFIX}SELECT {sel} WHERE {{\n{pattern}\n{filter}\n}}\nORDER BY {order}\nLIMIT {limit}",
                sel = select.join(" "),
                order = vars
                    .iter()
                    .map(|v| format!("STR(?{v})"))
                    .collect::<Vec<_>>()
                    .join(" "),
                limit = self.options.page_size,
            );
            let rows = self.run(query, vars)?;
            let full = rows.len() >= self.options.page_size;
            out.extend(rows);
            if !full {
                break;
            }
        }
        Ok(out)
    }
}

impl AboxSource for SparqlSource {
    fn property_assertions(&mut self) -> Result<Vec<RelationTriple>, ExtractError> {
        let pattern = "?s ?p ?o .\n?s a owl:NamedIndividual .\n?o a owl:NamedIndividual .\n?p a owl:ObjectProperty .";
        self.paged(pattern, &["s", "p", "o"])?
            .into_iter()
            .map(|row| Ok(RelationTriple::new(iri(&row[0])?, iri(&row[1])?, iri(&row[2])?)))
            .collect()
    }

    fn type_counts(&mut self) -> Result<HashMap<Iri, u64>, ExtractError> {
        let pattern = "?s a owl:NamedIndividual .\n?s a ?c .\nFILTER (isIRI(?c) && ?c != owl:NamedIndividual)";
        let mut out: HashMap<Iri, u64> = HashMap::new();
        for row in self.paged(pattern, &["s", "c"])? {
            *out.entry(iri(&row[0])?).or_default() += 1;
        }
        Ok(out)
    }

    fn class_assertions(&mut self, individuals: &BTreeSet<Iri>) -> Result<Vec<Axiom>, ExtractError> {
        let all: Vec<&Iri> = individuals.iter().collect();
        let mut out = Vec::new();
        for chunk in all.chunks(self.options.values_batch.max(1)) {
            let values: Vec<String> = chunk.iter().map(|i| format!("<{i}>")).collect();
            let pattern = format!(
                "VALUES ?s {{ {} }}\n?s a ?c .\nFILTER (isIRI(?c))",
                values.join(" ")
            );
            for row in self.paged(&pattern, &["s", "c"])? {
                out.push(Axiom::class_assertion(
                    iri(&row[0])?,
                    ClassExpression::Named(iri(&row[1])?),
                ));
            }
        }
        Ok(out)
    }
}
