//! Import resolution and closure merging.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use super::{parse_document, triples_to_axioms, DecodeOptions, ParseReport, RdfError, RdfFormat};
use crate::model::{Iri, Ontology};

/// A fetched document.
#[derive(Clone, Debug)]
pub struct Document {
    pub bytes: Vec<u8>,
    pub format: RdfFormat,
    pub base: Option<String>,
}

/// Maps an ontology IRI to a document. `Ok(None)` means "not mine".
pub trait ImportResolver {
    fn fetch(&self, iri: &Iri) -> Result<Option<Document>, RdfError>;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MissingImportPolicy {
    #[default]
    Fail,
    /// Log the IRI and continue without it.
    Warn,
}

/// Resolves IRIs through a two-column TSV file: `IRI<TAB>path`.
///
/// Relative paths are taken relative to the catalog file.
#[derive(Clone, Debug, Default)]
pub struct CatalogResolver {
    entries: BTreeMap<String, PathBuf>,
}

impl CatalogResolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, iri: impl Into<String>, path: impl Into<PathBuf>) {
        self.entries.insert(iri.into(), path.into());
    }

    pub fn from_file(path: &Path) -> Result<Self, RdfError> {
        let text = fs::read_to_string(path)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, dir)
    }

    pub fn parse(text: &str, dir: &Path) -> Result<Self, RdfError> {
        let mut catalog = CatalogResolver::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(iri), Some(file), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(RdfError::Catalog {
                    line: n + 1,
                    message: "expected two tab-separated columns".into(),
                });
            };
            let file = Path::new(file.trim());
            let file = if file.is_absolute() {
                file.to_path_buf()
            } else {
                dir.join(file)
            };
            catalog.insert(iri.trim(), file);
        }
        Ok(catalog)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl ImportResolver for CatalogResolver {
    fn fetch(&self, iri: &Iri) -> Result<Option<Document>, RdfError> {
        let Some(path) = self.entries.get(iri.as_str()) else {
            return Ok(None);
        };
        let format = RdfFormat::from_path(path)
            .ok_or_else(|| RdfError::UnknownFormat(path.display().to_string()))?;
        Ok(Some(Document {
            bytes: fs::read(path)?,
            format,
            base: Some(iri.as_str().to_owned()),
        }))
    }
}

/// Fetches `http(s)` IRIs with content negotiation.
#[derive(Clone, Debug)]
pub struct HttpResolver {
    pub timeout: Duration,
}

impl Default for HttpResolver {
    fn default() -> Self {
        HttpResolver {
            timeout: Duration::from_secs(30),
        }
    }
}

impl ImportResolver for HttpResolver {
    fn fetch(&self, iri: &Iri) -> Result<Option<Document>, RdfError> {
        let s = iri.as_str();
        if !(s.starts_with("http://") || s.starts_with("https://")) {
            return Ok(None);
        }
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .build()
            .into();
        let fetch_err = |e: ureq::Error| RdfError::Fetch {
            iri: s.to_owned(),
            message: e.to_string(),
        };
        let mut response = agent
            .get(s)
            .header(
                "Accept",
                "text/turtle, application/n-triples;q=0.9, application/rdf+xml;q=0.8",
            )
            .call()
            .map_err(fetch_err)?;
        let content_type = response
            .headers()
            .get("content-type")
            .and_then(|h| h.to_str().ok())
            .unwrap_or("")
            .to_owned();
        let bytes = response.body_mut().read_to_vec().map_err(fetch_err)?;
        let format = RdfFormat::from_media_type(&content_type)
            .or_else(|| RdfFormat::from_path(Path::new(s)))
            .unwrap_or(RdfFormat::RdfXml);
        Ok(Some(Document {
            bytes,
            format,
            base: Some(s.to_owned()),
        }))
    }
}

/// Tries resolvers in order.
#[derive(Default)]
pub struct ChainResolver {
    resolvers: Vec<Box<dyn ImportResolver>>,
}

impl ChainResolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, resolver: impl ImportResolver + 'static) -> Self {
        self.resolvers.push(Box::new(resolver));
        self
    }
}

impl ImportResolver for ChainResolver {
    fn fetch(&self, iri: &Iri) -> Result<Option<Document>, RdfError> {
        for resolver in &self.resolvers {
            if let Some(doc) = resolver.fetch(iri)? {
                return Ok(Some(doc));
            }
        }
        Ok(None)
    }
}

/// Merges the axioms of `root` and of every transitively imported ontology
/// into one ontology with an empty import list.
///
/// Each IRI is fetched once, so import cycles terminate. Returns the merged
/// ontology, the combined parse report of the imported documents, and the
/// IRIs skipped under [`MissingImportPolicy::Warn`].
pub fn merge_import_closure(
    root: &Ontology,
    resolver: &dyn ImportResolver,
    policy: MissingImportPolicy,
    options: &DecodeOptions,
) -> Result<(Ontology, ParseReport, Vec<Iri>), RdfError> {
    let mut merged = root.clone();
    merged.imports.clear();
    let mut report = ParseReport::default();
    let mut skipped = Vec::new();
    let mut visited: HashSet<Iri> = root.iri.iter().cloned().collect();
    let mut queue: VecDeque<Iri> = root.imports.iter().cloned().collect();

    while let Some(iri) = queue.pop_front() {
        if !visited.insert(iri.clone()) {
            continue;
        }
        let document = match resolver.fetch(&iri) {
            Ok(Some(doc)) => doc,
            Ok(None) => {
                handle_missing(&iri, policy, &mut skipped, RdfError::UnresolvedImport(iri.to_string()))?;
                continue;
            }
            Err(e) => {
                handle_missing(&iri, policy, &mut skipped, e)?;
                continue;
            }
        };
        let triples = parse_document(&document.bytes, document.format, document.base.as_deref())?;
        let (imported, part) = triples_to_axioms(&triples, options)?;
        report.merge(&part);
        if let Some(own) = &imported.iri {
            visited.insert(own.clone());
        }
        merged.merge(&imported);
        queue.extend(imported.imports.iter().cloned());
    }
    Ok((merged, report, skipped))
}

fn handle_missing(
    iri: &Iri,
    policy: MissingImportPolicy,
    skipped: &mut Vec<Iri>,
    error: RdfError,
) -> Result<(), RdfError> {
    match policy {
        MissingImportPolicy::Fail => Err(error),
        MissingImportPolicy::Warn => {
            log::warn!("skipping import <{iri}>: {error}");
            skipped.push(iri.clone());
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Axiom, ClassExpression};

    struct Mem(BTreeMap<String, String>);

    impl ImportResolver for Mem {
        fn fetch(&self, iri: &Iri) -> Result<Option<Document>, RdfError> {
            Ok(self.0.get(iri.as_str()).map(|text| Document {
                bytes: text.as_bytes().to_vec(),
                format: RdfFormat::NTriples,
                base: None,
            }))
        }
    }

    const IMPORTS: &str = "<http://www.w3.org/2002/07/owl#imports>";
    const SUB: &str = "<http://www.w3.org/2000/01/rdf-schema#subClassOf>";
    const ONTO: &str =
        "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2002/07/owl#Ontology>";

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://e/{s}")).unwrap()
    }
    fn sub(a: &str, b: &str) -> Axiom {
        Axiom::subclass(
            ClassExpression::Named(iri(a)),
            ClassExpression::Named(iri(b)),
        )
    }

    fn root_importing(target: &str) -> Ontology {
        let mut root = Ontology::from_axioms([sub("A", "B")]);
        root.iri = Some(iri("root"));
        root.imports = vec![iri(target)];
        root
    }

    #[test]
    fn cycle_terminates_with_union() {
        let mut docs = BTreeMap::new();
        docs.insert(
            "http://e/a".to_string(),
            format!(
                "<http://e/a> {ONTO} .\n<http://e/a> {IMPORTS} <http://e/root> .\n<http://e/C> {SUB} <http://e/D> .\n"
            ),
        );
        let (merged, _, skipped) = merge_import_closure(
            &root_importing("a"),
            &Mem(docs),
            MissingImportPolicy::Fail,
            &DecodeOptions::default(),
        )
        .unwrap();
        assert!(skipped.is_empty());
        assert!(merged.imports.is_empty());
        assert_eq!(merged.len(), 2);
        assert!(merged.contains(&sub("C", "D")));
    }

    #[test]
    fn shared_axioms_are_not_duplicated() {
        let mut docs = BTreeMap::new();
        docs.insert(
            "http://e/a".to_string(),
            format!("<http://e/A> {SUB} <http://e/B> .\n<http://e/B> {SUB} <http://e/C> .\n"),
        );
        let (merged, _, _) = merge_import_closure(
            &root_importing("a"),
            &Mem(docs),
            MissingImportPolicy::Fail,
            &DecodeOptions::default(),
        )
        .unwrap();
        assert_eq!(merged.len(), 2);
    }

    #[test]
    fn no_imports_leaves_root_unchanged() {
        let root = Ontology::from_axioms([sub("A", "B")]);
        let (merged, _, _) = merge_import_closure(
            &root,
            &Mem(BTreeMap::new()),
            MissingImportPolicy::Fail,
            &DecodeOptions::default(),
        )
        .unwrap();
        assert_eq!(merged, root);
    }

    #[test]
    fn missing_import_policy() {
        let root = root_importing("missing");
        let resolver = Mem(BTreeMap::new());
        assert!(matches!(
            merge_import_closure(&root, &resolver, MissingImportPolicy::Fail, &DecodeOptions::default()),
            Err(RdfError::UnresolvedImport(_))
        ));
        let (merged, _, skipped) =
            merge_import_closure(&root, &resolver, MissingImportPolicy::Warn, &DecodeOptions::default())
                .unwrap();
        assert_eq!(skipped, vec![iri("missing")]);
        assert_eq!(merged.len(), 1);
    }

    #[test]
    fn catalog_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.nt");
        fs::write(&path, format!("<http://e/X> {SUB} <http://e/Y> .\n")).unwrap();
        let catalog =
            CatalogResolver::parse("# comment\nhttp://e/a\ta.nt\n\n", dir.path()).unwrap();
        assert_eq!(catalog.len(), 1);
        let doc = catalog.fetch(&iri("a")).unwrap().unwrap();
        assert_eq!(doc.format, RdfFormat::NTriples);
        assert!(catalog.fetch(&iri("b")).unwrap().is_none());
        assert!(matches!(
            CatalogResolver::parse("only-one-column\n", dir.path()),
            Err(RdfError::Catalog { line: 1, .. })
        ));
    }
}
