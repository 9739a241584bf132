use std::fs;
use std::path::Path;

use oxrdfxml::RdfXmlParser;
use oxttl::{NTriplesParser, TurtleParser};

use super::{triples_to_axioms, DecodeOptions, ParseReport, RdfError, RdfFormat, Term, TripleRecord};
use crate::model::{Iri, Ontology};

/// Parses a whole document into triples, in document order.
///
/// Relative IRIs are resolved against `base` when one is given. The first
/// syntax error aborts parsing.
pub fn parse_document(
    bytes: &[u8],
    format: RdfFormat,
    base: Option<&str>,
) -> Result<Vec<TripleRecord>, RdfError> {
    let mut out = Vec::new();
    match format {
        RdfFormat::NTriples => {
            for triple in NTriplesParser::new().for_slice(bytes) {
                out.push(convert(triple.map_err(|e| syntax_error(e, bytes))?));
            }
        }
        RdfFormat::Turtle => {
            let mut parser = TurtleParser::new();
            if let Some(base) = base {
                parser = parser.with_base_iri(base).map_err(|e| RdfError::Syntax {
                    line: 0,
                    column: 0,
                    message: format!("invalid base IRI: {e}"),
                })?;
            }
            for triple in parser.for_slice(bytes) {
                out.push(convert(triple.map_err(|e| syntax_error(e, bytes))?));
            }
        }
        RdfFormat::RdfXml => {
            let mut parser = RdfXmlParser::new();
            if let Some(base) = base {
                parser = parser
                    .with_base_iri(base)
                    .map_err(|e| RdfError::RdfXml(format!("invalid base IRI: {e}")))?;
            }
            for triple in parser.for_slice(bytes) {
                out.push(convert(triple.map_err(|e| RdfError::RdfXml(e.to_string()))?));
            }
        }
    }
    Ok(out)
}

/// Parses a file, picking the format from its extension.
pub fn parse_file(path: &Path) -> Result<Vec<TripleRecord>, RdfError> {
    let format = RdfFormat::from_path(path)
        .ok_or_else(|| RdfError::UnknownFormat(path.display().to_string()))?;
    let bytes = fs::read(path)?;
    let base = path
        .canonicalize()
        .ok()
        .map(|p| format!("file://{}", p.display()));
    parse_document(&bytes, format, base.as_deref())
}

/// Parses and decodes a single file into an ontology.
pub fn read_ontology(
    path: &Path,
    options: &DecodeOptions,
) -> Result<(Ontology, ParseReport), RdfError> {
    let triples = parse_file(path)?;
    triples_to_axioms(&triples, options)
}

/// Prefixes every blank node label so that triples from several documents
/// can be decoded together without label collisions.
pub fn scope_blank_nodes(triples: &mut [TripleRecord], scope: &str) {
    let rescope = |term: &mut Term| {
        if let Term::Blank(label) = term {
            *label = format!("{scope}_{label}");
        }
    };
    for triple in triples {
        rescope(&mut triple.subject);
        rescope(&mut triple.object);
    }
}

/// Errors detected at end of input (an unterminated last statement) are
/// reported on the last non-empty line.
fn syntax_error(e: oxttl::TurtleSyntaxError, bytes: &[u8]) -> RdfError {
    let start = e.location().start;
    let last_line = bytes
        .split(|&b| b == b'\n')
        .enumerate()
        .filter(|(_, l)| l.iter().any(|b| !b.is_ascii_whitespace()))
        .map(|(i, _)| i as u64 + 1)
        .last()
        .unwrap_or(1);
    let line = start.line + 1;
    RdfError::Syntax {
        line: line.min(last_line),
        column: if line > last_line { 1 } else { start.column + 1 },
        message: e.message().to_owned(),
    }
}

fn convert(triple: oxrdf::Triple) -> TripleRecord {
    let subject = match triple.subject {
        oxrdf::NamedOrBlankNode::NamedNode(n) => Term::Iri(Iri::new_unchecked(n.as_str())),
        oxrdf::NamedOrBlankNode::BlankNode(b) => Term::Blank(b.as_str().to_owned()),
    };
    let object = match triple.object {
        oxrdf::Term::NamedNode(n) => Term::Iri(Iri::new_unchecked(n.as_str())),
        oxrdf::Term::BlankNode(b) => Term::Blank(b.as_str().to_owned()),
        oxrdf::Term::Literal(l) => {
            let (value, datatype, language) = l.destruct();
            let datatype = match (&language, datatype) {
                (_, Some(dt)) => Iri::new_unchecked(dt.as_str()),
                (Some(_), None) => {
                    Iri::new_unchecked("http://www.w3.org/1999/02/22-rdf-syntax-ns#langString")
                }
                (None, None) => Iri::new_unchecked("http://www.w3.org/2001/XMLSchema#string"),
            };
            Term::Literal {
                value,
                datatype,
                language,
            }
        }
        #[allow(unreachable_patterns)]
        other => Term::Blank(format!("unsupported-{}", other)),
    };
    TripleRecord::new(
        subject,
        Iri::new_unchecked(triple.predicate.as_str()),
        object,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ntriples_single_statement() {
        let doc = b"<http://e/a> <http://e/p> <http://e/b> .\n";
        let triples = parse_document(doc, RdfFormat::NTriples, None).unwrap();
        assert_eq!(
            triples,
            vec![TripleRecord::new(
                Term::iri("http://e/a"),
                Iri::new_unchecked("http://e/p"),
                Term::iri("http://e/b")
            )]
        );
    }

    #[test]
    fn turtle_prefix_expansion() {
        let doc = b"@prefix ex: <http://e/> . ex:a ex:p ex:b .";
        let triples = parse_document(doc, RdfFormat::Turtle, None).unwrap();
        assert_eq!(triples.len(), 1);
        assert_eq!(triples[0].subject, Term::iri("http://e/a"));
        assert_eq!(triples[0].predicate.as_str(), "http://e/p");
        assert_eq!(triples[0].object, Term::iri("http://e/b"));
    }

    #[test]
    fn malformed_line_reports_position() {
        let doc = b"<http://e/a> <http://e/p> <http://e/b> .\n<http://e/a> <http://e/p>\n";
        match parse_document(doc, RdfFormat::NTriples, None) {
            Err(RdfError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_prefix_is_an_error() {
        let doc = b"ex:a ex:p ex:b .";
        assert!(matches!(
            parse_document(doc, RdfFormat::Turtle, None),
            Err(RdfError::Syntax { .. })
        ));
    }

    #[test]
    fn literals_keep_datatype_and_language() {
        let doc = br#"<http://e/a> <http://e/p> "x"@en .
<http://e/a> <http://e/p> "1"^^<http://www.w3.org/2001/XMLSchema#integer> ."#;
        let triples = parse_document(doc, RdfFormat::NTriples, None).unwrap();
        match &triples[0].object {
            Term::Literal { language, .. } => assert_eq!(language.as_deref(), Some("en")),
            other => panic!("{other:?}"),
        }
        match &triples[1].object {
            Term::Literal { datatype, .. } => {
                assert_eq!(datatype.as_str(), "http://www.w3.org/2001/XMLSchema#integer")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rdfxml_is_readable() {
        let doc = br#"<?xml version="1.0"?>
<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
         xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#"
         xmlns:owl="http://www.w3.org/2002/07/owl#">
  <owl:Class rdf:about="http://e/A">
    <rdfs:subClassOf rdf:resource="http://e/B"/>
  </owl:Class>
</rdf:RDF>"#;
        let triples = parse_document(doc, RdfFormat::RdfXml, None).unwrap();
        assert_eq!(triples.len(), 2);
    }
}
