//! SparqlSource against a minimal in-process endpoint.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use kgdistill::extractor::{extract, ExtractError, ExtractOptions, SparqlOptions, SparqlSource};
use kgdistill::model::{Axiom, ClassExpression, Iri, Ontology};
use kgdistill::reasoner::UnsatReport;
use kgdistill::RelationTriple;

const OWL_NI: &str = "http://www.w3.org/2002/07/owl#NamedIndividual";

#[derive(Clone)]
struct Data {
    relations: Vec<[String; 3]>,
    types: Vec<[String; 2]>,
}

fn url_decode(s: &str) -> String {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'+' => out.push(b' '),
            b'%' => {
                out.push(u8::from_str_radix(&s[i + 1..i + 3], 16).unwrap());
                i += 2;
            }
            b => out.push(b),
        }
        i += 1;
    }
    String::from_utf8(out).unwrap()
}

fn quoted(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        if ch == '"' {
            let mut v = String::new();
            while let Some(x) = chars.next() {
                match x {
                    '\\' => v.push(chars.next().unwrap()),
                    '"' => break,
                    other => v.push(other),
                }
            }
            out.push(v);
        }
    }
    out
}

/// Rows strictly after the keyset in the last FILTER clause, up to LIMIT.
fn page(mut rows: Vec<Vec<String>>, query: &str) -> Vec<Vec<String>> {
    rows.sort();
    rows.dedup();
    let limit: usize = query.rsplit("LIMIT ").next().unwrap().trim().parse().unwrap();
    let after = query
        .lines()
        .find(|l| l.starts_with("FILTER ((STR"))
        .map(|l| quoted(l.rsplit("|| ").next().unwrap()));
    rows.into_iter()
        .filter(|r| after.as_ref().is_none_or(|a| r > a))
        .take(limit)
        .collect()
}

fn answer(data: &Data, query: &str) -> (Vec<&'static str>, Vec<Vec<String>>) {
    if query.contains("?p a owl:ObjectProperty") {
        let rows = data.relations.iter().map(|r| r.to_vec()).collect();
        (vec!["s", "p", "o"], page(rows, query))
    } else if let Some(start) = query.find("VALUES ?s {") {
        let rest = &query[start + 11..];
        let wanted: BTreeSet<&str> = rest[..rest.find('}').unwrap()]
            .split_whitespace()
            .map(|v| v.trim_matches(['<', '>']))
            .collect();
        let rows = data
            .types
            .iter()
            .filter(|t| wanted.contains(t[0].as_str()))
            .map(|t| t.to_vec())
            .collect();
        (vec!["s", "c"], page(rows, query))
    } else {
        let rows = data
            .types
            .iter()
            .filter(|t| t[1] != OWL_NI)
            .map(|t| t.to_vec())
            .collect();
        (vec!["s", "c"], page(rows, query))
    }
}

fn respond(stream: &mut TcpStream, status: &str, body: &str) {
    let head = format!(
        "HTTP/1.1 {status}\r\nContent-Type: application/sparql-results+json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    );
    stream.write_all(head.as_bytes()).unwrap();
    stream.write_all(body.as_bytes()).unwrap();
}

/// Serves `data`; the first `failures` requests get a 503.
fn serve(data: Data, failures: usize) -> (String, Arc<AtomicUsize>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/sparql", listener.local_addr().unwrap());
    let hits = Arc::new(AtomicUsize::new(0));
    let counter = hits.clone();
    thread::spawn(move || {
        for stream in listener.incoming() {
            let mut stream = stream.unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut length = 0;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                let lower = line.to_ascii_lowercase();
                if let Some(v) = lower.strip_prefix("content-length:") {
                    length = v.trim().parse().unwrap();
                }
                if line == "\r\n" || line.is_empty() {
                    break;
                }
            }
            let mut body = vec![0; length];
            reader.read_exact(&mut body).unwrap();
            let n = counter.fetch_add(1, Ordering::SeqCst);
            if n < failures {
                respond(&mut stream, "503 Service Unavailable", "busy");
                continue;
            }
            let form = String::from_utf8(body).unwrap();
            let query = url_decode(form.strip_prefix("query=").unwrap());
            let (vars, rows) = answer(&data, &query);
            let bindings: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    let mut obj = serde_json::Map::new();
                    for (v, val) in vars.iter().zip(r) {
                        obj.insert(v.to_string(), serde_json::json!({"type": "uri", "value": val}));
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            let body = serde_json::json!({
                "head": {"vars": vars},
                "results": {"bindings": bindings}
            });
            respond(&mut stream, "200 OK", &body.to_string());
        }
    });
    (url, hits)
}

fn e(s: &str) -> String {
    format!("http://x/{s}")
}
fn iri(s: &str) -> Iri {
    Iri::new(e(s)).unwrap()
}

fn chain_data() -> Data {
    let mut relations = Vec::new();
    for i in 0..25 {
        relations.push([e(&format!("a{i}")), e("p"), e(&format!("a{}", i + 1))]);
    }
    relations.push([e("a0"), e("q\"quoted\""), e("a2")]);
    let mut types: Vec<[String; 2]> = (0..=25).map(|i| [e(&format!("a{i}")), OWL_NI.to_string()]).collect();
    types.push([e("a3"), e("Person")]);
    types.push([e("a0"), e("Person")]);
    types.push([e("a25"), e("Person")]);
    Data { relations, types }
}

fn options() -> SparqlOptions {
    SparqlOptions {
        page_size: 4,
        max_attempts: 3,
        backoff: Duration::from_millis(5),
        timeout: Duration::from_secs(5),
        values_batch: 7,
    }
}

#[test]
fn paginated_extraction_matches_local() {
    let data = chain_data();
    let (url, _) = serve(data.clone(), 0);
    let mut source = SparqlSource::new(url, options());
    let k2 = ExtractOptions {
        k: 2,
        ..ExtractOptions::default()
    };
    let subset = extract(&mut source, &k2, &UnsatReport::default()).unwrap();

    let mut local = Ontology::new();
    for r in &data.relations {
        local.insert_asserted(Axiom::relation(
            Iri::new(&r[0]).unwrap(),
            Iri::new(&r[1]).unwrap(),
            Iri::new(&r[2]).unwrap(),
        ));
    }
    for t in data.types.iter().filter(|t| t[1] != OWL_NI) {
        local.insert_asserted(Axiom::class_assertion(Iri::new(&t[0]).unwrap(), ClassExpression::class(&t[1])));
    }
    let expected = extract(
        &mut kgdistill::extractor::LocalSource::new(&local),
        &k2,
        &UnsatReport::default(),
    )
    .unwrap();
    assert_eq!(subset.property_assertions, expected.property_assertions);
    assert_eq!(subset.class_assertions, expected.class_assertions);
    // The chain ends have degree 1.
    assert!(!subset.property_assertions.contains(&RelationTriple::new(iri("a24"), iri("p"), iri("a25"))));
    assert!(subset.class_assertions.contains(&Axiom::class_assertion(iri("a3"), ClassExpression::Named(iri("Person")))));

    let manifest = source.manifest();
    assert!(manifest.pages.len() > 7);
    assert!(manifest.pages.iter().all(|p| p.sha256.len() == 64 && p.rows <= 4));
    let total: usize = manifest.pages.iter().filter(|p| p.query.contains("?p a owl:ObjectProperty")).map(|p| p.rows).sum();
    assert_eq!(total, 26);
}

#[test]
fn retries_transient_failures() {
    let (url, hits) = serve(chain_data(), 2);
    let mut source = SparqlSource::new(url, options());
    let subset = extract(&mut source, &ExtractOptions::default(), &UnsatReport::default()).unwrap();
    assert_eq!(subset.property_assertions.len(), 26);
    assert!(hits.load(Ordering::SeqCst) > 2);
}

#[test]
fn unreachable_endpoint_reports_attempts() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/sparql", listener.local_addr().unwrap());
    drop(listener);
    let mut source = SparqlSource::new(url, options());
    let err = extract(&mut source, &ExtractOptions::default(), &UnsatReport::default()).unwrap_err();
    assert!(matches!(err, ExtractError::Unreachable { attempts: 3, .. }));
}
