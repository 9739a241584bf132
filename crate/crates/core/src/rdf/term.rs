use std::fmt;

use crate::model::Iri;

/// An RDF term. Derived ordering puts IRIs before blank nodes before literals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(String),
    Literal {
        value: String,
        datatype: Iri,
        language: Option<String>,
    },
}

impl Term {
    pub fn iri(value: &str) -> Term {
        Term::Iri(Iri::new_unchecked(value))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_blank(&self) -> Option<&str> {
        match self {
            Term::Blank(label) => Some(label),
            _ => None,
        }
    }

    pub fn is_iri(&self, value: &str) -> bool {
        matches!(self, Term::Iri(iri) if iri.as_str() == value)
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Blank(label) => write!(f, "_:{label}"),
            Term::Literal {
                value,
                datatype,
                language,
            } => {
                write!(f, "{value:?}")?;
                match language {
                    Some(lang) => write!(f, "@{lang}"),
                    None => write!(f, "^^<{datatype}>"),
                }
            }
        }
    }
}

/// One RDF statement. The predicate is always an IRI.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleRecord {
    pub subject: Term,
    pub predicate: Iri,
    pub object: Term,
}

impl TripleRecord {
    pub fn new(subject: Term, predicate: Iri, object: Term) -> Self {
        TripleRecord {
            subject,
            predicate,
            object,
        }
    }
}

impl fmt::Display for TripleRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <{}> {} .", self.subject, self.predicate, self.object)
    }
}
