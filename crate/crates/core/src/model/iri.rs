use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ModelError;

/// An absolute IRI. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(Arc<str>);

impl Iri {
    /// Parses an absolute IRI. Only the presence of a scheme is checked.
    pub fn new(value: impl AsRef<str>) -> Result<Self, ModelError> {
        let value = value.as_ref();
        if has_scheme(value) && !value.chars().any(|c| c.is_whitespace() || c == '<' || c == '>')
        {
            Ok(Iri(Arc::from(value)))
        } else {
            Err(ModelError::InvalidIri(value.to_owned()))
        }
    }

    /// Wraps a string without validation. Intended for vocabulary constants
    /// and values already validated by a parser.
    pub fn new_unchecked(value: impl AsRef<str>) -> Self {
        Iri(Arc::from(value.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn has_scheme(value: &str) -> bool {
    let Some(colon) = value.find(':') else {
        return false;
    };
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Serialize for Iri {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Iri {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Iri::new(s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn requires_scheme() {
        assert!(Iri::new("http://example.org/a").is_ok());
        assert!(Iri::new("urn:x:y").is_ok());
        assert!(Iri::new("a").is_err());
        assert!(Iri::new(":a").is_err());
        assert!(Iri::new("1http://x").is_err());
        assert!(Iri::new("http://exa mple").is_err());
    }
}
