use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

/// Compact IRI of the form `prefix:local`.
///
/// Both segments are XML NCNames so an IRI can be rendered as a qualified
/// element name in the ontology dialect.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "String", into = "String"))]
pub struct Iri {
    prefix: String,
    local: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IriError {
    #[error("IRI `{0}` is missing the `prefix:` part")]
    MissingPrefix(String),
    #[error("IRI `{0}` has an empty local name")]
    EmptyLocal(String),
    #[error("`{segment}` in IRI `{iri}` is not a valid name")]
    InvalidName { iri: String, segment: String },
}

/// Namespaces the ontology dialect itself uses.
pub const RDF: &str = "rdf";
pub const RDFS: &str = "rdfs";
pub const OWL: &str = "owl";
pub const XSD: &str = "xsd";

pub const RDF_URI: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_URI: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL_URI: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD_URI: &str = "http://www.w3.org/2001/XMLSchema#";

/// Prefixes that are always declared and may not be re-bound by an ontology.
pub const RESERVED_PREFIXES: [(&str, &str); 4] =
    [(RDF, RDF_URI), (RDFS, RDFS_URI), (OWL, OWL_URI), (XSD, XSD_URI)];

pub fn is_reserved_prefix(prefix: &str) -> bool {
    RESERVED_PREFIXES.iter().any(|(p, _)| *p == prefix)
}

/// True when `s` is a non-empty XML NCName (ASCII subset plus any non-ASCII
/// letter).
pub fn is_ncname(s: &str) -> bool {
    let mut chars = s.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    let start_ok = |c: char| c.is_alphabetic() || c == '_';
    start_ok(first) && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

impl Iri {
    pub fn new(prefix: impl Into<String>, local: impl Into<String>) -> Result<Self, IriError> {
        let prefix = prefix.into();
        let local = local.into();
        let rendered = || alloc::format!("{prefix}:{local}");
        if prefix.is_empty() {
            return Err(IriError::MissingPrefix(rendered()));
        }
        if local.is_empty() {
            return Err(IriError::EmptyLocal(rendered()));
        }
        for segment in [&prefix, &local] {
            if !is_ncname(segment) {
                return Err(IriError::InvalidName {
                    iri: rendered(),
                    segment: segment.clone(),
                });
            }
        }
        Ok(Iri { prefix, local })
    }

    /// The root class every class is ultimately a subclass of.
    pub fn thing() -> Self {
        Iri {
            prefix: OWL.to_string(),
            local: "Thing".to_string(),
        }
    }

    pub fn is_thing(&self) -> bool {
        self.prefix == OWL && self.local == "Thing"
    }

    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    pub fn local(&self) -> &str {
        &self.local
    }

    /// Same prefix, different local name.
    pub fn sibling(&self, local: impl Into<String>) -> Result<Self, IriError> {
        Iri::new(self.prefix.clone(), local)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.prefix, self.local)
    }
}

impl FromStr for Iri {
    type Err = IriError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            Some((prefix, local)) => Iri::new(prefix, local),
            None => Err(IriError::MissingPrefix(s.to_string())),
        }
    }
}

impl TryFrom<String> for Iri {
    type Error = IriError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<Iri> for String {
    fn from(iri: Iri) -> Self {
        iri.to_string()
    }
}

/// Literal datatypes understood by the ontology dialect.
///
/// `IdRef` marks id-valued literals that could not be expressed as an object
/// relationship.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Datatype {
    String,
    Integer,
    Boolean,
    IdRef,
    AnyType,
}

impl Datatype {
    pub const ALL: [Datatype; 5] = [
        Datatype::String,
        Datatype::Integer,
        Datatype::Boolean,
        Datatype::IdRef,
        Datatype::AnyType,
    ];

    /// Local name under the `xsd:` prefix.
    pub fn xsd_local(self) -> &'static str {
        match self {
            Datatype::String => "string",
            Datatype::Integer => "integer",
            Datatype::Boolean => "boolean",
            Datatype::IdRef => "IDREF",
            Datatype::AnyType => "anyType",
        }
    }

    pub fn from_xsd_local(local: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.xsd_local() == local)
    }

    pub fn iri(self) -> Iri {
        Iri {
            prefix: XSD.to_string(),
            local: self.xsd_local().to_string(),
        }
    }

    /// Lexical check of a literal against this datatype.
    pub fn accepts(self, value: &str) -> bool {
        match self {
            Datatype::String | Datatype::AnyType => true,
            Datatype::Integer => {
                let digits = value.strip_prefix(['-', '+']).unwrap_or(value);
                !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
            }
            Datatype::Boolean => matches!(value, "true" | "false"),
            Datatype::IdRef => !value.is_empty() && !value.chars().any(char::is_whitespace),
        }
    }

    /// Narrowest datatype whose lexical space contains `value`, never `IdRef`.
    pub fn infer(value: &str) -> Self {
        if Datatype::Boolean.accepts(value) {
            Datatype::Boolean
        } else if Datatype::Integer.accepts(value) {
            Datatype::Integer
        } else {
            Datatype::String
        }
    }
}

impl fmt::Display for Datatype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{XSD}:{}", self.xsd_local())
    }
}
