//! Core algorithms for moving BPMN 2.0 process models through an OWL-style
//! ontology representation.
//!
//! The crate is `no_std` and only needs `alloc`. It owns the data models and
//! every transformation between them; byte-level formats (XML dialects, JSON
//! scenarios and traces) live in the `bpmnowl` companion crate.
//!
//! * [`ontology`] – classes, properties, cardinality restrictions, named
//!   individuals, superclass closure and structural diff.
//! * [`bpmn`] – the id-indexed BPMN element tree.
//! * [`reference`] – the embedded BPMN reference ontology subset and the
//!   standard/serialized name translation table.
//! * [`transform`] – BPMN document ⇄ model ontology.
//! * [`verify`] – conformance checking of a document against the reference.
//! * [`sbpm`] – subject-oriented models, the BPMN → S-BPM translator and the
//!   S-BPM ontology mapping.
//! * [`engine`] – deterministic actor-style execution of S-BPM models.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bpmn;
pub mod engine;
pub mod iri;
pub mod ontology;
pub mod reference;
pub mod sbpm;
pub mod transform;
pub mod verify;

pub use iri::{Datatype, Iri, IriError};
pub use ontology::{Ontology, OntologyError};
