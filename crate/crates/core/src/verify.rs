//! Conformance checking of a BPMN document against the reference ontology.
//!
//! Each element in a conformance namespace is checked three ways:
//!
//! 1. its translated tag must name a reference class;
//! 2. each of its attributes must be a declared property;
//! 3. every effective restriction of its class must hold. Restrictions
//!    without `on_class` count XML attributes (and check their data range
//!    lexically); restrictions with `on_class` count child elements whose
//!    class is `on_class` or a subclass of it.
//!
//! Children are visited against their own classes, so every element held to
//! a child-kind restriction is also checked against its own inherited
//! restrictions. Subtrees rooted outside the conformance namespaces are
//! skipped.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::bpmn::{BpmnDocument, BpmnElement, ElementPath};
use crate::iri::Iri;
use crate::ontology::{Cardinality, Restriction};
use crate::reference::{ClassLookup, ReferenceOntology, TranslationTable};
use crate::transform::{ModelOntology, TransformError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FindingKind {
    UnknownClass,
    UnknownProperty,
    RestrictionViolation,
}

impl FindingKind {
    pub const ALL: [FindingKind; 3] = [
        FindingKind::UnknownClass,
        FindingKind::UnknownProperty,
        FindingKind::RestrictionViolation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FindingKind::UnknownClass => "unknown-class",
            FindingKind::UnknownProperty => "unknown-property",
            FindingKind::RestrictionViolation => "restriction-violation",
        }
    }
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for FindingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FindingKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown finding kind `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Finding {
    pub kind: FindingKind,
    pub severity: Severity,
    /// Child indices from the root.
    pub path: Vec<usize>,
    /// Readable location, e.g. `/bpmn2:definitions/bpmn2:process[1]`.
    pub location: String,
    /// Element tag as written.
    pub tag: String,
    /// Unknown class, unknown property or the restricted property.
    pub subject: String,
    /// Rendered restriction for violations.
    pub restriction: Option<String>,
    pub expected: Option<String>,
    pub actual: Option<u32>,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}", self.severity, self.kind, self.location, self.message)
    }
}

/// Which findings are reported as warnings instead of errors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeverityPolicy {
    pub warn_kinds: BTreeSet<FindingKind>,
    /// Class or property IRIs (as `prefix:local`) whose findings are warnings.
    pub warn_subjects: BTreeSet<String>,
}

impl SeverityPolicy {
    pub fn severity(&self, kind: FindingKind, subject: &str) -> Severity {
        if self.warn_kinds.contains(&kind) || self.warn_subjects.contains(subject) {
            Severity::Warning
        } else {
            Severity::Error
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Counts {
    pub unknown_class: usize,
    pub unknown_property: usize,
    pub restriction_violation: usize,
    pub errors: usize,
    pub warnings: usize,
}

impl Counts {
    pub fn of(&self, kind: FindingKind) -> usize {
        match kind {
            FindingKind::UnknownClass => self.unknown_class,
            FindingKind::UnknownProperty => self.unknown_property,
            FindingKind::RestrictionViolation => self.restriction_violation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub model: String,
    pub reference_version: String,
    pub findings: Vec<Finding>,
    pub counts: Counts,
}

impl VerificationReport {
    fn new(model: &str, reference_version: &str, findings: Vec<Finding>) -> Self {
        let mut counts = Counts::default();
        for f in &findings {
            match f.kind {
                FindingKind::UnknownClass => counts.unknown_class += 1,
                FindingKind::UnknownProperty => counts.unknown_property += 1,
                FindingKind::RestrictionViolation => counts.restriction_violation += 1,
            }
            match f.severity {
                Severity::Error => counts.errors += 1,
                Severity::Warning => counts.warnings += 1,
            }
        }
        VerificationReport {
            model: model.to_string(),
            reference_version: reference_version.to_string(),
            findings,
            counts,
        }
    }

    pub fn passed(&self) -> bool {
        self.counts.errors == 0
    }

    pub fn with_model(mut self, model: impl Into<String>) -> Self {
        self.model = model.into();
        self
    }
}

struct Checker<'a> {
    doc: &'a BpmnDocument,
    reference: &'a ReferenceOntology,
    table: &'a TranslationTable,
    policy: &'a SeverityPolicy,
    findings: Vec<Finding>,
}

impl Checker<'_> {
    fn push(
        &mut self,
        kind: FindingKind,
        path: &ElementPath,
        el: &BpmnElement,
        subject: String,
        restriction: Option<(&Restriction, u32)>,
        message: String,
    ) {
        self.findings.push(Finding {
            kind,
            severity: self.policy.severity(kind, &subject),
            path: path.0.clone(),
            location: self.doc.describe(path),
            tag: el.qname.to_string(),
            subject,
            restriction: restriction.map(|(r, _)| r.to_string()),
            expected: restriction.map(|(r, _)| r.cardinality.to_string()),
            actual: restriction.map(|(_, n)| n),
            message,
        });
    }

    fn visit(&mut self, path: &ElementPath, el: &BpmnElement, parent: Option<&Iri>) {
        if !el.qname.is_conformance() {
            return;
        }
        let class = match self.reference.class_for(&el.qname, parent, self.table) {
            ClassLookup::Ignored => return,
            ClassLookup::Known(class) => Some(class),
            ClassLookup::Unknown(candidate) => {
                let message = format!("`{}` is not a reference class (looked up `{candidate}`)", el.qname);
                self.push(FindingKind::UnknownClass, path, el, candidate.to_string(), None, message);
                None
            }
        };
        if let Some(class) = &class {
            self.check_attributes(path, el);
            self.check_restrictions(path, el, class);
        }
        for (i, child) in el.children.iter().enumerate() {
            self.visit(&path.child(i), child, class.as_ref());
        }
    }

    fn check_attributes(&mut self, path: &ElementPath, el: &BpmnElement) {
        for (q, _) in &el.attributes {
            let Some(property) = self.reference.property_for(&el.qname, q, self.table) else {
                continue;
            };
            if self.reference.ontology.property(&property).is_none() {
                let message = format!("attribute `{q}` is not a reference property (looked up `{property}`)");
                self.push(FindingKind::UnknownProperty, path, el, property.to_string(), None, message);
            }
        }
    }

    fn check_restrictions(&mut self, path: &ElementPath, el: &BpmnElement, class: &Iri) {
        let ontology = &self.reference.ontology;
        let restrictions = ontology
            .effective_restrictions(class)
            .expect("class came from the reference");
        for r in &restrictions {
            match &r.on_class {
                None => {
                    let values: Vec<&str> = el
                        .attributes
                        .iter()
                        .filter(|(q, _)| self.reference.property_for(&el.qname, q, self.table).as_ref() == Some(&r.on_property))
                        .map(|(_, v)| v.as_str())
                        .collect();
                    let count = values.len() as u32;
                    if !r.cardinality.admits(values.len()) {
                        let message = format!(
                            "`{}` expects {} `{}` attribute(s), found {count}",
                            el.qname,
                            describe(r.cardinality),
                            r.on_property.local()
                        );
                        self.push(
                            FindingKind::RestrictionViolation,
                            path,
                            el,
                            r.on_property.to_string(),
                            Some((r, count)),
                            message,
                        );
                    }
                    if let Some(dt) = r.on_data_range {
                        for value in values {
                            if !dt.accepts(value) {
                                let message = format!(
                                    "attribute `{}` value {value:?} is not a valid {dt}",
                                    r.on_property.local()
                                );
                                self.push(
                                    FindingKind::RestrictionViolation,
                                    path,
                                    el,
                                    r.on_property.to_string(),
                                    Some((r, count)),
                                    message,
                                );
                            }
                        }
                    }
                }
                Some(on_class) => {
                    let count = el
                        .children
                        .iter()
                        .filter(|c| c.qname.is_conformance())
                        .filter(|c| match self.reference.class_for(&c.qname, Some(class), self.table) {
                            ClassLookup::Known(k) => ontology.is_subclass_of(&k, on_class),
                            _ => false,
                        })
                        .count();
                    if !r.cardinality.admits(count) {
                        let count = count as u32;
                        let message = format!(
                            "`{}` expects {} `{}` child element(s) of class `{on_class}`, found {count}",
                            el.qname,
                            describe(r.cardinality),
                            r.on_property.local()
                        );
                        self.push(
                            FindingKind::RestrictionViolation,
                            path,
                            el,
                            r.on_property.to_string(),
                            Some((r, count)),
                            message,
                        );
                    }
                }
            }
        }
    }
}

fn describe(c: Cardinality) -> String {
    match c {
        Cardinality::Exact(n) => format!("exactly {n}"),
        Cardinality::Min(n) => format!("at least {n}"),
        Cardinality::Max(n) => format!("at most {n}"),
        Cardinality::Range(lo, hi) => format!("{lo} to {hi}"),
    }
}

/// Verify with every finding reported as an error.
pub fn verify(doc: &BpmnDocument, reference: &ReferenceOntology, table: &TranslationTable) -> VerificationReport {
    verify_with(doc, reference, table, &SeverityPolicy::default())
}

pub fn verify_with(
    doc: &BpmnDocument,
    reference: &ReferenceOntology,
    table: &TranslationTable,
    policy: &SeverityPolicy,
) -> VerificationReport {
    let mut checker = Checker {
        doc,
        reference,
        table,
        policy,
        findings: Vec::new(),
    };
    checker.visit(&ElementPath::root(), doc.root(), None);
    VerificationReport::new("", &reference.version, checker.findings)
}

/// Verify the element view a model ontology records.
pub fn verify_model(
    model: &ModelOntology,
    reference: &ReferenceOntology,
    table: &TranslationTable,
    policy: &SeverityPolicy,
) -> Result<VerificationReport, TransformError> {
    let doc = model.to_bpmn()?;
    Ok(verify_with(&doc, reference, table, policy))
}
