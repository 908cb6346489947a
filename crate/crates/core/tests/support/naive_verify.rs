//! Brute-force verification: every conformance element against every
//! restriction of the reference, with class lookup and inheritance worked
//! out from the raw ontology and translation entries.

use std::collections::BTreeSet;

use bpmnowl_core::bpmn::{well_known_prefix, BpmnDocument, BpmnElement, CONFORMANCE_NAMESPACES};
use bpmnowl_core::ontology::{Cardinality, Restriction};
use bpmnowl_core::reference::{ReferenceOntology, TranslationTable};
use bpmnowl_core::verify::{FindingKind, VerificationReport};
use bpmnowl_core::Iri;

/// A finding without its prose: kind, element path, subject, constraint
/// (restriction minus its owning class), expected cardinality, actual count.
pub type Row = (FindingKind, Vec<usize>, String, Option<String>, Option<String>, Option<u32>);

pub fn project(report: &VerificationReport) -> Vec<Row> {
    let mut rows: Vec<Row> = report
        .findings
        .iter()
        .map(|f| {
            let constraint = f
                .restriction
                .as_ref()
                .map(|r| r.split_once(' ').expect("owner then constraint").1.to_string());
            (f.kind, f.path.clone(), f.subject.clone(), constraint, f.expected.clone(), f.actual)
        })
        .collect();
    rows.sort();
    rows
}

fn conformance(ns: Option<&str>) -> bool {
    ns.is_some_and(|u| CONFORMANCE_NAMESPACES.contains(&u))
}

fn admits(c: Cardinality, n: u32) -> bool {
    match c {
        Cardinality::Exact(k) => n == k,
        Cardinality::Min(k) => n >= k,
        Cardinality::Max(k) => n <= k,
        Cardinality::Range(lo, hi) => lo <= n && n <= hi,
    }
}

struct Oracle<'a> {
    reference: &'a ReferenceOntology,
    table: &'a TranslationTable,
    rows: Vec<Row>,
}

impl Oracle<'_> {
    /// The class itself and everything above it, by fixpoint iteration.
    fn ancestors(&self, class: &Iri) -> BTreeSet<Iri> {
        let mut set = BTreeSet::from([class.clone()]);
        loop {
            let before = set.len();
            for c in self.reference.ontology.classes() {
                if set.contains(&c.iri) {
                    set.extend(c.superclasses.iter().cloned());
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    fn standard_name(&self, tag: &str, parent: Option<&Iri>) -> String {
        let mut scoped: BTreeSet<&str> = BTreeSet::new();
        let mut direct = None;
        let mut global = None;
        let ancestry = parent.map(|p| self.ancestors(p)).unwrap_or_default();
        for e in self.table.entries() {
            if e.serialized != tag {
                continue;
            }
            match &e.scope {
                None => global = Some(e.standard.as_str()),
                Some(s) if parent.is_some_and(|p| p.local() == s) => direct = Some(e.standard.as_str()),
                Some(s) if ancestry.iter().any(|a| a.local() == s) => {
                    scoped.insert(e.standard.as_str());
                }
                Some(_) => {}
            }
        }
        assert!(scoped.len() <= 1, "oracle cannot rank competing scopes for `{tag}`");
        direct
            .or(scoped.into_iter().next())
            .or(global)
            .unwrap_or(tag)
            .to_string()
    }

    /// `Some(Ok(class))`, `Some(Err(candidate))` for unknown, `None` when
    /// the element is out of scope.
    fn class_of(&self, el: &BpmnElement, parent: Option<&Iri>) -> Option<Result<Iri, Iri>> {
        if !conformance(el.qname.ns()) {
            return None;
        }
        let prefix = well_known_prefix(el.qname.ns().unwrap()).unwrap();
        let standard = self.standard_name(&el.qname.local, parent);
        let mut local: Vec<char> = standard.chars().collect();
        local[0] = local[0].to_ascii_uppercase();
        let iri = Iri::new(prefix, local.into_iter().collect::<String>()).ok()?;
        Some(if self.reference.ontology.class(&iri).is_some() { Ok(iri) } else { Err(iri) })
    }

    fn property_of(&self, el: &BpmnElement, attr: &bpmnowl_core::bpmn::QName) -> Option<Iri> {
        let ns = attr.ns().or(el.qname.ns());
        if !conformance(ns) {
            return None;
        }
        let standard = self
            .table
            .entries()
            .iter()
            .find(|e| e.scope.is_none() && e.serialized == attr.local)
            .map(|e| e.standard.clone())
            .unwrap_or_else(|| attr.local.clone());
        Iri::new(well_known_prefix(ns.unwrap()).unwrap(), standard).ok()
    }

    fn restrictions(&self, class: &Iri) -> Vec<Restriction> {
        let ancestors = self.ancestors(class);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for r in self.reference.ontology.restrictions() {
            if ancestors.contains(&r.subject_class) && seen.insert(constraint(r)) {
                out.push(r.clone());
            }
        }
        out
    }

    fn visit(&mut self, path: Vec<usize>, el: &BpmnElement, parent: Option<&Iri>) {
        let Some(lookup) = self.class_of(el, parent) else {
            return;
        };
        let class = match lookup {
            Ok(c) => Some(c),
            Err(candidate) => {
                self.rows
                    .push((FindingKind::UnknownClass, path.clone(), candidate.to_string(), None, None, None));
                None
            }
        };
        if let Some(class) = &class {
            for (q, _) in &el.attributes {
                if let Some(p) = self.property_of(el, q) {
                    if self.reference.ontology.property(&p).is_none() {
                        self.rows
                            .push((FindingKind::UnknownProperty, path.clone(), p.to_string(), None, None, None));
                    }
                }
            }
            for r in self.restrictions(class) {
                let violation = |actual: u32| {
                    (
                        FindingKind::RestrictionViolation,
                        path.clone(),
                        r.on_property.to_string(),
                        Some(constraint(&r)),
                        Some(r.cardinality.to_string()),
                        Some(actual),
                    )
                };
                match &r.on_class {
                    None => {
                        let values: Vec<&str> = el
                            .attributes
                            .iter()
                            .filter(|(q, _)| self.property_of(el, q).as_ref() == Some(&r.on_property))
                            .map(|(_, v)| v.as_str())
                            .collect();
                        let n = values.len() as u32;
                        if !admits(r.cardinality, n) {
                            self.rows.push(violation(n));
                        }
                        if let Some(dt) = r.on_data_range {
                            for v in values {
                                if !dt.accepts(v) {
                                    self.rows.push(violation(n));
                                }
                            }
                        }
                    }
                    Some(on_class) => {
                        let n = el
                            .children
                            .iter()
                            .filter(|c| match self.class_of(c, Some(class)) {
                                Some(Ok(k)) => self.ancestors(&k).contains(on_class),
                                _ => false,
                            })
                            .count() as u32;
                        if !admits(r.cardinality, n) {
                            self.rows.push(violation(n));
                        }
                    }
                }
            }
        }
        for (i, child) in el.children.iter().enumerate() {
            let mut p = path.clone();
            p.push(i);
            self.visit(p, child, class.as_ref());
        }
    }
}

fn constraint(r: &Restriction) -> String {
    let mut s = format!("{} {}", r.on_property, r.cardinality);
    if let Some(c) = &r.on_class {
        s.push_str(&format!(" onClass {c}"));
    }
    if let Some(d) = &r.on_data_range {
        s.push_str(&format!(" onDataRange {d}"));
    }
    s
}

pub fn naive_findings(doc: &BpmnDocument, reference: &ReferenceOntology, table: &TranslationTable) -> Vec<Row> {
    let mut oracle = Oracle {
        reference,
        table,
        rows: Vec::new(),
    };
    oracle.visit(Vec::new(), doc.root(), None);
    oracle.rows.sort();
    oracle.rows
}
