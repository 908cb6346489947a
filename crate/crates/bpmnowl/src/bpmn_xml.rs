//! BPMN 2.0 XML files.

use std::collections::BTreeMap;

use bpmnowl_core::bpmn::{well_known_prefix, BpmnDocument, BpmnElement, DocumentError, XML_NS};

use crate::xml::{escape_attr, escape_text, parse_tree, write_tree, TextMode, XmlError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BpmnXmlError {
    #[error(transparent)]
    Xml(#[from] XmlError),
    #[error(transparent)]
    Document(#[from] DocumentError),
}

pub fn parse_bpmn(src: &str) -> Result<BpmnDocument, BpmnXmlError> {
    Ok(BpmnDocument::new(parse_tree(src, TextMode::Document)?)?)
}

/// Pretty-printed XML keeping element order, attribute order, namespace
/// declarations and prefixes.
pub fn serialize_bpmn(doc: &BpmnDocument) -> String {
    write_tree(doc.root())
}

/// Deterministic comparison form: every namespace bound on the root under a
/// fixed prefix (the usual BPMN prefixes, then `ns1`, `ns2`, … in order of
/// first use), attributes sorted by (namespace, local name), no indentation,
/// no self-closing tags.
pub fn canonicalize(doc: &BpmnDocument) -> String {
    let mut prefixes: BTreeMap<String, String> = BTreeMap::new();
    let mut fresh = 0;
    collect(doc.root(), &mut prefixes, &mut fresh);
    let mut out = String::new();
    write_canonical(&mut out, doc.root(), &prefixes, true);
    out
}

fn collect(el: &BpmnElement, prefixes: &mut BTreeMap<String, String>, fresh: &mut usize) {
    let mut bind = |uri: Option<&str>| {
        let Some(uri) = uri else { return };
        if prefixes.contains_key(uri) {
            return;
        }
        let prefix = match well_known_prefix(uri) {
            Some(p) => p.to_string(),
            None => {
                *fresh += 1;
                format!("ns{fresh}")
            }
        };
        prefixes.insert(uri.to_string(), prefix);
    };
    bind(el.qname.ns());
    for (q, _) in &el.attributes {
        bind(q.ns());
    }
    for c in &el.children {
        collect(c, prefixes, fresh);
    }
}

fn canonical_name(ns: Option<&str>, local: &str, prefixes: &BTreeMap<String, String>) -> String {
    match ns {
        Some(uri) => format!("{}:{local}", prefixes[uri]),
        None => local.to_string(),
    }
}

fn write_canonical(out: &mut String, el: &BpmnElement, prefixes: &BTreeMap<String, String>, root: bool) {
    let name = canonical_name(el.qname.ns(), &el.qname.local, prefixes);
    out.push('<');
    out.push_str(&name);
    if root {
        let mut decls: Vec<(&String, &String)> = prefixes
            .iter()
            .filter(|(uri, _)| uri.as_str() != XML_NS)
            .map(|(uri, p)| (p, uri))
            .collect();
        decls.sort();
        for (p, uri) in decls {
            out.push_str(&format!(" xmlns:{p}=\"{}\"", escape_attr(uri)));
        }
    }
    let mut attrs: Vec<_> = el.attributes.iter().collect();
    attrs.sort_by(|(a, _), (b, _)| (a.ns(), &a.local).cmp(&(b.ns(), &b.local)));
    for (q, v) in attrs {
        out.push_str(&format!(" {}=\"{}\"", canonical_name(q.ns(), &q.local, prefixes), escape_attr(v)));
    }
    out.push('>');
    if let Some(t) = &el.text {
        out.push_str(&escape_text(t));
    }
    for c in &el.children {
        write_canonical(out, c, prefixes, false);
    }
    out.push_str(&format!("</{name}>"));
}
