//! Typed, id-indexed BPMN 2.0 element tree.
//!
//! The tree keeps every element of the source document, including diagram
//! interchange and vendor extension subtrees, so that a document can be
//! written back without loss. Only elements in [`CONFORMANCE_NAMESPACES`]
//! take part in verification and translation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

pub const MODEL_NS: &str = "http://www.omg.org/spec/BPMN/20100524/MODEL";
pub const DI_NS: &str = "http://www.omg.org/spec/BPMN/20100524/DI";
pub const DC_NS: &str = "http://www.omg.org/spec/DD/20100524/DC";
pub const DD_DI_NS: &str = "http://www.omg.org/spec/DD/20100524/DI";
pub const XSI_NS: &str = "http://www.w3.org/2001/XMLSchema-instance";
pub const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";

/// Namespaces whose elements and attributes are checked against the
/// reference ontology. Everything else is carried along untouched.
pub const CONFORMANCE_NAMESPACES: [&str; 2] = [MODEL_NS, DI_NS];

/// Fixed prefixes for well-known namespaces.
pub const WELL_KNOWN_PREFIXES: [(&str, &str); 6] = [
    (MODEL_NS, "bpmn2"),
    (DI_NS, "bpmndi"),
    (DC_NS, "dc"),
    (DD_DI_NS, "di"),
    (XSI_NS, "xsi"),
    (XML_NS, "xml"),
];

pub fn well_known_prefix(uri: &str) -> Option<&'static str> {
    WELL_KNOWN_PREFIXES
        .iter()
        .find(|(u, _)| *u == uri)
        .map(|(_, p)| *p)
}

pub fn is_conformance_namespace(uri: Option<&str>) -> bool {
    uri.is_some_and(|u| CONFORMANCE_NAMESPACES.contains(&u))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QName {
    /// `None` for names outside any namespace (most BPMN attributes).
    pub namespace_uri: Option<String>,
    pub local: String,
    /// Prefix used in the source, kept so the document can be rewritten
    /// with the same spelling.
    pub prefix: Option<String>,
}

impl QName {
    pub fn new(namespace_uri: Option<&str>, prefix: Option<&str>, local: &str) -> Self {
        QName {
            namespace_uri: namespace_uri.map(ToString::to_string),
            local: local.to_string(),
            prefix: prefix.map(ToString::to_string),
        }
    }

    /// Unqualified attribute name.
    pub fn local(local: &str) -> Self {
        QName::new(None, None, local)
    }

    /// Element in the BPMN model namespace written with the `bpmn2` prefix.
    pub fn model(local: &str) -> Self {
        QName::new(Some(MODEL_NS), Some("bpmn2"), local)
    }

    pub fn ns(&self) -> Option<&str> {
        self.namespace_uri.as_deref()
    }

    pub fn is_conformance(&self) -> bool {
        is_conformance_namespace(self.ns())
    }

    pub fn is_model(&self, local: &str) -> bool {
        self.ns() == Some(MODEL_NS) && self.local == local
    }

    /// Same namespace and local name, spelling ignored.
    pub fn same_name(&self, other: &QName) -> bool {
        self.namespace_uri == other.namespace_uri && self.local == other.local
    }
}

impl fmt::Display for QName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.prefix {
            Some(p) => write!(f, "{p}:{}", self.local),
            None => f.write_str(&self.local),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpmnElement {
    pub qname: QName,
    /// `xmlns` declarations made on this element, in source order. A `None`
    /// prefix is the default namespace.
    pub namespaces: Vec<(Option<String>, String)>,
    pub attributes: Vec<(QName, String)>,
    pub children: Vec<BpmnElement>,
    pub text: Option<String>,
}

impl BpmnElement {
    pub fn new(qname: QName) -> Self {
        BpmnElement {
            qname,
            namespaces: Vec::new(),
            attributes: Vec::new(),
            children: Vec::new(),
            text: None,
        }
    }

    pub fn with_attr(mut self, name: &str, value: &str) -> Self {
        self.attributes.push((QName::local(name), value.to_string()));
        self
    }

    pub fn with_child(mut self, child: BpmnElement) -> Self {
        self.children.push(child);
        self
    }

    pub fn with_text(mut self, text: &str) -> Self {
        self.text = Some(text.to_string());
        self
    }

    /// Value of the unqualified `id` attribute.
    pub fn id(&self) -> Option<&str> {
        self.attr("id")
    }

    /// Value of an unqualified attribute.
    pub fn attr(&self, local: &str) -> Option<&str> {
        self.attributes
            .iter()
            .find(|(q, _)| q.namespace_uri.is_none() && q.local == local)
            .map(|(_, v)| v.as_str())
    }

    pub fn name(&self) -> Option<&str> {
        self.attr("name")
    }

    pub fn children_named<'a>(&'a self, local: &'a str) -> impl Iterator<Item = &'a BpmnElement> + 'a {
        self.children.iter().filter(move |c| c.qname.is_model(local))
    }

    /// Number of elements in this subtree, the element included.
    pub fn subtree_len(&self) -> usize {
        1 + self.children.iter().map(BpmnElement::subtree_len).sum::<usize>()
    }
}

/// Position of an element as child indices from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementPath(pub Vec<usize>);

impl ElementPath {
    pub fn root() -> Self {
        ElementPath(Vec::new())
    }

    pub fn child(&self, index: usize) -> Self {
        let mut v = self.0.clone();
        v.push(index);
        ElementPath(v)
    }

    pub fn parent(&self) -> Option<ElementPath> {
        let mut v = self.0.clone();
        v.pop().map(|_| ElementPath(v))
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("document root is `{0}`, expected `definitions`")]
    RootNotDefinitions(String),
    #[error("duplicate id `{id}` at {path}")]
    DuplicateId { id: String, path: String },
    #[error("attribute `{attribute}` appears twice at {path}")]
    DuplicateAttribute { attribute: String, path: String },
}

/// Attribute names treated as id references when collecting dangling
/// references.
fn is_reference_attribute(local: &str) -> bool {
    local.ends_with("Ref")
        || matches!(
            local,
            "bpmnElement" | "sourceElement" | "targetElement" | "default" | "attachedToRef"
        )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpmnDocument {
    root: BpmnElement,
    namespace_map: BTreeMap<String, String>,
    id_index: BTreeMap<String, ElementPath>,
    external_refs: Vec<(ElementPath, String)>,
}

impl BpmnDocument {
    pub fn new(root: BpmnElement) -> Result<Self, DocumentError> {
        if root.qname.local != "definitions" {
            return Err(DocumentError::RootNotDefinitions(root.qname.to_string()));
        }
        let mut doc = BpmnDocument {
            root,
            namespace_map: BTreeMap::new(),
            id_index: BTreeMap::new(),
            external_refs: Vec::new(),
        };
        let mut stack = alloc::vec![(ElementPath::root(), &doc.root)];
        let mut namespace_map = BTreeMap::new();
        let mut id_index = BTreeMap::new();
        while let Some((path, el)) = stack.pop() {
            for (prefix, uri) in &el.namespaces {
                namespace_map
                    .entry(prefix.clone().unwrap_or_default())
                    .or_insert_with(|| uri.clone());
            }
            for (i, (q, _)) in el.attributes.iter().enumerate() {
                if el.attributes[..i].iter().any(|(other, _)| other.same_name(q)) {
                    return Err(DocumentError::DuplicateAttribute {
                        attribute: q.to_string(),
                        path: doc.describe_in(&doc.root, &path),
                    });
                }
            }
            if let Some(id) = el.id() {
                if id_index.insert(id.to_string(), path.clone()).is_some() {
                    return Err(DocumentError::DuplicateId {
                        id: id.to_string(),
                        path: doc.describe_in(&doc.root, &path),
                    });
                }
            }
            for (i, child) in el.children.iter().enumerate().rev() {
                stack.push((path.child(i), child));
            }
        }
        let mut external_refs = Vec::new();
        for (path, el) in doc.walk() {
            for (q, value) in &el.attributes {
                if q.namespace_uri.is_none()
                    && is_reference_attribute(&q.local)
                    && !id_index.contains_key(value.as_str())
                {
                    external_refs.push((path.clone(), q.local.clone()));
                }
            }
        }
        doc.namespace_map = namespace_map;
        doc.id_index = id_index;
        doc.external_refs = external_refs;
        Ok(doc)
    }

    pub fn root(&self) -> &BpmnElement {
        &self.root
    }

    pub fn into_root(self) -> BpmnElement {
        self.root
    }

    /// Prefix (empty for the default namespace) → URI, first declaration
    /// wins.
    pub fn namespace_map(&self) -> &BTreeMap<String, String> {
        &self.namespace_map
    }

    pub fn id_index(&self) -> &BTreeMap<String, ElementPath> {
        &self.id_index
    }

    /// Reference-like attributes whose value names no element in this
    /// document.
    pub fn external_refs(&self) -> &[(ElementPath, String)] {
        &self.external_refs
    }

    pub fn element(&self, path: &ElementPath) -> Option<&BpmnElement> {
        path.0
            .iter()
            .try_fold(&self.root, |el, &i| el.children.get(i))
    }

    /// Element whose id equals `value` exactly.
    pub fn resolve_reference(&self, value: &str) -> Option<&BpmnElement> {
        self.id_index.get(value).and_then(|p| self.element(p))
    }

    pub fn path_of_id(&self, id: &str) -> Option<&ElementPath> {
        self.id_index.get(id)
    }

    /// Pre-order traversal with paths.
    pub fn walk(&self) -> Walk<'_> {
        Walk {
            stack: alloc::vec![(ElementPath::root(), &self.root)],
        }
    }

    pub fn element_count(&self) -> usize {
        self.root.subtree_len()
    }

    /// Human-readable location such as
    /// `/bpmn2:definitions/bpmn2:process[1]/bpmn2:task[2]`; indices count
    /// same-named siblings from 1.
    pub fn describe(&self, path: &ElementPath) -> String {
        self.describe_in(&self.root, path)
    }

    fn describe_in(&self, root: &BpmnElement, path: &ElementPath) -> String {
        let mut out = format!("/{}", root.qname);
        let mut el = root;
        for &i in &path.0 {
            let Some(child) = el.children.get(i) else {
                out.push_str("/?");
                break;
            };
            let position = el.children[..=i]
                .iter()
                .filter(|c| c.qname.same_name(&child.qname))
                .count();
            out.push_str(&format!("/{}[{}]", child.qname, position));
            el = child;
        }
        out
    }
}

pub struct Walk<'a> {
    stack: Vec<(ElementPath, &'a BpmnElement)>,
}

impl<'a> Iterator for Walk<'a> {
    type Item = (ElementPath, &'a BpmnElement);

    fn next(&mut self) -> Option<Self::Item> {
        let (path, el) = self.stack.pop()?;
        for (i, child) in el.children.iter().enumerate().rev() {
            self.stack.push((path.child(i), child));
        }
        Some((path, el))
    }
}
