//! Namespace-aware XML ⇄ element tree, shared by the BPMN and ontology
//! dialects.
//!
//! DTDs are rejected outright (no entity expansion of any kind). Comments and
//! processing instructions are dropped; CDATA sections count as text.

use bpmnowl_core::bpmn::{BpmnElement, QName, XML_NS};
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use quick_xml::XmlVersion;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed XML at line {line}, column {column}: {detail}")]
pub struct XmlError {
    pub line: usize,
    pub column: usize,
    pub detail: String,
}

/// How character data is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextMode {
    /// Whitespace-only text is insignificant. A leaf keeps its text as is;
    /// an element with children keeps its trimmed text segments.
    Document,
    /// A leaf keeps its text even when it is whitespace only.
    Literal,
}

fn position(src: &str, offset: u64) -> (usize, usize) {
    let offset = usize::try_from(offset).unwrap_or(usize::MAX).min(src.len());
    let before = &src.as_bytes()[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let column = before.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
    (line, column)
}

/// Element under construction. Text between two child elements forms one
/// segment.
struct Open {
    element: BpmnElement,
    segments: Vec<String>,
}

impl Open {
    fn push_text(&mut self, s: &str) {
        match self.segments.last_mut() {
            Some(last) => last.push_str(s),
            None => self.segments.push(s.to_string()),
        }
    }

    fn push_child(&mut self, el: BpmnElement) {
        self.element.children.push(el);
        self.segments.push(String::new());
    }
}

type Scope = Vec<(Option<String>, String)>;

fn lookup(scopes: &[Scope], prefix: Option<&str>) -> Option<String> {
    if prefix == Some("xml") {
        return Some(XML_NS.to_string());
    }
    scopes
        .iter()
        .rev()
        .flat_map(|s| s.iter().rev())
        .find(|(p, _)| p.as_deref() == prefix)
        .map(|(_, uri)| uri.clone())
        .filter(|uri| !uri.is_empty())
}

fn split(name: &str) -> (Option<&str>, &str) {
    match name.split_once(':') {
        Some((p, l)) => (Some(p), l),
        None => (None, name),
    }
}

fn predefined(name: &str) -> Option<char> {
    Some(match name {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        _ => return None,
    })
}

/// Parse `src` into an element tree rooted at the document element.
pub fn parse_tree(src: &str, mode: TextMode) -> Result<BpmnElement, XmlError> {
    let mut reader = Reader::from_str(src);
    reader.config_mut().check_end_names = true;
    let fail = |reader: &Reader<&[u8]>, detail: String| {
        let (line, column) = position(src, reader.buffer_position());
        XmlError { line, column, detail }
    };
    let mut stack: Vec<Open> = Vec::new();
    let mut scopes: Vec<Scope> = Vec::new();
    let mut root: Option<BpmnElement> = None;

    let open = |start: &BytesStart, scopes: &mut Vec<Scope>| -> Result<BpmnElement, String> {
        let name = start.name().as_ref().to_string();
        let mut declared: Scope = Vec::new();
        let mut raw_attrs: Vec<(String, String)> = Vec::new();
        for attr in start.attributes() {
            let attr = attr.map_err(|e| e.to_string())?;
            let key = attr.key.as_ref().to_string();
            let value = attr
                .normalized_value(XmlVersion::Implicit1_0)
                .map_err(|e| e.to_string())?
                .into_owned();
            if key == "xmlns" {
                declared.push((None, value));
            } else if let Some(p) = key.strip_prefix("xmlns:") {
                declared.push((Some(p.to_string()), value));
            } else {
                raw_attrs.push((key, value));
            }
        }
        scopes.push(declared.clone());
        let (prefix, local) = split(&name);
        let ns = lookup(scopes, prefix);
        if prefix.is_some() && ns.is_none() {
            return Err(format!("undeclared prefix in `{name}`"));
        }
        let mut el = BpmnElement::new(QName::new(ns.as_deref(), prefix, local));
        el.namespaces = declared;
        for (key, value) in raw_attrs {
            let (prefix, local) = split(&key);
            let ns = match prefix {
                None => None,
                Some(p) => Some(lookup(scopes, Some(p)).ok_or_else(|| format!("undeclared prefix in `{key}`"))?),
            };
            let q = QName::new(ns.as_deref(), prefix, local);
            if el.attributes.iter().any(|(k, _)| k.same_name(&q)) {
                return Err(format!("attribute `{key}` appears twice"));
            }
            el.attributes.push((q, value));
        }
        Ok(el)
    };

    let close = |open: Open, mode: TextMode| -> BpmnElement {
        let mut el = open.element;
        let text = if el.children.is_empty() {
            open.segments.concat()
        } else {
            open.segments.iter().map(|s| s.trim()).collect::<Vec<_>>().concat()
        };
        let keep = match mode {
            TextMode::Literal if el.children.is_empty() => !text.is_empty(),
            _ => !text.trim().is_empty(),
        };
        el.text = keep.then_some(text);
        el
    };

    loop {
        let event = reader.read_event().map_err(|e| fail(&reader, e.to_string()))?;
        match event {
            Event::Start(_) | Event::Empty(_) if root.is_some() => {
                return Err(fail(&reader, "content after the document element".into()));
            }
            Event::Start(start) => {
                let el = open(&start, &mut scopes).map_err(|d| fail(&reader, d))?;
                stack.push(Open {
                    element: el,
                    segments: Vec::new(),
                });
            }
            Event::Empty(start) => {
                let el = open(&start, &mut scopes).map_err(|d| fail(&reader, d))?;
                scopes.pop();
                match stack.last_mut() {
                    Some(parent) => parent.push_child(el),
                    None => root = Some(el),
                }
            }
            Event::End(_) => {
                let done = stack.pop().expect("end names are checked");
                scopes.pop();
                let el = close(done, mode);
                match stack.last_mut() {
                    Some(parent) => parent.push_child(el),
                    None => root = Some(el),
                }
            }
            Event::Text(t) => {
                let text = t.xml10_content();
                match stack.last_mut() {
                    Some(open) => open.push_text(&text),
                    None if text.trim().is_empty() => {}
                    None => return Err(fail(&reader, "text outside the document element".into())),
                }
            }
            Event::CData(c) => {
                let text = c.xml10_content().into_owned();
                match stack.last_mut() {
                    Some(open) => open.push_text(&text),
                    None => return Err(fail(&reader, "CDATA outside the document element".into())),
                }
            }
            Event::GeneralRef(r) => {
                let ch = if r.is_char_ref() {
                    r.resolve_char_ref().map_err(|e| fail(&reader, e.to_string()))?
                } else {
                    predefined(&r)
                };
                let ch = ch.ok_or_else(|| fail(&reader, format!("unknown entity `&{};`", &*r)))?;
                match stack.last_mut() {
                    Some(open) => open.push_text(ch.encode_utf8(&mut [0; 4])),
                    None => return Err(fail(&reader, "reference outside the document element".into())),
                }
            }
            Event::DocType(_) => return Err(fail(&reader, "DTDs are not accepted".into())),
            Event::Decl(_) | Event::PI(_) | Event::Comment(_) => {}
            Event::Eof => break,
        }
    }
    if !stack.is_empty() {
        return Err(fail(&reader, "unexpected end of input".into()));
    }
    root.ok_or_else(|| fail(&reader, "no document element".into()))
}

pub fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
    out
}

pub fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\t' => out.push_str("&#9;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
    out
}

/// Written name of an element or attribute.
pub fn written_name(q: &QName) -> String {
    match &q.prefix {
        Some(p) => format!("{p}:{}", q.local),
        None => q.local.clone(),
    }
}

/// Pretty-print a tree with a two-space indent and an XML declaration,
/// keeping attribute order, namespace declarations and prefixes as stored.
pub fn write_tree(root: &BpmnElement) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    write_element(&mut out, root, 0);
    out
}

fn write_element(out: &mut String, el: &BpmnElement, depth: usize) {
    let indent = "  ".repeat(depth);
    out.push_str(&indent);
    out.push('<');
    out.push_str(&written_name(&el.qname));
    for (prefix, uri) in &el.namespaces {
        match prefix {
            Some(p) => out.push_str(&format!(" xmlns:{p}=\"{}\"", escape_attr(uri))),
            None => out.push_str(&format!(" xmlns=\"{}\"", escape_attr(uri))),
        }
    }
    for (q, v) in &el.attributes {
        out.push_str(&format!(" {}=\"{}\"", written_name(q), escape_attr(v)));
    }
    match (&el.text, el.children.is_empty()) {
        (None, true) => out.push_str("/>\n"),
        (Some(t), true) => {
            out.push('>');
            out.push_str(&escape_text(t));
            out.push_str(&format!("</{}>\n", written_name(&el.qname)));
        }
        (text, false) => {
            out.push('>');
            if let Some(t) = text {
                out.push_str(&escape_text(t));
            }
            out.push('\n');
            for c in &el.children {
                write_element(out, c, depth + 1);
            }
            out.push_str(&indent);
            out.push_str(&format!("</{}>\n", written_name(&el.qname)));
        }
    }
}
