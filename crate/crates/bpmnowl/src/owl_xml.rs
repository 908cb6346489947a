//! The `.owl` file dialect.
//!
//! ```text
//! <rdf:RDF xmlns:…>                      every prefix, declared once
//!   <owl:Ontology rdf:about=…>           header and its annotations
//!   <owl:ObjectProperty rdf:about=…>     optional rdfs:range
//!   <owl:DatatypeProperty rdf:about=…>   rdfs:range xsd:…
//!   <owl:Restriction>                    owl:restricts, owl:onProperty,
//!                                        cardinality, owl:onClass | owl:onDataRange
//!   <owl:NamedIndividual rdf:about=…>    rdf:type, property elements,
//!                                        rdf:value, owl:annotation
//!   <owl:Class rdf:about=…>              rdfs:subClassOf, owl:annotation
//! </rdf:RDF>
//! ```
//!
//! Parts are written in that order and in declaration order within a part.
//! IRIs are written in their compact `prefix:local` form.

use bpmnowl_core::bpmn::{BpmnElement, QName};
use bpmnowl_core::iri::{is_reserved_prefix, Datatype, Iri, OWL_URI, RDFS_URI, RDF_URI, RESERVED_PREFIXES, XSD};
use bpmnowl_core::ontology::{
    Cardinality, DataAssertion, NamedIndividual, ObjectAssertion, OntoClass, Ontology, OntologyError, OntologyParts,
    PropertyDecl, PropertyRange, Restriction,
};

use crate::xml::{parse_tree, write_tree, TextMode, XmlError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OwlXmlError {
    #[error(transparent)]
    Xml(#[from] XmlError),
    #[error("{path}: {detail}")]
    Format { path: String, detail: String },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

fn rdf(local: &str) -> QName {
    QName::new(Some(RDF_URI), Some("rdf"), local)
}

fn rdfs(local: &str) -> QName {
    QName::new(Some(RDFS_URI), Some("rdfs"), local)
}

fn owl(local: &str) -> QName {
    QName::new(Some(OWL_URI), Some("owl"), local)
}

fn node(q: QName) -> BpmnElement {
    BpmnElement::new(q)
}

fn with(mut el: BpmnElement, attr: QName, value: &str) -> BpmnElement {
    el.attributes.push((attr, value.to_string()));
    el
}

fn about(q: QName, iri: &Iri) -> BpmnElement {
    with(node(q), rdf("about"), &iri.to_string())
}

fn resource(q: QName, iri: &Iri) -> BpmnElement {
    with(node(q), rdf("resource"), &iri.to_string())
}

fn annotation(key: &str, text: &str) -> BpmnElement {
    let mut el = with(node(owl("annotation")), owl("key"), key);
    el.text = Some(text.to_string());
    el
}

fn count(q: QName, n: u32) -> BpmnElement {
    let mut el = with(node(q), rdf("datatype"), "xsd:nonNegativeInteger");
    el.text = Some(n.to_string());
    el
}

pub fn serialize_owl(o: &Ontology) -> String {
    let mut root = node(rdf("RDF"));
    for (p, uri) in RESERVED_PREFIXES {
        root.namespaces.push((Some(p.to_string()), uri.to_string()));
    }
    for (p, uri) in o.namespaces() {
        root.namespaces.push((Some(p.clone()), uri.clone()));
    }

    let mut header = about(owl("Ontology"), o.header_iri());
    for (k, v) in o.annotations() {
        header.children.push(annotation(k, v));
    }
    root.children.push(header);

    let (object, data): (Vec<&PropertyDecl>, Vec<&PropertyDecl>) =
        o.properties().partition(|p| matches!(p.range, PropertyRange::Object(_)));
    for p in object {
        let mut el = about(owl("ObjectProperty"), &p.iri);
        if let PropertyRange::Object(Some(range)) = &p.range {
            el.children.push(resource(rdfs("range"), range));
        }
        root.children.push(el);
    }
    for p in data {
        let mut el = about(owl("DatatypeProperty"), &p.iri);
        if let PropertyRange::Data(dt) = &p.range {
            el.children.push(resource(rdfs("range"), &dt.iri()));
        }
        root.children.push(el);
    }
    for r in o.restrictions() {
        let mut el = node(owl("Restriction"));
        el.children.push(resource(owl("restricts"), &r.subject_class));
        el.children.push(resource(owl("onProperty"), &r.on_property));
        match r.cardinality {
            Cardinality::Exact(n) => el.children.push(count(owl("qualifiedCardinality"), n)),
            Cardinality::Min(n) => el.children.push(count(owl("minQualifiedCardinality"), n)),
            Cardinality::Max(n) => el.children.push(count(owl("maxQualifiedCardinality"), n)),
            Cardinality::Range(lo, hi) => {
                el.children.push(count(owl("minQualifiedCardinality"), lo));
                el.children.push(count(owl("maxQualifiedCardinality"), hi));
            }
        }
        if let Some(c) = &r.on_class {
            el.children.push(resource(owl("onClass"), c));
        }
        if let Some(dt) = &r.on_data_range {
            el.children.push(resource(owl("onDataRange"), &dt.iri()));
        }
        root.children.push(el);
    }
    for i in o.individuals() {
        let mut el = about(owl("NamedIndividual"), &i.iri);
        for ty in &i.types {
            el.children.push(resource(rdf("type"), ty));
        }
        let property = |iri: &Iri| {
            QName::new(o.namespace_uri(iri.prefix()), Some(iri.prefix()), iri.local())
        };
        for a in &i.data_assertions {
            let mut p = with(node(property(&a.property)), rdf("datatype"), &a.datatype.iri().to_string());
            p.text = Some(a.value.clone()).filter(|v| !v.is_empty());
            el.children.push(p);
        }
        for a in &i.object_assertions {
            el.children.push(resource(property(&a.property), &a.target));
        }
        if let Some(t) = &i.text_content {
            let mut v = node(rdf("value"));
            v.text = Some(t.clone());
            el.children.push(v);
        }
        for (k, v) in &i.annotations {
            el.children.push(annotation(k, v));
        }
        root.children.push(el);
    }
    for c in o.classes() {
        let mut el = about(owl("Class"), &c.iri);
        for s in &c.superclasses {
            el.children.push(resource(rdfs("subClassOf"), s));
        }
        for (k, v) in &c.annotations {
            el.children.push(annotation(k, v));
        }
        root.children.push(el);
    }
    write_tree(&root)
}

struct Cursor<'a> {
    path: String,
    el: &'a BpmnElement,
}

impl<'a> Cursor<'a> {
    fn fail(&self, detail: impl Into<String>) -> OwlXmlError {
        OwlXmlError::Format {
            path: self.path.clone(),
            detail: detail.into(),
        }
    }

    fn children(&self) -> impl Iterator<Item = Cursor<'a>> + '_ {
        let el = self.el;
        el.children.iter().enumerate().map(move |(i, c)| Cursor {
            path: format!("{}/{}[{}]", self.path, crate::xml::written_name(&c.qname), i + 1),
            el: c,
        })
    }

    fn is(&self, ns: &str, local: &str) -> bool {
        self.el.qname.ns() == Some(ns) && self.el.qname.local == local
    }

    fn attr(&self, ns: &str, local: &str) -> Option<&'a str> {
        self.el
            .attributes
            .iter()
            .find(|(q, _)| q.ns() == Some(ns) && q.local == local)
            .map(|(_, v)| v.as_str())
    }

    fn iri_attr(&self, local: &str) -> Result<Iri, OwlXmlError> {
        let raw = self
            .attr(RDF_URI, local)
            .ok_or_else(|| self.fail(format!("missing rdf:{local}")))?;
        raw.parse().map_err(|e| self.fail(format!("{e}")))
    }

    fn datatype(&self, local: &str) -> Result<Datatype, OwlXmlError> {
        let iri = self.iri_attr(local)?;
        (iri.prefix() == XSD)
            .then(|| Datatype::from_xsd_local(iri.local()))
            .flatten()
            .ok_or_else(|| self.fail(format!("unknown datatype `{iri}`")))
    }

    fn text(&self) -> String {
        self.el.text.clone().unwrap_or_default()
    }

    fn number(&self) -> Result<u32, OwlXmlError> {
        self.text()
            .trim()
            .parse()
            .map_err(|_| self.fail(format!("`{}` is not a cardinality", self.text())))
    }

    fn annotation(&self) -> Result<(String, String), OwlXmlError> {
        let key = self.attr(OWL_URI, "key").ok_or_else(|| self.fail("missing owl:key"))?;
        Ok((key.to_string(), self.text()))
    }
}

pub fn parse_owl(src: &str) -> Result<Ontology, OwlXmlError> {
    Ok(Ontology::from_parts(parse_owl_parts(src)?)?)
}

/// Read a file without applying the ontology invariants, e.g. an extension
/// whose references point into the ontology it extends.
pub fn parse_owl_parts(src: &str) -> Result<OntologyParts, OwlXmlError> {
    let tree = parse_tree(src, TextMode::Literal)?;
    let root = Cursor {
        path: format!("/{}", crate::xml::written_name(&tree.qname)),
        el: &tree,
    };
    if !root.is(RDF_URI, "RDF") {
        return Err(root.fail("document element must be rdf:RDF"));
    }
    let mut parts = OntologyParts::default();
    for (p, uri) in &tree.namespaces {
        let Some(p) = p else {
            return Err(root.fail("default namespaces are not used in this dialect"));
        };
        if is_reserved_prefix(p) {
            if !RESERVED_PREFIXES.iter().any(|(rp, ru)| rp == p && ru == uri) {
                return Err(root.fail(format!("reserved prefix `{p}` bound to `{uri}`")));
            }
            continue;
        }
        parts.namespaces.push((p.clone(), uri.clone()));
    }

    for part in root.children() {
        if part.is(OWL_URI, "Ontology") {
            parts.header_iri = Some(part.iri_attr("about")?);
            for c in part.children() {
                if !c.is(OWL_URI, "annotation") {
                    return Err(c.fail("unexpected element in header"));
                }
                parts.annotations.push(c.annotation()?);
            }
        } else if part.is(OWL_URI, "ObjectProperty") {
            let mut range = None;
            for c in part.children() {
                if !c.is(RDFS_URI, "range") {
                    return Err(c.fail("unexpected element in object property"));
                }
                range = Some(c.iri_attr("resource")?);
            }
            parts.properties.push(PropertyDecl::object(part.iri_attr("about")?, range));
        } else if part.is(OWL_URI, "DatatypeProperty") {
            let mut range = None;
            for c in part.children() {
                if !c.is(RDFS_URI, "range") {
                    return Err(c.fail("unexpected element in datatype property"));
                }
                range = Some(c.datatype("resource")?);
            }
            let range = range.ok_or_else(|| part.fail("datatype property without rdfs:range"))?;
            parts.properties.push(PropertyDecl::data(part.iri_attr("about")?, range));
        } else if part.is(OWL_URI, "Restriction") {
            parts.restrictions.push(restriction(&part)?);
        } else if part.is(OWL_URI, "NamedIndividual") {
            parts.individuals.push(individual(&part)?);
        } else if part.is(OWL_URI, "Class") {
            let mut class = OntoClass::new(part.iri_attr("about")?);
            for c in part.children() {
                if c.is(RDFS_URI, "subClassOf") {
                    class.superclasses.push(c.iri_attr("resource")?);
                } else if c.is(OWL_URI, "annotation") {
                    class.annotations.push(c.annotation()?);
                } else {
                    return Err(c.fail("unexpected element in class"));
                }
            }
            parts.classes.push(class);
        } else {
            return Err(part.fail("unknown part"));
        }
    }
    if parts.header_iri.is_none() {
        return Err(root.fail("missing owl:Ontology header"));
    }
    Ok(parts)
}

fn restriction(part: &Cursor<'_>) -> Result<Restriction, OwlXmlError> {
    let (mut subject, mut property, mut exact, mut min, mut max, mut on_class, mut on_data_range) =
        (None, None, None, None, None, None, None);
    for c in part.children() {
        if c.is(OWL_URI, "restricts") {
            subject = Some(c.iri_attr("resource")?);
        } else if c.is(OWL_URI, "onProperty") {
            property = Some(c.iri_attr("resource")?);
        } else if c.is(OWL_URI, "qualifiedCardinality") {
            exact = Some(c.number()?);
        } else if c.is(OWL_URI, "minQualifiedCardinality") {
            min = Some(c.number()?);
        } else if c.is(OWL_URI, "maxQualifiedCardinality") {
            max = Some(c.number()?);
        } else if c.is(OWL_URI, "onClass") {
            on_class = Some(c.iri_attr("resource")?);
        } else if c.is(OWL_URI, "onDataRange") {
            on_data_range = Some(c.datatype("resource")?);
        } else {
            return Err(c.fail("unexpected element in restriction"));
        }
    }
    let cardinality = match (exact, min, max) {
        (Some(n), None, None) => Cardinality::Exact(n),
        (None, Some(lo), Some(hi)) => Cardinality::Range(lo, hi),
        (None, Some(n), None) => Cardinality::Min(n),
        (None, None, Some(n)) => Cardinality::Max(n),
        _ => return Err(part.fail("restriction needs one exact, min, max or min+max cardinality")),
    };
    Ok(Restriction {
        subject_class: subject.ok_or_else(|| part.fail("missing owl:restricts"))?,
        on_property: property.ok_or_else(|| part.fail("missing owl:onProperty"))?,
        cardinality,
        on_class,
        on_data_range,
    })
}

fn individual(part: &Cursor<'_>) -> Result<NamedIndividual, OwlXmlError> {
    let mut ind = NamedIndividual {
        iri: part.iri_attr("about")?,
        types: Vec::new(),
        data_assertions: Vec::new(),
        object_assertions: Vec::new(),
        text_content: None,
        annotations: Vec::new(),
    };
    for c in part.children() {
        if c.is(RDF_URI, "type") {
            ind.types.push(c.iri_attr("resource")?);
        } else if c.is(RDF_URI, "value") {
            ind.text_content = Some(c.text());
        } else if c.is(OWL_URI, "annotation") {
            ind.annotations.push(c.annotation()?);
        } else {
            let q = &c.el.qname;
            let prefix = q.prefix.as_deref().ok_or_else(|| c.fail("property element without prefix"))?;
            let property = Iri::new(prefix, q.local.as_str()).map_err(|e| c.fail(format!("{e}")))?;
            if c.attr(RDF_URI, "resource").is_some() {
                ind.object_assertions.push(ObjectAssertion {
                    property,
                    target: c.iri_attr("resource")?,
                });
            } else {
                ind.data_assertions.push(DataAssertion {
                    property,
                    value: c.text(),
                    datatype: c.datatype("datatype")?,
                });
            }
        }
    }
    Ok(ind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bpmnowl_core::reference::build_reference;

    fn iri(s: &str) -> Iri {
        s.parse().unwrap()
    }

    #[test]
    fn empty_ontology_is_header_and_wrapper() {
        let mut o = Ontology::new(iri("ex:O"));
        o.add_namespace("ex", "urn:ex#").unwrap();
        let text = serialize_owl(&o);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("<rdf:RDF xmlns:rdf="));
        assert_eq!(lines[2], "  <owl:Ontology rdf:about=\"ex:O\"/>");
        assert_eq!(lines[3], "</rdf:RDF>");
        assert_eq!(parse_owl(&text).unwrap(), o);
    }

    #[test]
    fn parts_come_in_order() {
        let mut o = Ontology::new(iri("ex:O"));
        o.add_namespace("ex", "urn:ex#").unwrap();
        o.add_class(OntoClass::new(iri("ex:C"))).unwrap();
        o.add_property(PropertyDecl::data(iri("ex:name"), Datatype::String)).unwrap();
        o.add_restriction(Restriction::attribute(iri("ex:C"), iri("ex:name"), Cardinality::Exact(1), Some(Datatype::String)))
            .unwrap();
        let text = serialize_owl(&o);
        let at = |needle: &str| text.find(needle).unwrap();
        assert!(at("<owl:DatatypeProperty") < at("<owl:Restriction>"));
        assert!(at("<owl:Restriction>") < at("<owl:Class"));
        assert_eq!(parse_owl(&text).unwrap(), o);
    }

    #[test]
    fn reference_round_trips_and_is_a_fixpoint() {
        let r = build_reference();
        let text = serialize_owl(r.ontology());
        let back = parse_owl(&text).unwrap();
        assert_eq!(&back, r.ontology());
        assert_eq!(serialize_owl(&back), text);
    }

    #[test]
    fn undeclared_property_is_unresolved() {
        let src = r#"<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#" xmlns:owl="http://www.w3.org/2002/07/owl#" xmlns:ex="urn:ex#">
  <owl:Ontology rdf:about="ex:O"/>
  <owl:NamedIndividual rdf:about="ex:i">
    <rdf:type rdf:resource="ex:C"/>
    <ex:ghost rdf:datatype="xsd:string">x</ex:ghost>
  </owl:NamedIndividual>
  <owl:Class rdf:about="ex:C"/>
</rdf:RDF>"#;
        match parse_owl(src).unwrap_err() {
            OwlXmlError::Ontology(OntologyError::UnresolvedReference { iri, .. }) => assert_eq!(iri, self::iri("ex:ghost")),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn class_and_data_range_together_violate() {
        let src = r#"<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#" xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#" xmlns:owl="http://www.w3.org/2002/07/owl#" xmlns:ex="urn:ex#">
  <owl:Ontology rdf:about="ex:O"/>
  <owl:ObjectProperty rdf:about="ex:p"/>
  <owl:Restriction>
    <owl:restricts rdf:resource="ex:C"/>
    <owl:onProperty rdf:resource="ex:p"/>
    <owl:qualifiedCardinality rdf:datatype="xsd:nonNegativeInteger">1</owl:qualifiedCardinality>
    <owl:onClass rdf:resource="ex:C"/>
    <owl:onDataRange rdf:resource="xsd:string"/>
  </owl:Restriction>
  <owl:Class rdf:about="ex:C"/>
</rdf:RDF>"#;
        assert!(matches!(
            parse_owl(src),
            Err(OwlXmlError::Ontology(OntologyError::InvariantViolation { .. }))
        ));
    }

    #[test]
    fn awkward_literals_survive() {
        let mut o = Ontology::new(iri("ex:O"));
        o.add_namespace("ex", "urn:ex#").unwrap();
        o.add_class(OntoClass::new(iri("ex:C"))).unwrap();
        o.add_property(PropertyDecl::data(iri("ex:v"), Datatype::String)).unwrap();
        let mut i = NamedIndividual::new(iri("ex:i"), iri("ex:C"));
        for v in ["", "  ", "a\r\nb", "<&>\"'", "\t"] {
            i.data_assertions.push(DataAssertion {
                property: iri("ex:v"),
                value: v.into(),
                datatype: Datatype::String,
            });
        }
        i.text_content = Some("  padded\n".into());
        i.annotations.push(("k".into(), "line\nbreak".into()));
        o.add_individual(i).unwrap();
        assert_eq!(parse_owl(&serialize_owl(&o)).unwrap(), o);
    }
}
