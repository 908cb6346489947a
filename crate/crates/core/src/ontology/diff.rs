use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{NamedIndividual, Ontology, PropertyDecl, PropertyKind, PropertyRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DiffKind {
    Header,
    Namespace,
    Annotation,
    Class,
    SubclassEdge,
    ObjectProperty,
    DataProperty,
    Restriction,
    Individual,
    /// Same members, different declaration order.
    Order,
}

impl fmt::Display for DiffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiffKind::Header => "header",
            DiffKind::Namespace => "namespace",
            DiffKind::Annotation => "annotation",
            DiffKind::Class => "class",
            DiffKind::SubclassEdge => "subclass",
            DiffKind::ObjectProperty => "object-property",
            DiffKind::DataProperty => "data-property",
            DiffKind::Restriction => "restriction",
            DiffKind::Individual => "individual",
            DiffKind::Order => "order",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Side {
    OnlyInA,
    OnlyInB,
    /// Used by [`DiffKind::Order`]: both sides hold the members.
    Both,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::OnlyInA => "only-in-a",
            Side::OnlyInB => "only-in-b",
            Side::Both => "both",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Difference {
    pub kind: DiffKind,
    pub side: Side,
    pub item: String,
}

impl fmt::Display for Difference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.kind, self.side, self.item)
    }
}

/// Structural differences between two ontologies, part by part.
///
/// Membership differences are reported per item. When a part holds the same
/// members on both sides in a different order, one [`DiffKind::Order`] entry
/// names the part, since declaration order is observable in the serialized
/// form.
pub fn diff(a: &Ontology, b: &Ontology) -> Vec<Difference> {
    let mut out = Vec::new();
    compare(
        &mut out,
        DiffKind::Header,
        "header",
        [a.header_iri.to_string()],
        [b.header_iri.to_string()],
    );
    compare(
        &mut out,
        DiffKind::Namespace,
        "namespaces",
        a.namespaces.iter().map(|(p, u)| format!("{p}={u}")),
        b.namespaces.iter().map(|(p, u)| format!("{p}={u}")),
    );
    compare(
        &mut out,
        DiffKind::Annotation,
        "ontology annotations",
        a.annotations.iter().map(|(k, v)| format!("{k}={v:?}")),
        b.annotations.iter().map(|(k, v)| format!("{k}={v:?}")),
    );
    compare(
        &mut out,
        DiffKind::Class,
        "classes",
        a.classes().map(|c| c.iri.to_string()),
        b.classes().map(|c| c.iri.to_string()),
    );
    compare(
        &mut out,
        DiffKind::SubclassEdge,
        "superclass lists",
        edges(a),
        edges(b),
    );
    compare(
        &mut out,
        DiffKind::Annotation,
        "class annotations",
        class_annotations(a),
        class_annotations(b),
    );
    compare(
        &mut out,
        DiffKind::ObjectProperty,
        "object properties",
        properties(a, PropertyKind::Object),
        properties(b, PropertyKind::Object),
    );
    compare(
        &mut out,
        DiffKind::DataProperty,
        "data properties",
        properties(a, PropertyKind::Data),
        properties(b, PropertyKind::Data),
    );
    compare(
        &mut out,
        DiffKind::Restriction,
        "restrictions",
        a.restrictions.iter().map(ToString::to_string),
        b.restrictions.iter().map(ToString::to_string),
    );
    compare(
        &mut out,
        DiffKind::Individual,
        "individuals",
        a.individuals().map(render_individual),
        b.individuals().map(render_individual),
    );
    out
}

fn edges(o: &Ontology) -> Vec<String> {
    o.classes()
        .flat_map(|c| c.superclasses.iter().map(move |s| format!("{} < {}", c.iri, s)))
        .collect()
}

fn class_annotations(o: &Ontology) -> Vec<String> {
    o.classes()
        .flat_map(|c| c.annotations.iter().map(move |(k, v)| format!("{} {k}={v:?}", c.iri)))
        .collect()
}

fn properties(o: &Ontology, kind: PropertyKind) -> Vec<String> {
    o.properties()
        .filter(|p| p.kind() == kind)
        .map(render_property)
        .collect()
}

fn render_property(p: &PropertyDecl) -> String {
    match &p.range {
        PropertyRange::Data(dt) => format!("{} range {dt}", p.iri),
        PropertyRange::Object(Some(class)) => format!("{} range {class}", p.iri),
        PropertyRange::Object(None) => p.iri.to_string(),
    }
}

fn render_individual(i: &NamedIndividual) -> String {
    let mut s = format!("{} a", i.iri);
    for ty in &i.types {
        s.push(' ');
        s.push_str(&ty.to_string());
    }
    for d in &i.data_assertions {
        s.push_str(&format!("; {} {:?}^^{}", d.property, d.value, d.datatype));
    }
    for o in &i.object_assertions {
        s.push_str(&format!("; {} -> {}", o.property, o.target));
    }
    if let Some(text) = &i.text_content {
        s.push_str(&format!("; text {text:?}"));
    }
    for (k, v) in &i.annotations {
        s.push_str(&format!("; @{k} {v:?}"));
    }
    s
}

/// Multiset comparison of two ordered parts.
fn compare(
    out: &mut Vec<Difference>,
    kind: DiffKind,
    part: &str,
    a: impl IntoIterator<Item = String>,
    b: impl IntoIterator<Item = String>,
) {
    let a: Vec<String> = a.into_iter().collect();
    let b: Vec<String> = b.into_iter().collect();
    let mut counts: BTreeMap<&str, isize> = BTreeMap::new();
    for item in &a {
        *counts.entry(item).or_default() += 1;
    }
    for item in &b {
        *counts.entry(item).or_default() -= 1;
    }
    let before = out.len();
    for (item, balance) in &counts {
        let side = match balance.signum() {
            1 => Side::OnlyInA,
            -1 => Side::OnlyInB,
            _ => continue,
        };
        for _ in 0..balance.unsigned_abs() {
            out.push(Difference {
                kind,
                side,
                item: (*item).to_string(),
            });
        }
    }
    if out.len() == before && a != b {
        out.push(Difference {
            kind: DiffKind::Order,
            side: Side::Both,
            item: part.to_string(),
        });
    }
}
