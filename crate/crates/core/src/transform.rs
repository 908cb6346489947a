//! BPMN document ⇄ model ontology.
//!
//! Every element becomes a named individual of a class named after its
//! qualified tag. Nesting is mirrored in the class hierarchy (a tag's class
//! is a subclass of each distinct tag it appears under) and, exactly, in
//! per-individual annotations that [`owl_to_bpmn`] reads back:
//!
//! * `parent` – individual of the enclosing element (absent on the root)
//! * `position` – index among the parent's children
//! * `prefix` – prefix the element was written with
//! * `xmlns` – one per namespace declaration, `prefix=uri` or `=uri`
//! * `attr` – one per attribute in source order, `raw-name property`
//!
//! Attributes whose values all name an element id become object properties;
//! every other attribute is a data property. The `id` attribute itself is
//! never treated as a reference.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bpmn::{well_known_prefix, BpmnDocument, BpmnElement, DocumentError, ElementPath, QName};
use crate::iri::{Datatype, Iri};
use crate::ontology::{
    Cardinality, DataAssertion, DiffKind, Difference, NamedIndividual, ObjectAssertion, OntoClass, Ontology,
    OntologyError, PropertyDecl, PropertyKind, PropertyRange, Restriction, Side,
};
use crate::reference::{ClassLookup, ReferenceOntology, TranslationTable};

pub const MODEL_PREFIX: &str = "model";
pub const MODEL_URI: &str = "urn:bpmnowl:model#";
/// Alias for elements and attributes outside any namespace.
pub const NO_NAMESPACE_ALIAS: &str = "none";

pub const ANN_PARENT: &str = "parent";
pub const ANN_POSITION: &str = "position";
pub const ANN_PREFIX: &str = "prefix";
pub const ANN_XMLNS: &str = "xmlns";
pub const ANN_ATTR: &str = "attr";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("individual `{individual}`: {detail}")]
    MissingProvenance { individual: String, detail: String },
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

fn missing(individual: impl ToString, detail: impl Into<String>) -> TransformError {
    TransformError::MissingProvenance {
        individual: individual.to_string(),
        detail: detail.into(),
    }
}

/// Model ontology plus the source location of each individual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelOntology {
    pub ontology: Ontology,
    pub provenance: BTreeMap<Iri, ElementPath>,
}

impl ModelOntology {
    pub fn class_iri() -> Iri {
        Iri::new(MODEL_PREFIX, "document").expect("static")
    }

    /// Rebuild the source document.
    pub fn to_bpmn(&self) -> Result<BpmnDocument, TransformError> {
        owl_to_bpmn(&self.ontology)
    }

    /// Recover provenance for an ontology read back from a file.
    pub fn from_ontology(ontology: Ontology) -> Result<Self, TransformError> {
        let doc = owl_to_bpmn(&ontology)?;
        let mut provenance = BTreeMap::new();
        let paths = individual_paths(&ontology)?;
        for (iri, path) in paths {
            provenance.insert(iri, path);
        }
        debug_assert_eq!(provenance.len(), doc.element_count());
        Ok(ModelOntology { ontology, provenance })
    }
}

/// URI → alias, assigned on first use.
#[derive(Default)]
struct Aliases {
    by_uri: BTreeMap<String, String>,
    order: Vec<(String, String)>,
    next: usize,
}

impl Aliases {
    fn alias(&mut self, uri: Option<&str>) -> String {
        let uri = uri.unwrap_or("");
        if let Some(a) = self.by_uri.get(uri) {
            return a.clone();
        }
        let alias = if uri.is_empty() {
            NO_NAMESPACE_ALIAS.to_string()
        } else if let Some(p) = well_known_prefix(uri) {
            p.to_string()
        } else {
            self.next += 1;
            format!("ns{}", self.next)
        };
        self.by_uri.insert(uri.to_string(), alias.clone());
        self.order.push((alias.clone(), uri.to_string()));
        alias
    }
}

fn raw_name(q: &QName) -> String {
    match &q.prefix {
        Some(p) => format!("{p}:{}", q.local),
        None => q.local.clone(),
    }
}

fn make_iri(prefix: &str, local: &str) -> Result<Iri, TransformError> {
    Iri::new(prefix, local).map_err(|e| {
        TransformError::Ontology(OntologyError::InvariantViolation {
            path: format!("{prefix}:{local}"),
            detail: e.to_string(),
        })
    })
}

#[derive(Default)]
struct PropertyUse {
    all_resolve: bool,
    datatypes: BTreeSet<Datatype>,
    targets: BTreeSet<Iri>,
}

fn unify(datatypes: &BTreeSet<Datatype>) -> Datatype {
    let mut it = datatypes.iter();
    match (it.next(), it.next()) {
        (Some(&only), None) => only,
        _ => Datatype::AnyType,
    }
}

fn value_datatype(doc: &BpmnDocument, attribute: &QName, value: &str) -> Datatype {
    if attribute.local != "id" && doc.resolve_reference(value).is_some() {
        Datatype::IdRef
    } else {
        Datatype::infer(value)
    }
}

/// Transform a document into its model ontology.
pub fn bpmn_to_owl(doc: &BpmnDocument) -> Result<ModelOntology, TransformError> {
    let mut aliases = Aliases::default();
    let elements: Vec<(ElementPath, &BpmnElement)> = doc.walk().collect();

    let mut class_of: Vec<Iri> = Vec::with_capacity(elements.len());
    let mut individual_of: BTreeMap<ElementPath, Iri> = BTreeMap::new();
    let mut counters: BTreeMap<Iri, usize> = BTreeMap::new();
    let mut attr_props: Vec<Vec<Iri>> = Vec::with_capacity(elements.len());
    let mut property_order: Vec<Iri> = Vec::new();
    let mut uses: BTreeMap<Iri, PropertyUse> = BTreeMap::new();

    for (path, el) in &elements {
        let alias = aliases.alias(el.qname.ns());
        let class = make_iri(&alias, &el.qname.local)?;
        let n = counters.entry(class.clone()).or_default();
        *n += 1;
        individual_of.insert(path.clone(), make_iri(&alias, &format!("{}_{n}", el.qname.local))?);
        class_of.push(class);

        let mut props = Vec::with_capacity(el.attributes.len());
        for (q, value) in &el.attributes {
            let prop_alias = match q.ns() {
                Some(ns) => aliases.alias(Some(ns)),
                None => alias.clone(),
            };
            let prop = make_iri(&prop_alias, &q.local)?;
            let entry = uses.entry(prop.clone()).or_insert_with(|| {
                property_order.push(prop.clone());
                PropertyUse {
                    all_resolve: true,
                    ..Default::default()
                }
            });
            let target = if q.local == "id" {
                None
            } else {
                doc.path_of_id(value)
            };
            match target {
                Some(target_path) => {
                    let target_el = doc.element(target_path).expect("indexed path");
                    let t_alias = aliases.alias(target_el.qname.ns());
                    entry.targets.insert(make_iri(&t_alias, &target_el.qname.local)?);
                }
                None => entry.all_resolve = false,
            }
            entry.datatypes.insert(value_datatype(doc, q, value));
            props.push(prop);
        }
        attr_props.push(props);
    }

    let mut ont = Ontology::new(make_iri(MODEL_PREFIX, "Model")?);
    ont.add_namespace(MODEL_PREFIX, MODEL_URI)?;
    for (alias, uri) in &aliases.order {
        ont.add_namespace(alias.clone(), uri.clone())?;
    }

    // Classes: document, then tags in order of first appearance.
    let document = ModelOntology::class_iri();
    ont.add_class(OntoClass::new(document.clone()))?;
    for (i, (path, _)) in elements.iter().enumerate() {
        let class = &class_of[i];
        if !ont.has_class(class) {
            ont.add_class(OntoClass::new(class.clone()))?;
        }
        let parent_class = match path.parent() {
            None => &document,
            Some(parent) => {
                let idx = elements.iter().position(|(p, _)| *p == parent).expect("pre-order");
                &class_of[idx]
            }
        };
        if !ont.creates_cycle(class, parent_class) {
            ont.add_superclass(class, parent_class)?;
        }
    }

    for prop in &property_order {
        let u = &uses[prop];
        let decl = if u.all_resolve {
            let mut targets = u.targets.iter();
            let range = match (targets.next(), targets.next()) {
                (Some(only), None) => Some(only.clone()),
                _ => None,
            };
            PropertyDecl::object(prop.clone(), range)
        } else {
            PropertyDecl::data(prop.clone(), unify(&u.datatypes))
        };
        ont.add_property(decl)?;
    }

    // Restrictions from observed counts, per class and property.
    let mut class_order: Vec<&Iri> = Vec::new();
    for class in &class_of {
        if !class_order.contains(&class) {
            class_order.push(class);
        }
    }
    for class in class_order {
        let instances: Vec<usize> = (0..elements.len()).filter(|&i| &class_of[i] == class).collect();
        let mut props: Vec<&Iri> = Vec::new();
        for &i in &instances {
            for p in &attr_props[i] {
                if !props.contains(&p) {
                    props.push(p);
                }
            }
        }
        for prop in props {
            let counts: Vec<u32> = instances
                .iter()
                .map(|&i| attr_props[i].iter().filter(|p| *p == prop).count() as u32)
                .collect();
            let lo = *counts.iter().min().expect("class has instances");
            let hi = *counts.iter().max().expect("class has instances");
            let cardinality = if lo == hi {
                Cardinality::Exact(lo)
            } else {
                Cardinality::Range(lo, hi)
            };
            let range = match &ont.property(prop).expect("declared").range {
                PropertyRange::Data(dt) => Some(*dt),
                PropertyRange::Object(_) => None,
            };
            ont.add_restriction(Restriction::attribute(class.clone(), prop.clone(), cardinality, range))?;
        }
    }

    let mut provenance = BTreeMap::new();
    for (i, (path, el)) in elements.iter().enumerate() {
        let iri = individual_of[path].clone();
        let mut ind = NamedIndividual::new(iri.clone(), class_of[i].clone());
        if let Some(parent) = path.parent() {
            ind.annotations.push((ANN_PARENT.into(), individual_of[&parent].to_string()));
            let position = *path.0.last().expect("non-root");
            ind.annotations.push((ANN_POSITION.into(), position.to_string()));
        }
        if let Some(prefix) = &el.qname.prefix {
            ind.annotations.push((ANN_PREFIX.into(), prefix.clone()));
        }
        for (prefix, uri) in &el.namespaces {
            let p = prefix.as_deref().unwrap_or("");
            ind.annotations.push((ANN_XMLNS.into(), format!("{p}={uri}")));
        }
        for ((q, value), prop) in el.attributes.iter().zip(&attr_props[i]) {
            ind.annotations.push((ANN_ATTR.into(), format!("{} {prop}", raw_name(q))));
            if ont.property(prop).expect("declared").kind() == PropertyKind::Object {
                let target_path = doc.path_of_id(value).expect("object properties always resolve");
                ind.object_assertions.push(ObjectAssertion {
                    property: prop.clone(),
                    target: individual_of[target_path].clone(),
                });
            } else {
                ind.data_assertions.push(DataAssertion {
                    property: prop.clone(),
                    value: value.clone(),
                    datatype: value_datatype(doc, q, value),
                });
            }
        }
        ind.text_content = el.text.clone();
        ont.add_individual(ind)?;
        provenance.insert(iri, path.clone());
    }
    ont.validate()?;
    Ok(ModelOntology {
        ontology: ont,
        provenance,
    })
}

struct Skeleton {
    element: BpmnElement,
    parent: Option<Iri>,
    position: usize,
}

/// Element paths of every individual, derived from the parent/position
/// annotations.
fn individual_paths(ont: &Ontology) -> Result<Vec<(Iri, ElementPath)>, TransformError> {
    let mut out = Vec::new();
    for ind in ont.individuals() {
        let mut path = Vec::new();
        let mut cur = ind;
        let mut guard = 0usize;
        while let Some(parent) = cur.annotation(ANN_PARENT) {
            let position = position_of(cur)?;
            path.push(position);
            let parent_iri: Iri = parent
                .parse()
                .map_err(|_| missing(&cur.iri, "parent annotation is not an IRI"))?;
            cur = ont
                .individual(&parent_iri)
                .ok_or_else(|| missing(&cur.iri, format!("parent `{parent}` does not exist")))?;
            guard += 1;
            if guard > ont.individuals().len() {
                return Err(missing(&ind.iri, "parent annotations form a cycle"));
            }
        }
        path.reverse();
        out.push((ind.iri.clone(), ElementPath(path)));
    }
    Ok(out)
}

fn position_of(ind: &NamedIndividual) -> Result<usize, TransformError> {
    ind.annotation(ANN_POSITION)
        .ok_or_else(|| missing(&ind.iri, "no position annotation"))?
        .parse()
        .map_err(|_| missing(&ind.iri, "position annotation is not a number"))
}

/// Value the `id` attribute of an individual had in the source.
fn source_id(ind: &NamedIndividual) -> Option<&str> {
    ind.annotations_named(ANN_ATTR).find_map(|a| {
        let (raw, prop) = a.split_once(' ')?;
        if raw != "id" {
            return None;
        }
        let prop: Iri = prop.parse().ok()?;
        ind.data(&prop).map(|d| d.value.as_str())
    })
}

/// Rebuild a document from a model ontology produced by [`bpmn_to_owl`].
pub fn owl_to_bpmn(ont: &Ontology) -> Result<BpmnDocument, TransformError> {
    let uri_of = |alias: &str| -> Option<String> {
        ont.namespace_uri(alias)
            .filter(|u| !u.is_empty())
            .map(ToString::to_string)
    };
    let mut skeletons: BTreeMap<Iri, Skeleton> = BTreeMap::new();
    let mut order: Vec<Iri> = Vec::new();
    for ind in ont.individuals() {
        let class = ind.types.first().ok_or_else(|| missing(&ind.iri, "no type"))?;
        let ns = uri_of(class.prefix());
        let qname = QName {
            namespace_uri: ns,
            local: class.local().to_string(),
            prefix: ind.annotation(ANN_PREFIX).map(ToString::to_string),
        };
        let mut element = BpmnElement::new(qname);
        for decl in ind.annotations_named(ANN_XMLNS) {
            let (p, uri) = decl
                .split_once('=')
                .ok_or_else(|| missing(&ind.iri, format!("malformed xmlns annotation `{decl}`")))?;
            let prefix = (!p.is_empty()).then(|| p.to_string());
            element.namespaces.push((prefix, uri.to_string()));
        }

        let mut used_data = alloc::vec![false; ind.data_assertions.len()];
        let mut used_obj = alloc::vec![false; ind.object_assertions.len()];
        for a in ind.annotations_named(ANN_ATTR) {
            let (raw, prop) = a
                .split_once(' ')
                .ok_or_else(|| missing(&ind.iri, format!("malformed attr annotation `{a}`")))?;
            let prop: Iri = prop
                .parse()
                .map_err(|_| missing(&ind.iri, format!("malformed attr annotation `{a}`")))?;
            let q = match raw.split_once(':') {
                Some((prefix, local)) => QName {
                    namespace_uri: uri_of(prop.prefix()),
                    local: local.to_string(),
                    prefix: Some(prefix.to_string()),
                },
                None => QName::local(raw),
            };
            let data = ind
                .data_assertions
                .iter()
                .enumerate()
                .find(|(k, d)| !used_data[*k] && d.property == prop);
            let value = if let Some((k, d)) = data {
                used_data[k] = true;
                d.value.clone()
            } else {
                let (k, o) = ind
                    .object_assertions
                    .iter()
                    .enumerate()
                    .find(|(k, o)| !used_obj[*k] && o.property == prop)
                    .ok_or_else(|| missing(&ind.iri, format!("no assertion for attribute `{raw}`")))?;
                used_obj[k] = true;
                let target = ont
                    .individual(&o.target)
                    .ok_or_else(|| missing(&ind.iri, format!("unknown target `{}`", o.target)))?;
                source_id(target)
                    .ok_or_else(|| missing(&o.target, "referenced individual has no id attribute"))?
                    .to_string()
            };
            element.attributes.push((q, value));
        }
        if used_data.iter().chain(&used_obj).any(|u| !u) {
            return Err(missing(&ind.iri, "assertion without attribute annotation"));
        }
        element.text = ind.text_content.clone();

        let parent = match ind.annotation(ANN_PARENT) {
            Some(p) => Some(
                p.parse::<Iri>()
                    .map_err(|_| missing(&ind.iri, "parent annotation is not an IRI"))?,
            ),
            None => None,
        };
        let position = if parent.is_some() { position_of(ind)? } else { 0 };
        order.push(ind.iri.clone());
        skeletons.insert(
            ind.iri.clone(),
            Skeleton {
                element,
                parent,
                position,
            },
        );
    }

    let roots: Vec<&Iri> = order.iter().filter(|i| skeletons[*i].parent.is_none()).collect();
    let root = match roots.as_slice() {
        [root] => (*root).clone(),
        [] => return Err(missing(ont.header_iri(), "no individual without a parent")),
        [_, second, ..] => return Err(missing(*second, "several individuals lack a parent annotation")),
    };

    let mut children: BTreeMap<Iri, Vec<(usize, Iri)>> = BTreeMap::new();
    for iri in &order {
        let sk = &skeletons[iri];
        if let Some(parent) = &sk.parent {
            if !skeletons.contains_key(parent) {
                return Err(missing(iri, format!("parent `{parent}` does not exist")));
            }
            children.entry(parent.clone()).or_default().push((sk.position, iri.clone()));
        }
    }
    for (parent, kids) in children.iter_mut() {
        kids.sort();
        for (expected, (position, iri)) in kids.iter().enumerate() {
            if *position != expected {
                return Err(missing(iri, format!("position {position} under `{parent}` leaves a gap")));
            }
        }
    }

    let mut placed = 0usize;
    let root_el = assemble(&root, &mut skeletons, &children, &mut placed);
    if placed != order.len() {
        return Err(missing(ont.header_iri(), "parent annotations do not form a tree"));
    }
    Ok(BpmnDocument::new(root_el)?)
}

fn assemble(
    iri: &Iri,
    skeletons: &mut BTreeMap<Iri, Skeleton>,
    children: &BTreeMap<Iri, Vec<(usize, Iri)>>,
    placed: &mut usize,
) -> BpmnElement {
    let mut el = core::mem::replace(
        &mut skeletons.get_mut(iri).expect("known individual").element,
        BpmnElement::new(QName::local("_")),
    );
    *placed += 1;
    if let Some(kids) = children.get(iri) {
        for (_, kid) in kids {
            el.children.push(assemble(kid, skeletons, children, placed));
        }
    }
    el
}

/// Compare a model ontology with the reference: classes and properties of
/// conformance namespaces, translated to standard names. `OnlyInA` items are
/// used by the model but unknown to the reference; `OnlyInB` items are
/// declared by the reference and unused by the model. Sorted.
pub fn compare_to_reference(
    model: &ModelOntology,
    reference: &ReferenceOntology,
    table: &TranslationTable,
) -> Vec<Difference> {
    let ont = &model.ontology;
    let mut used_classes: BTreeSet<Iri> = BTreeSet::new();
    let mut unknown_classes: BTreeSet<Iri> = BTreeSet::new();
    let mut ref_class_of: BTreeMap<Iri, Iri> = BTreeMap::new();
    for class in ont.classes() {
        let Some(uri) = ont.namespace_uri(class.iri.prefix()) else {
            continue;
        };
        let qname = QName::new(Some(uri), None, class.iri.local());
        let parent = class.superclasses.iter().find_map(|s| ref_class_of.get(s));
        match reference.class_for(&qname, parent, table) {
            ClassLookup::Ignored => {}
            ClassLookup::Known(iri) => {
                ref_class_of.insert(class.iri.clone(), iri.clone());
                used_classes.insert(iri);
            }
            ClassLookup::Unknown(iri) => {
                unknown_classes.insert(iri);
            }
        }
    }

    let mut used_props: BTreeSet<Iri> = BTreeSet::new();
    let mut unknown_props: BTreeSet<(PropertyKind, Iri)> = BTreeSet::new();
    for prop in ont.properties() {
        let Some(uri) = ont.namespace_uri(prop.iri.prefix()) else {
            continue;
        };
        let element = QName::new(Some(uri), None, "_");
        let Some(name) = reference.property_for(&element, &QName::local(prop.iri.local()), table) else {
            continue;
        };
        match reference.property_kind(&name) {
            Some(_) => {
                used_props.insert(name);
            }
            None => {
                unknown_props.insert((prop.kind(), name));
            }
        }
    }

    let kind_of = |k: PropertyKind| match k {
        PropertyKind::Object => DiffKind::ObjectProperty,
        PropertyKind::Data => DiffKind::DataProperty,
    };
    let mut out = Vec::new();
    for iri in unknown_classes {
        out.push(Difference {
            kind: DiffKind::Class,
            side: Side::OnlyInA,
            item: iri.to_string(),
        });
    }
    for class in reference.ontology.classes() {
        if !used_classes.contains(&class.iri) {
            out.push(Difference {
                kind: DiffKind::Class,
                side: Side::OnlyInB,
                item: class.iri.to_string(),
            });
        }
    }
    for (kind, iri) in unknown_props {
        out.push(Difference {
            kind: kind_of(kind),
            side: Side::OnlyInA,
            item: iri.to_string(),
        });
    }
    for prop in reference.ontology.properties() {
        if !used_props.contains(&prop.iri) {
            out.push(Difference {
                kind: kind_of(prop.kind()),
                side: Side::OnlyInB,
                item: prop.iri.to_string(),
            });
        }
    }
    out.sort();
    out
}
