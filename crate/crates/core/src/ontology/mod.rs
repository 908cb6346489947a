//! OWL-style ontology data model.
//!
//! An [`Ontology`] holds classes, object/data properties, cardinality
//! restrictions and named individuals, each kept in declaration order. Every
//! mutating operation checks the invariant it could break; the remaining
//! whole-ontology checks (object assertion targets, prefix declarations) run
//! in [`Ontology::validate`].

mod diff;

pub use diff::{diff, DiffKind, Difference, Side};

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::iri::{is_reserved_prefix, Datatype, Iri, RESERVED_PREFIXES};

pub type Annotation = (String, String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntoClass {
    pub iri: Iri,
    /// Direct superclasses in declaration order. An empty list means the
    /// class sits directly under `owl:Thing`, which is never stored here.
    pub superclasses: Vec<Iri>,
    pub annotations: Vec<Annotation>,
}

impl OntoClass {
    pub fn new(iri: Iri) -> Self {
        OntoClass {
            iri,
            superclasses: Vec::new(),
            annotations: Vec::new(),
        }
    }

    pub fn with_superclasses(iri: Iri, superclasses: impl IntoIterator<Item = Iri>) -> Self {
        OntoClass {
            iri,
            superclasses: superclasses.into_iter().collect(),
            annotations: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropertyKind {
    Object,
    Data,
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropertyKind::Object => "object",
            PropertyKind::Data => "data",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropertyRange {
    Data(Datatype),
    Object(Option<Iri>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDecl {
    pub iri: Iri,
    pub range: PropertyRange,
}

impl PropertyDecl {
    pub fn data(iri: Iri, datatype: Datatype) -> Self {
        PropertyDecl {
            iri,
            range: PropertyRange::Data(datatype),
        }
    }

    pub fn object(iri: Iri, range: Option<Iri>) -> Self {
        PropertyDecl {
            iri,
            range: PropertyRange::Object(range),
        }
    }

    pub fn kind(&self) -> PropertyKind {
        match self.range {
            PropertyRange::Data(_) => PropertyKind::Data,
            PropertyRange::Object(_) => PropertyKind::Object,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cardinality {
    Exact(u32),
    Min(u32),
    Max(u32),
    Range(u32, u32),
}

impl Cardinality {
    pub fn admits(self, count: usize) -> bool {
        let count = u64::try_from(count).unwrap_or(u64::MAX);
        match self {
            Cardinality::Exact(n) => count == u64::from(n),
            Cardinality::Min(n) => count >= u64::from(n),
            Cardinality::Max(n) => count <= u64::from(n),
            Cardinality::Range(lo, hi) => count >= u64::from(lo) && count <= u64::from(hi),
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Exact(n) => write!(f, "={n}"),
            Cardinality::Min(n) => write!(f, ">={n}"),
            Cardinality::Max(n) => write!(f, "<={n}"),
            Cardinality::Range(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

/// Cardinality restriction on a property of a class.
///
/// Restrictions without `on_class` are satisfied by XML attributes of the
/// element representing the class; restrictions with `on_class` are satisfied
/// by child elements of that class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Restriction {
    pub subject_class: Iri,
    pub on_property: Iri,
    pub cardinality: Cardinality,
    pub on_class: Option<Iri>,
    pub on_data_range: Option<Datatype>,
}

impl Restriction {
    pub fn attribute(
        subject_class: Iri,
        on_property: Iri,
        cardinality: Cardinality,
        on_data_range: Option<Datatype>,
    ) -> Self {
        Restriction {
            subject_class,
            on_property,
            cardinality,
            on_class: None,
            on_data_range,
        }
    }

    pub fn child(subject_class: Iri, on_property: Iri, cardinality: Cardinality, on_class: Iri) -> Self {
        Restriction {
            subject_class,
            on_property,
            cardinality,
            on_class: Some(on_class),
            on_data_range: None,
        }
    }

    pub fn is_child_kind(&self) -> bool {
        self.on_class.is_some()
    }

    /// Everything except the subject class; two restrictions inherited from
    /// different ancestors are duplicates when their constraints agree.
    pub fn constraint(&self) -> (&Iri, Cardinality, Option<&Iri>, Option<Datatype>) {
        (
            &self.on_property,
            self.cardinality,
            self.on_class.as_ref(),
            self.on_data_range,
        )
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject_class, self.on_property, self.cardinality)?;
        if let Some(class) = &self.on_class {
            write!(f, " onClass {class}")?;
        }
        if let Some(range) = &self.on_data_range {
            write!(f, " onDataRange {range}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataAssertion {
    pub property: Iri,
    pub value: String,
    pub datatype: Datatype,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectAssertion {
    pub property: Iri,
    pub target: Iri,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedIndividual {
    pub iri: Iri,
    pub types: Vec<Iri>,
    pub data_assertions: Vec<DataAssertion>,
    pub object_assertions: Vec<ObjectAssertion>,
    pub text_content: Option<String>,
    /// Uninterpreted key/text pairs.
    pub annotations: Vec<Annotation>,
}

impl NamedIndividual {
    pub fn new(iri: Iri, class: Iri) -> Self {
        NamedIndividual {
            iri,
            types: alloc::vec![class],
            data_assertions: Vec::new(),
            object_assertions: Vec::new(),
            text_content: None,
            annotations: Vec::new(),
        }
    }

    pub fn annotation(&self, key: &str) -> Option<&str> {
        self.annotations
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn annotations_named<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.annotations
            .iter()
            .filter(move |(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn data(&self, property: &Iri) -> Option<&DataAssertion> {
        self.data_assertions.iter().find(|a| &a.property == property)
    }

    pub fn objects<'a>(&'a self, property: &'a Iri) -> impl Iterator<Item = &'a Iri> + 'a {
        self.object_assertions
            .iter()
            .filter(move |a| &a.property == property)
            .map(|a| &a.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OntologyError {
    #[error("{kind} `{iri}` is already declared")]
    DuplicateIri { kind: &'static str, iri: Iri },
    #[error("superclass `{superclass}` of `{class}` is not a declared class")]
    UnresolvedSuperclass { class: Iri, superclass: Iri },
    #[error("making `{superclass}` a superclass of `{class}` would introduce a cycle")]
    CycleIntroduced { class: Iri, superclass: Iri },
    #[error("unknown class `{0}`")]
    UnknownClass(Iri),
    #[error("{path}: unresolved reference to `{iri}`")]
    UnresolvedReference { path: String, iri: Iri },
    #[error("{path}: {detail}")]
    InvariantViolation { path: String, detail: String },
}

fn violation(path: impl Into<String>, detail: impl Into<String>) -> OntologyError {
    OntologyError::InvariantViolation {
        path: path.into(),
        detail: detail.into(),
    }
}

fn unresolved(path: impl Into<String>, iri: &Iri) -> OntologyError {
    OntologyError::UnresolvedReference {
        path: path.into(),
        iri: iri.clone(),
    }
}

/// Vec with an IRI index; iteration follows insertion order.
#[derive(Debug, Clone)]
struct Table<T> {
    items: Vec<T>,
    index: BTreeMap<Iri, usize>,
}

impl<T> Default for Table<T> {
    fn default() -> Self {
        Table {
            items: Vec::new(),
            index: BTreeMap::new(),
        }
    }
}

impl<T: PartialEq> PartialEq for Table<T> {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

impl<T: Eq> Eq for Table<T> {}

impl<T> Table<T> {
    fn get(&self, iri: &Iri) -> Option<&T> {
        self.index.get(iri).map(|&i| &self.items[i])
    }

    fn get_mut(&mut self, iri: &Iri) -> Option<&mut T> {
        self.index.get(iri).map(|&i| &mut self.items[i])
    }

    fn contains(&self, iri: &Iri) -> bool {
        self.index.contains_key(iri)
    }

    fn insert(&mut self, iri: Iri, item: T) {
        self.index.insert(iri, self.items.len());
        self.items.push(item);
    }
}

/// Plain, unchecked contents of an ontology. Readers fill this in and hand it
/// to [`Ontology::from_parts`], which applies every invariant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OntologyParts {
    pub header_iri: Option<Iri>,
    pub annotations: Vec<Annotation>,
    pub namespaces: Vec<(String, String)>,
    pub classes: Vec<OntoClass>,
    pub properties: Vec<PropertyDecl>,
    pub restrictions: Vec<Restriction>,
    pub individuals: Vec<NamedIndividual>,
}

impl OntologyParts {
    pub fn is_empty(&self) -> bool {
        self.annotations.is_empty()
            && self.namespaces.is_empty()
            && self.classes.is_empty()
            && self.properties.is_empty()
            && self.restrictions.is_empty()
            && self.individuals.is_empty()
    }
}

/// Structural equality treats object and data properties as two separate
/// sequences, the way the file format stores them; interleaving between the
/// two kinds is not significant.
#[derive(Debug, Clone)]
pub struct Ontology {
    header_iri: Iri,
    annotations: Vec<Annotation>,
    namespaces: BTreeMap<String, String>,
    classes: Table<OntoClass>,
    properties: Table<PropertyDecl>,
    restrictions: Vec<Restriction>,
    individuals: Table<NamedIndividual>,
}

impl PartialEq for Ontology {
    fn eq(&self, other: &Self) -> bool {
        let of_kind = |o: &'_ Ontology, kind: PropertyKind| {
            o.properties
                .items
                .iter()
                .filter(|p| p.kind() == kind)
                .cloned()
                .collect::<Vec<_>>()
        };
        self.header_iri == other.header_iri
            && self.annotations == other.annotations
            && self.namespaces == other.namespaces
            && self.classes == other.classes
            && self.restrictions == other.restrictions
            && self.individuals == other.individuals
            && [PropertyKind::Object, PropertyKind::Data]
                .into_iter()
                .all(|k| of_kind(self, k) == of_kind(other, k))
    }
}

impl Eq for Ontology {}

impl Ontology {
    pub fn new(header_iri: Iri) -> Self {
        Ontology {
            header_iri,
            annotations: Vec::new(),
            namespaces: BTreeMap::new(),
            classes: Table::default(),
            properties: Table::default(),
            restrictions: Vec::new(),
            individuals: Table::default(),
        }
    }

    pub fn header_iri(&self) -> &Iri {
        &self.header_iri
    }

    pub fn annotations(&self) -> &[Annotation] {
        &self.annotations
    }

    pub fn annotation(&self, key: &str) -> Option<&str> {
        self.annotations
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn add_annotation(&mut self, key: impl Into<String>, text: impl Into<String>) {
        self.annotations.push((key.into(), text.into()));
    }

    /// Non-reserved prefix bindings, sorted by prefix.
    pub fn namespaces(&self) -> &BTreeMap<String, String> {
        &self.namespaces
    }

    pub fn namespace_uri(&self, prefix: &str) -> Option<&str> {
        RESERVED_PREFIXES
            .iter()
            .find(|(p, _)| *p == prefix)
            .map(|(_, uri)| *uri)
            .or_else(|| self.namespaces.get(prefix).map(String::as_str))
    }

    pub fn add_namespace(&mut self, prefix: impl Into<String>, uri: impl Into<String>) -> Result<(), OntologyError> {
        let prefix = prefix.into();
        let uri = uri.into();
        if is_reserved_prefix(&prefix) || !crate::iri::is_ncname(&prefix) {
            return Err(violation(format!("xmlns:{prefix}"), "prefix is reserved or not a valid name"));
        }
        match self.namespaces.get(&prefix) {
            Some(existing) if *existing != uri => Err(violation(
                format!("xmlns:{prefix}"),
                format!("already bound to `{existing}`"),
            )),
            _ => {
                self.namespaces.insert(prefix, uri);
                Ok(())
            }
        }
    }

    pub fn classes(&self) -> impl ExactSizeIterator<Item = &OntoClass> {
        self.classes.items.iter()
    }

    pub fn class(&self, iri: &Iri) -> Option<&OntoClass> {
        self.classes.get(iri)
    }

    /// True for declared classes and for the built-in `owl:Thing`.
    pub fn has_class(&self, iri: &Iri) -> bool {
        iri.is_thing() || self.classes.contains(iri)
    }

    pub fn properties(&self) -> impl ExactSizeIterator<Item = &PropertyDecl> {
        self.properties.items.iter()
    }

    pub fn property(&self, iri: &Iri) -> Option<&PropertyDecl> {
        self.properties.get(iri)
    }

    pub fn restrictions(&self) -> &[Restriction] {
        &self.restrictions
    }

    pub fn restrictions_on<'a>(&'a self, class: &'a Iri) -> impl Iterator<Item = &'a Restriction> + 'a {
        self.restrictions.iter().filter(move |r| &r.subject_class == class)
    }

    pub fn individuals(&self) -> impl ExactSizeIterator<Item = &NamedIndividual> {
        self.individuals.items.iter()
    }

    pub fn individual(&self, iri: &Iri) -> Option<&NamedIndividual> {
        self.individuals.get(iri)
    }

    pub fn is_empty(&self) -> bool {
        self.annotations.is_empty()
            && self.namespaces.is_empty()
            && self.classes.items.is_empty()
            && self.properties.items.is_empty()
            && self.restrictions.is_empty()
            && self.individuals.items.is_empty()
    }

    pub fn add_class(&mut self, class: OntoClass) -> Result<(), OntologyError> {
        if self.has_class(&class.iri) {
            return Err(OntologyError::DuplicateIri {
                kind: "class",
                iri: class.iri,
            });
        }
        let mut supers: Vec<Iri> = Vec::with_capacity(class.superclasses.len());
        for sup in class.superclasses {
            if sup == class.iri {
                return Err(OntologyError::CycleIntroduced {
                    class: class.iri,
                    superclass: sup,
                });
            }
            if !self.has_class(&sup) {
                return Err(OntologyError::UnresolvedSuperclass {
                    class: class.iri,
                    superclass: sup,
                });
            }
            if !sup.is_thing() && !supers.contains(&sup) {
                supers.push(sup);
            }
        }
        let iri = class.iri.clone();
        self.classes.insert(
            iri,
            OntoClass {
                iri: class.iri,
                superclasses: supers,
                annotations: class.annotations,
            },
        );
        Ok(())
    }

    /// Add the edge `class ⊑ superclass`. Re-adding an existing edge is a
    /// no-op.
    pub fn add_superclass(&mut self, class: &Iri, superclass: &Iri) -> Result<(), OntologyError> {
        if !self.classes.contains(class) {
            return Err(OntologyError::UnknownClass(class.clone()));
        }
        if !self.has_class(superclass) {
            return Err(OntologyError::UnresolvedSuperclass {
                class: class.clone(),
                superclass: superclass.clone(),
            });
        }
        if superclass.is_thing() {
            return Ok(());
        }
        if self.creates_cycle(class, superclass) {
            return Err(OntologyError::CycleIntroduced {
                class: class.clone(),
                superclass: superclass.clone(),
            });
        }
        let entry = self.classes.get_mut(class).expect("checked above");
        if !entry.superclasses.contains(superclass) {
            entry.superclasses.push(superclass.clone());
        }
        Ok(())
    }

    /// Would `class ⊑ superclass` close a loop?
    pub fn creates_cycle(&self, class: &Iri, superclass: &Iri) -> bool {
        superclass == class
            || self
                .superclass_closure(superclass)
                .map(|closure| closure.contains(class))
                .unwrap_or(false)
    }

    pub fn add_class_annotation(&mut self, class: &Iri, key: impl Into<String>, text: impl Into<String>) -> Result<(), OntologyError> {
        let entry = self
            .classes
            .get_mut(class)
            .ok_or_else(|| OntologyError::UnknownClass(class.clone()))?;
        entry.annotations.push((key.into(), text.into()));
        Ok(())
    }

    pub fn add_property(&mut self, decl: PropertyDecl) -> Result<(), OntologyError> {
        if self.properties.contains(&decl.iri) {
            return Err(OntologyError::DuplicateIri {
                kind: "property",
                iri: decl.iri,
            });
        }
        if is_reserved_prefix(decl.iri.prefix()) {
            return Err(violation(
                format!("property {}", decl.iri),
                "properties may not use a reserved prefix",
            ));
        }
        if let PropertyRange::Object(Some(range)) = &decl.range {
            if !self.has_class(range) {
                return Err(unresolved(format!("property {} range", decl.iri), range));
            }
        }
        self.properties.insert(decl.iri.clone(), decl);
        Ok(())
    }

    pub fn add_restriction(&mut self, restriction: Restriction) -> Result<(), OntologyError> {
        let path = || format!("restriction {restriction}");
        if !self.classes.contains(&restriction.subject_class) {
            return Err(unresolved(path(), &restriction.subject_class));
        }
        if !self.properties.contains(&restriction.on_property) {
            return Err(unresolved(path(), &restriction.on_property));
        }
        if let Some(on_class) = &restriction.on_class {
            if !self.has_class(on_class) {
                return Err(unresolved(path(), on_class));
            }
            if restriction.on_data_range.is_some() {
                return Err(violation(path(), "onClass and onDataRange are mutually exclusive"));
            }
        }
        if let Cardinality::Range(lo, hi) = restriction.cardinality {
            if lo > hi {
                return Err(violation(path(), format!("range minimum {lo} exceeds maximum {hi}")));
            }
        }
        if self.restrictions.contains(&restriction) {
            return Err(violation(path(), "restriction declared twice"));
        }
        self.restrictions.push(restriction);
        Ok(())
    }

    /// Add a named individual. Types and asserted properties must already be
    /// declared; object assertion targets are resolved by [`Self::validate`]
    /// so individuals may refer forward.
    pub fn add_individual(&mut self, individual: NamedIndividual) -> Result<(), OntologyError> {
        if self.individuals.contains(&individual.iri) {
            return Err(OntologyError::DuplicateIri {
                kind: "individual",
                iri: individual.iri,
            });
        }
        let path = |what: &str| format!("individual {} {what}", individual.iri);
        if individual.types.is_empty() {
            return Err(violation(path("types"), "an individual needs at least one type"));
        }
        for ty in &individual.types {
            if !self.has_class(ty) {
                return Err(unresolved(path("type"), ty));
            }
        }
        for assertion in &individual.data_assertions {
            match self.properties.get(&assertion.property) {
                None => return Err(unresolved(path("data assertion"), &assertion.property)),
                Some(decl) if decl.kind() != PropertyKind::Data => {
                    return Err(violation(
                        path("data assertion"),
                        format!("`{}` is an object property", assertion.property),
                    ))
                }
                Some(_) => {}
            }
        }
        for assertion in &individual.object_assertions {
            match self.properties.get(&assertion.property) {
                None => return Err(unresolved(path("object assertion"), &assertion.property)),
                Some(decl) if decl.kind() != PropertyKind::Object => {
                    return Err(violation(
                        path("object assertion"),
                        format!("`{}` is a data property", assertion.property),
                    ))
                }
                Some(_) => {}
            }
        }
        self.individuals.insert(individual.iri.clone(), individual);
        Ok(())
    }

    /// Whole-ontology checks: object assertion targets resolve and every IRI
    /// prefix in use is declared.
    pub fn validate(&self) -> Result<(), OntologyError> {
        for individual in self.individuals() {
            for assertion in &individual.object_assertions {
                if !self.individuals.contains(&assertion.target) {
                    return Err(unresolved(
                        format!("individual {} object assertion {}", individual.iri, assertion.property),
                        &assertion.target,
                    ));
                }
            }
        }
        let declared = |iri: &Iri| self.namespace_uri(iri.prefix()).is_some();
        let mut used: Vec<(&Iri, String)> = Vec::new();
        used.push((&self.header_iri, "ontology header".to_string()));
        for class in self.classes() {
            used.push((&class.iri, "class".to_string()));
        }
        for property in self.properties() {
            used.push((&property.iri, "property".to_string()));
        }
        for individual in self.individuals() {
            used.push((&individual.iri, "individual".to_string()));
        }
        for (iri, what) in used {
            if !declared(iri) {
                return Err(violation(
                    format!("{what} {iri}"),
                    format!("prefix `{}` is not declared", iri.prefix()),
                ));
            }
        }
        Ok(())
    }

    /// Build and fully validate an ontology from unchecked parts. Classes are
    /// declared first and linked second, so superclass order in the input
    /// does not matter.
    pub fn from_parts(parts: OntologyParts) -> Result<Ontology, OntologyError> {
        let header = parts
            .header_iri
            .ok_or_else(|| violation("owl:Ontology", "missing ontology header"))?;
        let mut ontology = Ontology::new(header);
        for (prefix, uri) in parts.namespaces {
            if is_reserved_prefix(&prefix) {
                continue;
            }
            ontology.add_namespace(prefix, uri)?;
        }
        ontology.annotations = parts.annotations;
        let mut edges = Vec::new();
        for class in parts.classes {
            edges.push((class.iri.clone(), class.superclasses));
            ontology.add_class(OntoClass {
                iri: class.iri,
                superclasses: Vec::new(),
                annotations: class.annotations,
            })?;
        }
        for (class, supers) in edges {
            for sup in supers {
                ontology.add_superclass(&class, &sup)?;
            }
        }
        for property in parts.properties {
            ontology.add_property(property)?;
        }
        for restriction in parts.restrictions {
            ontology.add_restriction(restriction)?;
        }
        for individual in parts.individuals {
            ontology.add_individual(individual)?;
        }
        ontology.validate()?;
        Ok(ontology)
    }

    pub fn into_parts(self) -> OntologyParts {
        OntologyParts {
            header_iri: Some(self.header_iri),
            annotations: self.annotations,
            namespaces: self.namespaces.into_iter().collect(),
            classes: self.classes.items,
            properties: self.properties.items,
            restrictions: self.restrictions,
            individuals: self.individuals.items,
        }
    }

    /// Every transitive superclass of `class`, breadth-first with
    /// declaration order breaking ties, each listed once and `owl:Thing`
    /// last. The closure of `owl:Thing` itself is empty.
    pub fn superclass_closure(&self, class: &Iri) -> Result<Vec<Iri>, OntologyError> {
        if class.is_thing() {
            return Ok(Vec::new());
        }
        let start = self
            .classes
            .get(class)
            .ok_or_else(|| OntologyError::UnknownClass(class.clone()))?;
        let mut seen: BTreeSet<&Iri> = BTreeSet::new();
        seen.insert(class);
        let mut out = Vec::new();
        let mut queue: VecDeque<&Iri> = start.superclasses.iter().collect();
        while let Some(next) = queue.pop_front() {
            if !seen.insert(next) {
                continue;
            }
            out.push(next.clone());
            if let Some(entry) = self.classes.get(next) {
                queue.extend(entry.superclasses.iter());
            }
        }
        out.push(Iri::thing());
        Ok(out)
    }

    /// True when `class` equals `ancestor` or has it in its closure.
    pub fn is_subclass_of(&self, class: &Iri, ancestor: &Iri) -> bool {
        class == ancestor
            || ancestor.is_thing()
            || self
                .superclass_closure(class)
                .map(|c| c.contains(ancestor))
                .unwrap_or(false)
    }

    /// Restrictions a class must satisfy: its own first, then those of each
    /// class in closure order, keeping the first of any constraint that is
    /// repeated on several ancestors.
    pub fn effective_restrictions(&self, class: &Iri) -> Result<Vec<Restriction>, OntologyError> {
        let closure = self.superclass_closure(class)?;
        let mut out: Vec<Restriction> = Vec::new();
        for owner in core::iter::once(class).chain(closure.iter()) {
            for restriction in self.restrictions_on(owner) {
                if !out.iter().any(|r| r.constraint() == restriction.constraint()) {
                    out.push(restriction.clone());
                }
            }
        }
        Ok(out)
    }
}
