//! The embedded BPMN reference ontology.
//!
//! The manifest below covers the elements of the descriptive conformance
//! subset plus everything the S-BPM translator accepts. Each restriction is
//! either attribute-kind (satisfied by an XML attribute, optionally carrying a
//! data range) or child-kind (satisfied by child elements of the `on_class`
//! class). Additional classes can be merged in with
//! [`ReferenceOntology::extend`].

mod translation;

pub use translation::{Direction, TranslationEntry, TranslationError, TranslationTable};

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bpmn::{is_conformance_namespace, well_known_prefix, QName, DI_NS, MODEL_NS};
use crate::iri::{Datatype, Iri};
use crate::ontology::{
    Cardinality, OntoClass, Ontology, OntologyError, OntologyParts, PropertyDecl, PropertyKind, Restriction,
};

pub const MODEL_PREFIX: &str = "bpmn2";
pub const DI_PREFIX: &str = "bpmndi";
pub const SUBSET_TAG: &str = "descriptive+sbpm";
pub const VERSION: &str = "bpmn-2.0.2-subset/1";

use Cardinality::{Exact, Max, Min};

const MAX1: Cardinality = Max(1);
const MIN0: Cardinality = Min(0);
const MIN1: Cardinality = Min(1);
const EXACT1: Cardinality = Exact(1);

use Datatype::{AnyType, Boolean, IdRef, Integer, String as Str};

/// One manifest restriction. Names are compact IRIs.
#[derive(Debug, Clone, Copy)]
enum Entry {
    /// Attribute-kind restriction with a data range.
    Attr(&'static str, Cardinality, Datatype),
    /// Attribute-kind restriction on an object property (id reference).
    Ref(&'static str, Cardinality),
    /// Child-kind restriction.
    Child(&'static str, Cardinality, &'static str),
}

use Entry::{Attr, Child, Ref};

struct ClassSpec {
    class: &'static str,
    supers: &'static [&'static str],
    restrictions: &'static [Entry],
}

const fn class(class: &'static str, supers: &'static [&'static str], restrictions: &'static [Entry]) -> ClassSpec {
    ClassSpec {
        class,
        supers,
        restrictions,
    }
}

/// Object properties whose range differs from the class of the child
/// elements that carry them.
const OBJECT_PROPERTIES: &[(&str, &str)] = &[
    ("bpmn2:processRef", "bpmn2:Process"),
    ("bpmn2:endpointRef", "bpmn2:EndPoint"),
    ("bpmn2:interfaceRef", "bpmn2:Interface"),
    ("bpmn2:participantMultiplicity", "bpmn2:ParticipantMultiplicity"),
    ("bpmn2:partnerEntityRef", "bpmn2:PartnerEntity"),
    ("bpmn2:partnerRoleRef", "bpmn2:PartnerRole"),
];

const MANIFEST: &[ClassSpec] = &[
    // packages
    class("bpmn2:ClassDiagramStructure", &[], &[]),
    class("bpmn2:Core", &["bpmn2:ClassDiagramStructure"], &[]),
    class("bpmn2:CollaborationPackage", &["bpmn2:ClassDiagramStructure"], &[]),
    class("bpmn2:ChoreographyPackage", &["bpmn2:ClassDiagramStructure"], &[]),
    class("bpmn2:ProcessPackage", &["bpmn2:ClassDiagramStructure"], &[]),
    class("bpmn2:DIPackage", &["bpmn2:ClassDiagramStructure"], &[]),
    // core
    class(
        "bpmn2:BaseElement",
        &["bpmn2:Core"],
        &[
            Attr("bpmn2:id", MAX1, Str),
            Child("bpmn2:documentation", MIN0, "bpmn2:Documentation"),
            Child("bpmn2:extensionDefinitions", MAX1, "bpmn2:ExtensionDefinition"),
        ],
    ),
    class(
        "bpmn2:Documentation",
        &["bpmn2:Core", "bpmn2:BaseElement"],
        &[Attr("bpmn2:textFormat", MAX1, Str)],
    ),
    class("bpmn2:ExtensionDefinition", &["bpmn2:Core"], &[]),
    class("bpmn2:RootElement", &["bpmn2:Core", "bpmn2:BaseElement"], &[]),
    class(
        "bpmn2:Definitions",
        &["bpmn2:Core", "bpmn2:BaseElement"],
        &[
            Attr("bpmn2:name", MAX1, Str),
            Attr("bpmn2:targetNamespace", EXACT1, Str),
            Attr("bpmn2:expressionLanguage", MAX1, Str),
            Attr("bpmn2:typeLanguage", MAX1, Str),
            Attr("bpmn2:exporter", MAX1, Str),
            Attr("bpmn2:exporterVersion", MAX1, Str),
            Child("bpmn2:rootElements", MIN0, "bpmn2:RootElement"),
            Child("bpmn2:diagrams", MIN0, "bpmndi:BPMNDiagram"),
        ],
    ),
    class(
        "bpmn2:ItemDefinition",
        &["bpmn2:Core", "bpmn2:RootElement"],
        &[
            Attr("bpmn2:structureRef", MAX1, Str),
            Attr("bpmn2:isCollection", MAX1, Boolean),
            Attr("bpmn2:itemKind", MAX1, Str),
        ],
    ),
    class(
        "bpmn2:Message",
        &["bpmn2:Core", "bpmn2:RootElement"],
        &[Attr("bpmn2:name", MIN1, Str), Attr("bpmn2:itemRef", MAX1, IdRef)],
    ),
    class("bpmn2:EventDefinition", &["bpmn2:Core", "bpmn2:RootElement"], &[]),
    class(
        "bpmn2:Interface",
        &["bpmn2:Core", "bpmn2:RootElement"],
        &[Attr("bpmn2:name", MAX1, Str), Attr("bpmn2:implementationRef", MAX1, Str)],
    ),
    class("bpmn2:EndPoint", &["bpmn2:Core", "bpmn2:RootElement"], &[]),
    class(
        "bpmn2:Category",
        &["bpmn2:Core", "bpmn2:RootElement"],
        &[Attr("bpmn2:name", MIN1, Str)],
    ),
    class(
        "bpmn2:FlowElement",
        &["bpmn2:Core", "bpmn2:BaseElement"],
        &[Attr("bpmn2:name", MAX1, Str)],
    ),
    class(
        "bpmn2:FlowNode",
        &["bpmn2:Core", "bpmn2:FlowElement"],
        &[
            Child("bpmn2:incoming", MIN0, "bpmn2:Incoming"),
            Child("bpmn2:outgoing", MIN0, "bpmn2:Outgoing"),
        ],
    ),
    // Holders for id references serialized as element text.
    class("bpmn2:ElementReference", &["bpmn2:Core"], &[]),
    class("bpmn2:Incoming", &["bpmn2:ElementReference"], &[]),
    class("bpmn2:Outgoing", &["bpmn2:ElementReference"], &[]),
    class("bpmn2:FlowNodeRef", &["bpmn2:ElementReference"], &[]),
    class("bpmn2:EndPointRef", &["bpmn2:ElementReference"], &[]),
    class("bpmn2:InterfaceRef", &["bpmn2:ElementReference"], &[]),
    class("bpmn2:PartnerEntityRef", &["bpmn2:ElementReference"], &[]),
    class("bpmn2:PartnerRoleRef", &["bpmn2:ElementReference"], &[]),
    class("bpmn2:SourceRef", &["bpmn2:ElementReference"], &[]),
    class("bpmn2:TargetRef", &["bpmn2:ElementReference"], &[]),
    // collaboration
    class(
        "bpmn2:Collaboration",
        &["bpmn2:CollaborationPackage", "bpmn2:RootElement"],
        &[
            Attr("bpmn2:name", MIN1, Str),
            Attr("bpmn2:isClosed", MAX1, Boolean),
            Child("bpmn2:participants", MIN0, "bpmn2:Participant"),
            Child("bpmn2:messageFlows", MIN0, "bpmn2:MessageFlow"),
        ],
    ),
    class(
        "bpmn2:Participant",
        &["bpmn2:CollaborationPackage", "bpmn2:BaseElement"],
        &[
            Attr("bpmn2:name", MAX1, Str),
            Ref("bpmn2:processRef", MAX1),
            Child("bpmn2:endpointRef", MIN0, "bpmn2:EndPointRef"),
            Child("bpmn2:interfaceRef", MIN0, "bpmn2:InterfaceRef"),
            Child("bpmn2:participantMultiplicity", MAX1, "bpmn2:ParticipantMultiplicity"),
            Child("bpmn2:partnerEntityRef", MIN0, "bpmn2:PartnerEntityRef"),
            Child("bpmn2:partnerRoleRef", MIN0, "bpmn2:PartnerRoleRef"),
        ],
    ),
    class(
        "bpmn2:ParticipantMultiplicity",
        &["bpmn2:CollaborationPackage", "bpmn2:BaseElement"],
        &[Attr("bpmn2:minimum", MAX1, Integer), Attr("bpmn2:maximum", MAX1, Integer)],
    ),
    class(
        "bpmn2:MessageFlow",
        &["bpmn2:CollaborationPackage", "bpmn2:BaseElement"],
        &[
            Attr("bpmn2:name", MIN1, Str),
            Attr("bpmn2:sourceRef", EXACT1, IdRef),
            Attr("bpmn2:targetRef", EXACT1, IdRef),
            Attr("bpmn2:messageRef", MAX1, IdRef),
        ],
    ),
    class(
        "bpmn2:PartnerEntity",
        &["bpmn2:CollaborationPackage", "bpmn2:RootElement"],
        &[Attr("bpmn2:name", MAX1, Str)],
    ),
    class(
        "bpmn2:PartnerRole",
        &["bpmn2:CollaborationPackage", "bpmn2:RootElement"],
        &[Attr("bpmn2:name", MAX1, Str)],
    ),
    // choreography
    class("bpmn2:Choreography", &["bpmn2:ChoreographyPackage", "bpmn2:Collaboration"], &[]),
    // process
    class(
        "bpmn2:Process",
        &["bpmn2:ProcessPackage", "bpmn2:RootElement"],
        &[
            Attr("bpmn2:name", MAX1, Str),
            Attr("bpmn2:processType", MAX1, Str),
            Attr("bpmn2:isExecutable", MAX1, Boolean),
            Attr("bpmn2:isClosed", MAX1, Boolean),
            Child("bpmn2:laneSets", MIN0, "bpmn2:LaneSet"),
            Child("bpmn2:flowElements", MIN0, "bpmn2:FlowElement"),
        ],
    ),
    class(
        "bpmn2:LaneSet",
        &["bpmn2:ProcessPackage", "bpmn2:BaseElement"],
        &[Attr("bpmn2:name", MAX1, Str), Child("bpmn2:lane", MIN1, "bpmn2:Lane")],
    ),
    class(
        "bpmn2:Lane",
        &["bpmn2:ProcessPackage", "bpmn2:BaseElement"],
        &[
            Attr("bpmn2:name", MAX1, Str),
            Attr("bpmn2:partitionElementRef", MAX1, IdRef),
            Child("bpmn2:flowNodeRef", MIN0, "bpmn2:FlowNodeRef"),
            Child("bpmn2:childLaneSet", MAX1, "bpmn2:LaneSet"),
        ],
    ),
    class(
        "bpmn2:SequenceFlow",
        &["bpmn2:ProcessPackage", "bpmn2:FlowElement"],
        &[
            Attr("bpmn2:sourceRef", EXACT1, IdRef),
            Attr("bpmn2:targetRef", EXACT1, IdRef),
            Attr("bpmn2:isImmediate", MAX1, Boolean),
        ],
    ),
    class(
        "bpmn2:Event",
        &["bpmn2:ProcessPackage", "bpmn2:FlowNode"],
        &[Child("bpmn2:eventDefinitions", MIN0, "bpmn2:EventDefinition")],
    ),
    class(
        "bpmn2:CatchEvent",
        &["bpmn2:Event"],
        &[Attr("bpmn2:parallelMultiple", MAX1, Boolean)],
    ),
    class("bpmn2:ThrowEvent", &["bpmn2:Event"], &[]),
    class(
        "bpmn2:StartEvent",
        &["bpmn2:CatchEvent"],
        &[Attr("bpmn2:isInterrupting", MAX1, Boolean)],
    ),
    class("bpmn2:IntermediateCatchEvent", &["bpmn2:CatchEvent"], &[]),
    class("bpmn2:IntermediateThrowEvent", &["bpmn2:ThrowEvent"], &[]),
    class("bpmn2:EndEvent", &["bpmn2:ThrowEvent"], &[]),
    class(
        "bpmn2:MessageEventDefinition",
        &["bpmn2:ProcessPackage", "bpmn2:EventDefinition"],
        &[Attr("bpmn2:messageRef", MAX1, IdRef), Attr("bpmn2:operationRef", MAX1, IdRef)],
    ),
    class(
        "bpmn2:Activity",
        &["bpmn2:ProcessPackage", "bpmn2:FlowNode"],
        &[
            Attr("bpmn2:isForCompensation", MAX1, Boolean),
            Attr("bpmn2:startQuantity", MAX1, Integer),
            Attr("bpmn2:completionQuantity", MAX1, Integer),
            Attr("bpmn2:default", MAX1, IdRef),
            Child("bpmn2:dataInputAssociation", MIN0, "bpmn2:DataInputAssociation"),
            Child("bpmn2:dataOutputAssociation", MIN0, "bpmn2:DataOutputAssociation"),
        ],
    ),
    class("bpmn2:Task", &["bpmn2:Activity"], &[]),
    class(
        "bpmn2:SendTask",
        &["bpmn2:Task"],
        &[
            Attr("bpmn2:messageRef", MAX1, IdRef),
            Attr("bpmn2:implementation", MAX1, Str),
            Attr("bpmn2:operationRef", MAX1, IdRef),
        ],
    ),
    class(
        "bpmn2:ReceiveTask",
        &["bpmn2:Task"],
        &[
            Attr("bpmn2:messageRef", MAX1, IdRef),
            Attr("bpmn2:instantiate", MAX1, Boolean),
            Attr("bpmn2:implementation", MAX1, Str),
            Attr("bpmn2:operationRef", MAX1, IdRef),
        ],
    ),
    class(
        "bpmn2:UserTask",
        &["bpmn2:Task"],
        &[Attr("bpmn2:implementation", MAX1, Str)],
    ),
    class(
        "bpmn2:Gateway",
        &["bpmn2:ProcessPackage", "bpmn2:FlowNode"],
        &[Attr("bpmn2:gatewayDirection", MAX1, Str)],
    ),
    class(
        "bpmn2:ExclusiveGateway",
        &["bpmn2:Gateway"],
        &[Attr("bpmn2:default", MAX1, IdRef)],
    ),
    class(
        "bpmn2:EventBasedGateway",
        &["bpmn2:Gateway"],
        &[
            Attr("bpmn2:instantiate", MAX1, Boolean),
            Attr("bpmn2:eventGatewayType", MAX1, Str),
        ],
    ),
    class(
        "bpmn2:DataObject",
        &["bpmn2:ProcessPackage", "bpmn2:FlowElement"],
        &[Attr("bpmn2:itemSubjectRef", MAX1, IdRef), Attr("bpmn2:isCollection", MAX1, Boolean)],
    ),
    class(
        "bpmn2:DataStore",
        &["bpmn2:ProcessPackage", "bpmn2:RootElement"],
        &[
            Attr("bpmn2:name", MIN1, Str),
            Attr("bpmn2:capacity", MAX1, Integer),
            Attr("bpmn2:isUnlimited", MAX1, Boolean),
            Attr("bpmn2:itemSubjectRef", MAX1, IdRef),
        ],
    ),
    class(
        "bpmn2:DataStoreReference",
        &["bpmn2:ProcessPackage", "bpmn2:FlowElement"],
        &[Attr("bpmn2:dataStoreRef", MAX1, IdRef), Attr("bpmn2:itemSubjectRef", MAX1, IdRef)],
    ),
    // Tools disagree on whether an association's source/target are
    // attributes or child elements; the child form is pinned here.
    class(
        "bpmn2:DataAssociation",
        &["bpmn2:ProcessPackage", "bpmn2:BaseElement"],
        &[
            Child("bpmn2:sourceRef", MIN0, "bpmn2:SourceRef"),
            Child("bpmn2:targetRef", EXACT1, "bpmn2:TargetRef"),
        ],
    ),
    class("bpmn2:DataInputAssociation", &["bpmn2:DataAssociation"], &[]),
    class("bpmn2:DataOutputAssociation", &["bpmn2:DataAssociation"], &[]),
    // diagram interchange
    class(
        "bpmndi:DiagramElement",
        &["bpmn2:DIPackage"],
        &[Attr("bpmndi:id", MAX1, Str)],
    ),
    class(
        "bpmndi:BPMNDiagram",
        &["bpmndi:DiagramElement"],
        &[
            Attr("bpmndi:name", MAX1, Str),
            Attr("bpmndi:documentation", MAX1, Str),
            Attr("bpmndi:resolution", MAX1, AnyType),
            Child("bpmndi:plane", EXACT1, "bpmndi:BPMNPlane"),
            Child("bpmndi:labelStyles", MIN0, "bpmndi:BPMNLabelStyle"),
        ],
    ),
    class(
        "bpmndi:BPMNPlane",
        &["bpmndi:DiagramElement"],
        &[
            Attr("bpmndi:bpmnElement", MAX1, IdRef),
            Child("bpmndi:planeElement", MIN0, "bpmndi:DiagramElement"),
        ],
    ),
    class(
        "bpmndi:BPMNShape",
        &["bpmndi:DiagramElement"],
        &[
            Attr("bpmndi:bpmnElement", MAX1, IdRef),
            Attr("bpmndi:isHorizontal", MAX1, Boolean),
            Attr("bpmndi:isExpanded", MAX1, Boolean),
            Attr("bpmndi:isMarkerVisible", MAX1, Boolean),
            Attr("bpmndi:isMessageVisible", MAX1, Boolean),
            Attr("bpmndi:participantBandKind", MAX1, Str),
            Attr("bpmndi:choreographyActivityShape", MAX1, IdRef),
            Child("bpmndi:label", MAX1, "bpmndi:BPMNLabel"),
        ],
    ),
    class(
        "bpmndi:BPMNEdge",
        &["bpmndi:DiagramElement"],
        &[
            Attr("bpmndi:bpmnElement", MAX1, IdRef),
            Attr("bpmndi:sourceElement", MAX1, IdRef),
            Attr("bpmndi:targetElement", MAX1, IdRef),
            Attr("bpmndi:messageVisibleKind", MAX1, Str),
            Child("bpmndi:label", MAX1, "bpmndi:BPMNLabel"),
        ],
    ),
    class(
        "bpmndi:BPMNLabel",
        &["bpmndi:DiagramElement"],
        &[Attr("bpmndi:labelStyle", MAX1, IdRef)],
    ),
    class("bpmndi:BPMNLabelStyle", &["bpmndi:DiagramElement"], &[]),
];

fn iri(s: &str) -> Iri {
    s.parse().expect("manifest IRIs are well formed")
}

/// The reference ontology plus its provenance labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceOntology {
    pub ontology: Ontology,
    pub subset_tag: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error("extension redefines `{0}`")]
    MergeConflict(String),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// Build the embedded reference ontology.
pub fn build_reference() -> ReferenceOntology {
    let mut ont = Ontology::new(iri("bpmn2:Reference"));
    ont.add_namespace(MODEL_PREFIX, MODEL_NS).expect("fresh ontology");
    ont.add_namespace(DI_PREFIX, DI_NS).expect("fresh ontology");
    ont.add_annotation("subset", SUBSET_TAG);
    ont.add_annotation("version", VERSION);

    for spec in MANIFEST {
        let class = OntoClass::with_superclasses(iri(spec.class), spec.supers.iter().map(|s| iri(s)));
        ont.add_class(class).expect("manifest classes are declared parents first");
    }
    for (property, range) in OBJECT_PROPERTIES {
        ont.add_property(PropertyDecl::object(iri(property), Some(iri(range))))
            .expect("manifest object properties are unique");
    }
    for spec in MANIFEST {
        for entry in spec.restrictions {
            let decl = match *entry {
                Attr(p, _, dt) => PropertyDecl::data(iri(p), dt),
                Ref(p, _) => PropertyDecl::object(iri(p), None),
                Child(p, _, on_class) => PropertyDecl::object(iri(p), Some(iri(on_class))),
            };
            if ont.property(&decl.iri).is_none() {
                ont.add_property(decl).expect("checked above");
            }
        }
    }
    for spec in MANIFEST {
        let subject = iri(spec.class);
        for entry in spec.restrictions {
            let restriction = match *entry {
                Attr(p, card, dt) => Restriction::attribute(subject.clone(), iri(p), card, Some(dt)),
                Ref(p, card) => Restriction::attribute(subject.clone(), iri(p), card, None),
                Child(p, card, on_class) => Restriction::child(subject.clone(), iri(p), card, iri(on_class)),
            };
            ont.add_restriction(restriction).expect("manifest restrictions are valid");
        }
    }
    debug_assert!(ont.validate().is_ok());
    ReferenceOntology {
        ontology: ont,
        subset_tag: SUBSET_TAG.to_string(),
        version: VERSION.to_string(),
    }
}

/// `task` → `Task`.
pub fn class_local_name(standard: &str) -> String {
    let mut chars = standard.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Reference class an element maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassLookup {
    /// Element namespace is outside the conformance set.
    Ignored,
    Known(Iri),
    /// Candidate class name that the reference does not declare.
    Unknown(Iri),
}

impl ReferenceOntology {
    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    /// Merge an extension. Entities already present must be identical;
    /// everything new is appended. An empty extension is the identity.
    pub fn extend(&self, extension: OntologyParts) -> Result<ReferenceOntology, ExtensionError> {
        if extension.is_empty() {
            return Ok(self.clone());
        }
        let mut parts = self.ontology.clone().into_parts();
        for (prefix, uri) in extension.namespaces {
            match parts.namespaces.iter().find(|(p, _)| *p == prefix) {
                Some((_, existing)) if *existing != uri => {
                    return Err(ExtensionError::MergeConflict(alloc::format!("xmlns:{prefix}")))
                }
                Some(_) => {}
                None => parts.namespaces.push((prefix, uri)),
            }
        }
        for class in extension.classes {
            match parts.classes.iter().find(|c| c.iri == class.iri) {
                Some(existing) if *existing != class => {
                    return Err(ExtensionError::MergeConflict(class.iri.to_string()))
                }
                Some(_) => {}
                None => parts.classes.push(class),
            }
        }
        for property in extension.properties {
            match parts.properties.iter().find(|p| p.iri == property.iri) {
                Some(existing) if *existing != property => {
                    return Err(ExtensionError::MergeConflict(property.iri.to_string()))
                }
                Some(_) => {}
                None => parts.properties.push(property),
            }
        }
        for restriction in extension.restrictions {
            if parts.restrictions.contains(&restriction) {
                continue;
            }
            let clash = parts.restrictions.iter().any(|r| {
                r.subject_class == restriction.subject_class && r.on_property == restriction.on_property
            });
            if clash {
                return Err(ExtensionError::MergeConflict(alloc::format!(
                    "{} {}",
                    restriction.subject_class,
                    restriction.on_property
                )));
            }
            parts.restrictions.push(restriction);
        }
        for individual in extension.individuals {
            match parts.individuals.iter().find(|i| i.iri == individual.iri) {
                Some(existing) if *existing != individual => {
                    return Err(ExtensionError::MergeConflict(individual.iri.to_string()))
                }
                Some(_) => {}
                None => parts.individuals.push(individual),
            }
        }
        Ok(ReferenceOntology {
            ontology: Ontology::from_parts(parts)?,
            subset_tag: self.subset_tag.clone(),
            version: self.version.clone(),
        })
    }

    /// Standard local names of `class` and its ancestors, most specific
    /// first; used as translation scopes.
    pub fn scopes(&self, class: Option<&Iri>) -> Vec<String> {
        let Some(class) = class else {
            return Vec::new();
        };
        let mut out = alloc::vec![class.local().to_string()];
        if let Ok(closure) = self.ontology.superclass_closure(class) {
            out.extend(closure.iter().filter(|c| !c.is_thing()).map(|c| c.local().to_string()));
        }
        out
    }

    /// Map an element name to its reference class. `parent` is the class of
    /// the enclosing element, which selects scoped translations.
    pub fn class_for(&self, element: &QName, parent: Option<&Iri>, table: &TranslationTable) -> ClassLookup {
        if !is_conformance_namespace(element.ns()) {
            return ClassLookup::Ignored;
        }
        let prefix = element
            .ns()
            .and_then(well_known_prefix)
            .expect("conformance namespaces have fixed prefixes");
        let scopes = self.scopes(parent);
        let standard = table.translate_in(scopes.iter().map(String::as_str), &element.local, Direction::ToStandard);
        match Iri::new(prefix, class_local_name(&standard)) {
            Ok(candidate) if self.ontology.has_class(&candidate) => ClassLookup::Known(candidate),
            Ok(candidate) => ClassLookup::Unknown(candidate),
            // Names that are not NCNames cannot come out of an XML parser.
            Err(_) => ClassLookup::Ignored,
        }
    }

    /// Property an attribute of `element` maps to. Unprefixed attributes take
    /// the element's namespace. `None` for attributes outside the conformance
    /// namespaces.
    pub fn property_for(&self, element: &QName, attribute: &QName, table: &TranslationTable) -> Option<Iri> {
        let ns = match attribute.ns() {
            None => element.ns(),
            Some(ns) => Some(ns),
        };
        if !is_conformance_namespace(ns) {
            return None;
        }
        let prefix = ns.and_then(well_known_prefix)?;
        let standard = table.translate(&attribute.local, Direction::ToStandard);
        Iri::new(prefix, standard).ok()
    }

    pub fn property_kind(&self, property: &Iri) -> Option<PropertyKind> {
        self.ontology.property(property).map(PropertyDecl::kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn participant_restrictions_match_the_standard_table() {
        let r = build_reference();
        let participant = iri("bpmn2:Participant");
        let own: Vec<&Restriction> = r.ontology.restrictions_on(&participant).collect();
        assert_eq!(own.len(), 7);
        let name = own.iter().find(|r| r.on_property == iri("bpmn2:name")).unwrap();
        assert_eq!(name.cardinality, Max(1));
        assert_eq!(name.on_data_range, Some(Datatype::String));
        assert!(name.on_class.is_none());
        assert_eq!(
            r.ontology.property(&iri("bpmn2:processRef")).unwrap().range,
            crate::ontology::PropertyRange::Object(Some(iri("bpmn2:Process")))
        );
        // own 7 + BaseElement's id, documentation, extensionDefinitions
        assert_eq!(r.ontology.effective_restrictions(&participant).unwrap().len(), 10);
    }

    #[test]
    fn lane_set_lane_is_child_kind() {
        let r = build_reference();
        let lane_set = iri("bpmn2:LaneSet");
        let lane = r
            .ontology
            .restrictions_on(&lane_set)
            .find(|r| r.on_property == iri("bpmn2:lane"))
            .unwrap();
        assert_eq!(lane.on_class, Some(iri("bpmn2:Lane")));
        assert_eq!(lane.cardinality, Min(1));
    }

    #[test]
    fn send_task_inherits_id() {
        let r = build_reference();
        let eff = r.ontology.effective_restrictions(&iri("bpmn2:SendTask")).unwrap();
        assert!(eff
            .iter()
            .any(|r| r.on_property == iri("bpmn2:id") && r.subject_class == iri("bpmn2:BaseElement")));
    }

    #[test]
    fn required_classes_present() {
        let r = build_reference();
        for name in [
            "BaseElement", "RootElement", "Definitions", "Collaboration", "Participant", "Process", "LaneSet",
            "Lane", "FlowNode", "StartEvent", "EndEvent", "Task", "SendTask", "ReceiveTask", "UserTask",
            "ExclusiveGateway", "EventBasedGateway", "IntermediateThrowEvent", "IntermediateCatchEvent",
            "MessageEventDefinition", "SequenceFlow", "MessageFlow", "Message", "DataObject", "DataStore",
            "ItemDefinition", "ExtensionDefinition", "Documentation", "ChoreographyPackage",
            "CollaborationPackage", "Core", "ProcessPackage",
        ] {
            assert!(r.ontology.has_class(&Iri::new("bpmn2", name).unwrap()), "{name}");
        }
    }

    #[test]
    fn data_ranges_agree_with_property_declarations() {
        let r = build_reference();
        for restriction in r.ontology.restrictions() {
            assert!(restriction.on_class.is_none() || restriction.on_data_range.is_none());
            if let Some(dt) = restriction.on_data_range {
                let decl = r.ontology.property(&restriction.on_property).unwrap();
                assert_eq!(decl.range, crate::ontology::PropertyRange::Data(dt), "{restriction}");
            }
        }
    }

    #[test]
    fn stable_across_builds() {
        assert_eq!(build_reference(), build_reference());
    }

    #[test]
    fn class_lookup_translates_and_scopes() {
        let r = build_reference();
        let t = TranslationTable::bpmn_default();
        assert_eq!(
            r.class_for(&QName::model("task"), None, &t),
            ClassLookup::Known(iri("bpmn2:Task"))
        );
        assert_eq!(
            r.class_for(&QName::model("extensionElements"), None, &t),
            ClassLookup::Known(iri("bpmn2:ExtensionDefinition"))
        );
        assert_eq!(
            r.class_for(&QName::model("childLaneSet"), Some(&iri("bpmn2:Lane")), &t),
            ClassLookup::Known(iri("bpmn2:LaneSet"))
        );
        assert_eq!(
            r.class_for(&QName::model("frobnicate"), None, &t),
            ClassLookup::Unknown(iri("bpmn2:Frobnicate"))
        );
        assert_eq!(
            r.class_for(&QName::new(Some("urn:vendor"), Some("v"), "thing"), None, &t),
            ClassLookup::Ignored
        );
        let shape = QName::new(Some(DI_NS), Some("bpmndi"), "BPMNShape");
        assert_eq!(r.class_for(&shape, None, &t), ClassLookup::Known(iri("bpmndi:BPMNShape")));
        assert_eq!(
            r.property_for(&shape, &QName::local("bpmnElement"), &t),
            Some(iri("bpmndi:bpmnElement"))
        );
    }

    #[test]
    fn extension_merge() {
        let r = build_reference();
        assert_eq!(r.extend(OntologyParts::default()).unwrap(), r);

        let parallel = OntologyParts {
            classes: vec![OntoClass::with_superclasses(iri("bpmn2:ParallelGateway"), [iri("bpmn2:Gateway")])],
            ..Default::default()
        };
        let merged = r.extend(parallel).unwrap();
        assert!(merged.ontology.is_subclass_of(&iri("bpmn2:ParallelGateway"), &iri("bpmn2:FlowNode")));

        let redefined = OntologyParts {
            restrictions: vec![Restriction::attribute(
                iri("bpmn2:Participant"),
                iri("bpmn2:name"),
                Exact(1),
                Some(Datatype::String),
            )],
            ..Default::default()
        };
        assert_eq!(
            r.extend(redefined).unwrap_err(),
            ExtensionError::MergeConflict("bpmn2:Participant bpmn2:name".into())
        );

        let moved = OntologyParts {
            classes: vec![OntoClass::new(iri("bpmn2:Participant"))],
            ..Default::default()
        };
        assert!(matches!(r.extend(moved), Err(ExtensionError::MergeConflict(_))));
    }
}
