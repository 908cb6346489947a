//! S-BPM models as ontologies.
//!
//! The vocabulary lives under the `sbpm` prefix. A model becomes one
//! `ProcessModel` individual linking subjects and messages; behaviors, states
//! and transitions are individuals numbered by position, and every list keeps
//! its order through assertion order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Alternative, Behavior, MessageSpec, SbpmModel, State, StateKind, Subject, SubjectKind, Transition, Violation};
use crate::iri::{Datatype, Iri};
use crate::ontology::{
    Cardinality, DataAssertion, NamedIndividual, ObjectAssertion, OntoClass, Ontology, OntologyError, PropertyDecl,
    PropertyKind, Restriction,
};

pub const SBPM_PREFIX: &str = "sbpm";
pub const SBPM_URI: &str = "urn:bpmnowl:sbpm#";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error("expected exactly one sbpm:ProcessModel individual, found {0}")]
    ModelCount(usize),
    #[error("individual `{individual}` has unknown S-BPM type `{class}`")]
    UnknownSbpmClass { individual: Iri, class: Iri },
    #[error("individual `{individual}`: {detail}")]
    Missing { individual: Iri, detail: String },
    #[error("individual `{individual}` violates `{restriction}` with {actual} value(s)")]
    Cardinality {
        individual: Iri,
        restriction: String,
        actual: usize,
    },
    #[error("behavior `{behavior}`: {detail}")]
    BehaviorInvariantViolation { behavior: Iri, detail: String },
    #[error("model is not well formed: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

fn sbpm(local: &str) -> Iri {
    Iri::new(SBPM_PREFIX, local).expect("vocabulary names are NCNames")
}

const CLASSES: [(&str, Option<&str>); 11] = [
    ("ProcessModel", None),
    ("Subject", None),
    ("ExternalSubject", Some("Subject")),
    ("MultiSubject", Some("Subject")),
    ("Message", None),
    ("Behavior", None),
    ("State", None),
    ("FunctionState", Some("State")),
    ("SendState", Some("State")),
    ("ReceiveState", Some("State")),
    ("Transition", None),
];

const DATA_PROPERTIES: [(&str, Datatype); 7] = [
    ("name", Datatype::String),
    ("taskName", Datatype::String),
    ("label", Datatype::String),
    ("stateId", Datatype::String),
    ("isStart", Datatype::Boolean),
    ("isEnd", Datatype::Boolean),
    ("payloadSchema", Datatype::String),
];

const OBJECT_PROPERTIES: [(&str, &str); 11] = [
    ("hasSubject", "Subject"),
    ("hasMessage", "Message"),
    ("sender", "Subject"),
    ("receiver", "Subject"),
    ("hasBehavior", "Behavior"),
    ("hasState", "State"),
    ("hasTransition", "Transition"),
    ("source", "State"),
    ("target", "State"),
    ("sends", "Message"),
    ("receives", "Message"),
];

enum Card {
    Data(&'static str, &'static str, Cardinality),
    Object(&'static str, &'static str, Cardinality, &'static str),
}

const RESTRICTIONS: [Card; 17] = [
    Card::Data("ProcessModel", "name", Cardinality::Exact(1)),
    Card::Object("ProcessModel", "hasSubject", Cardinality::Min(1), "Subject"),
    Card::Data("Subject", "name", Cardinality::Exact(1)),
    Card::Object("Subject", "hasBehavior", Cardinality::Max(1), "Behavior"),
    Card::Data("Message", "name", Cardinality::Exact(1)),
    Card::Data("Message", "payloadSchema", Cardinality::Max(1)),
    Card::Object("Message", "sender", Cardinality::Exact(1), "Subject"),
    Card::Object("Message", "receiver", Cardinality::Exact(1), "Subject"),
    Card::Object("Behavior", "hasState", Cardinality::Min(1), "State"),
    Card::Data("State", "stateId", Cardinality::Exact(1)),
    Card::Data("State", "isStart", Cardinality::Max(1)),
    Card::Data("State", "isEnd", Cardinality::Max(1)),
    Card::Data("FunctionState", "taskName", Cardinality::Exact(1)),
    Card::Object("SendState", "sends", Cardinality::Exact(1), "Message"),
    Card::Object("ReceiveState", "receives", Cardinality::Min(1), "Message"),
    Card::Object("Transition", "source", Cardinality::Exact(1), "State"),
    Card::Object("Transition", "target", Cardinality::Exact(1), "State"),
];

/// Vocabulary only: classes, properties and restrictions, no individuals.
pub fn sbpm_manifest() -> Ontology {
    let mut o = Ontology::new(sbpm("Vocabulary"));
    o.add_namespace(SBPM_PREFIX, SBPM_URI).expect("fresh ontology");
    for (class, sup) in CLASSES {
        o.add_class(OntoClass::with_superclasses(sbpm(class), sup.map(sbpm)))
            .expect("vocabulary is consistent");
    }
    for (p, dt) in DATA_PROPERTIES {
        o.add_property(PropertyDecl::data(sbpm(p), dt)).expect("vocabulary is consistent");
    }
    for (p, range) in OBJECT_PROPERTIES {
        o.add_property(PropertyDecl::object(sbpm(p), Some(sbpm(range))))
            .expect("vocabulary is consistent");
    }
    for r in RESTRICTIONS {
        let r = match r {
            Card::Data(class, p, card) => {
                let dt = DATA_PROPERTIES.iter().find(|(n, _)| *n == p).map(|(_, d)| *d);
                Restriction::attribute(sbpm(class), sbpm(p), card, dt)
            }
            Card::Object(class, p, card, on) => Restriction::child(sbpm(class), sbpm(p), card, sbpm(on)),
        };
        o.add_restriction(r).expect("vocabulary is consistent");
    }
    o
}

struct Builder {
    individual: NamedIndividual,
}

impl Builder {
    fn new(iri: Iri, class: &str) -> Self {
        Builder {
            individual: NamedIndividual::new(iri, sbpm(class)),
        }
    }

    fn data(mut self, property: &str, value: &str, datatype: Datatype) -> Self {
        self.individual.data_assertions.push(DataAssertion {
            property: sbpm(property),
            value: value.to_string(),
            datatype,
        });
        self
    }

    fn text(self, property: &str, value: &str) -> Self {
        self.data(property, value, Datatype::String)
    }

    fn flag(self, property: &str, on: bool) -> Self {
        if on {
            self.data(property, "true", Datatype::Boolean)
        } else {
            self
        }
    }

    fn object(mut self, property: &str, target: &Iri) -> Self {
        self.individual.object_assertions.push(ObjectAssertion {
            property: sbpm(property),
            target: target.clone(),
        });
        self
    }
}

/// Emit a well-formed model as an ontology over [`sbpm_manifest`].
pub fn emit_sbpm_owl(model: &SbpmModel) -> Result<Ontology, LoadError> {
    model.validate().map_err(LoadError::Invalid)?;
    let mut o = sbpm_manifest();
    o.add_annotation("model", model.name.clone());
    let subject_iri: BTreeMap<&str, Iri> = model
        .subjects
        .iter()
        .enumerate()
        .map(|(k, s)| (s.name.as_str(), sbpm(&format!("subject_{}", k + 1))))
        .collect();
    let message_iri = |name: &str, sender: &str, receiver: &str| -> Iri {
        let k = model
            .messages
            .iter()
            .position(|m| m.name == name && m.sender == sender && m.receiver == receiver)
            .expect("validated models declare every message they use");
        sbpm(&format!("message_{}", k + 1))
    };

    let mut root = Builder::new(sbpm("model"), "ProcessModel").text("name", &model.name);
    for s in &model.subjects {
        root = root.object("hasSubject", &subject_iri[s.name.as_str()]);
    }
    for k in 0..model.messages.len() {
        root = root.object("hasMessage", &sbpm(&format!("message_{}", k + 1)));
    }
    let mut out = alloc::vec![root.individual];

    for (k, s) in model.subjects.iter().enumerate() {
        let class = match s.kind {
            SubjectKind::Internal => "Subject",
            SubjectKind::External => "ExternalSubject",
            SubjectKind::Multi => "MultiSubject",
        };
        let mut b = Builder::new(subject_iri[s.name.as_str()].clone(), class).text("name", &s.name);
        if s.behavior.is_some() {
            b = b.object("hasBehavior", &sbpm(&format!("behavior_{}", k + 1)));
        }
        out.push(b.individual);
    }
    for (k, m) in model.messages.iter().enumerate() {
        let mut b = Builder::new(sbpm(&format!("message_{}", k + 1)), "Message")
            .text("name", &m.name)
            .object("sender", &subject_iri[m.sender.as_str()])
            .object("receiver", &subject_iri[m.receiver.as_str()]);
        if let Some(schema) = &m.payload_schema {
            b = b.text("payloadSchema", schema);
        }
        out.push(b.individual);
    }
    for (k, s) in model.subjects.iter().enumerate() {
        let Some(behavior) = &s.behavior else { continue };
        let k = k + 1;
        let state_iri = |id: &str| -> Iri {
            let j = behavior.states.iter().position(|st| st.id == id).expect("validated");
            sbpm(&format!("state_{k}_{}", j + 1))
        };
        let mut b = Builder::new(sbpm(&format!("behavior_{k}")), "Behavior");
        for j in 0..behavior.states.len() {
            b = b.object("hasState", &sbpm(&format!("state_{k}_{}", j + 1)));
        }
        for j in 0..behavior.transitions.len() {
            b = b.object("hasTransition", &sbpm(&format!("transition_{k}_{}", j + 1)));
        }
        out.push(b.individual);
        for (j, state) in behavior.states.iter().enumerate() {
            let iri = sbpm(&format!("state_{k}_{}", j + 1));
            let b = match &state.kind {
                StateKind::Function { task } => Builder::new(iri, "FunctionState").text("taskName", task),
                StateKind::Send { message, to } => {
                    Builder::new(iri, "SendState").object("sends", &message_iri(message, &s.name, to))
                }
                StateKind::Receive { alternatives } => alternatives.iter().fold(Builder::new(iri, "ReceiveState"), |b, a| {
                    b.object("receives", &message_iri(&a.message, &a.from, &s.name))
                }),
            };
            let b = b
                .text("stateId", &state.id)
                .flag("isStart", behavior.start_state == state.id)
                .flag("isEnd", behavior.is_end(&state.id));
            out.push(b.individual);
        }
        for (j, t) in behavior.transitions.iter().enumerate() {
            let b = Builder::new(sbpm(&format!("transition_{k}_{}", j + 1)), "Transition")
                .text("label", &t.label)
                .object("source", &state_iri(&t.from))
                .object("target", &state_iri(&t.to));
            out.push(b.individual);
        }
    }
    for individual in out {
        o.add_individual(individual)?;
    }
    o.validate()?;
    Ok(o)
}

struct Reader<'a> {
    ontology: &'a Ontology,
}

impl<'a> Reader<'a> {
    fn get(&self, iri: &Iri) -> Result<&'a NamedIndividual, LoadError> {
        self.ontology.individual(iri).ok_or_else(|| LoadError::Missing {
            individual: iri.clone(),
            detail: "no such individual".into(),
        })
    }

    fn text(&self, individual: &NamedIndividual, property: &str) -> Result<String, LoadError> {
        individual
            .data(&sbpm(property))
            .map(|a| a.value.clone())
            .ok_or_else(|| LoadError::Missing {
                individual: individual.iri.clone(),
                detail: format!("no sbpm:{property}"),
            })
    }

    fn flag(&self, individual: &NamedIndividual, property: &str) -> bool {
        individual.data(&sbpm(property)).is_some_and(|a| a.value == "true")
    }

    fn targets(&self, individual: &'a NamedIndividual, property: &str) -> Result<Vec<&'a NamedIndividual>, LoadError> {
        let p = sbpm(property);
        individual.objects(&p).map(|t| self.get(t)).collect()
    }

    fn one(&self, individual: &'a NamedIndividual, property: &str) -> Result<&'a NamedIndividual, LoadError> {
        match self.targets(individual, property)?.as_slice() {
            [one] => Ok(one),
            other => Err(LoadError::Missing {
                individual: individual.iri.clone(),
                detail: format!("expected one sbpm:{property}, found {}", other.len()),
            }),
        }
    }

    /// The most specific vocabulary class among the individual's types.
    fn class(&self, individual: &NamedIndividual) -> Result<&'static str, LoadError> {
        let mut found = None;
        for ty in &individual.types {
            let known = (ty.prefix() == SBPM_PREFIX)
                .then(|| CLASSES.iter().find(|(c, _)| *c == ty.local()))
                .flatten();
            match known {
                Some((c, _)) => found = Some(*c),
                None => {
                    return Err(LoadError::UnknownSbpmClass {
                        individual: individual.iri.clone(),
                        class: ty.clone(),
                    })
                }
            }
        }
        found.ok_or_else(|| LoadError::Missing {
            individual: individual.iri.clone(),
            detail: "no type".into(),
        })
    }

    fn check_cardinalities(&self) -> Result<(), LoadError> {
        for individual in self.ontology.individuals() {
            for ty in &individual.types {
                if !self.ontology.has_class(ty) {
                    continue;
                }
                for r in self.ontology.effective_restrictions(ty)? {
                    let actual = match self.ontology.property(&r.on_property).map(PropertyDecl::kind) {
                        Some(PropertyKind::Data) => individual
                            .data_assertions
                            .iter()
                            .filter(|a| a.property == r.on_property)
                            .count(),
                        _ => individual.objects(&r.on_property).count(),
                    };
                    if !r.cardinality.admits(actual) {
                        return Err(LoadError::Cardinality {
                            individual: individual.iri.clone(),
                            restriction: r.to_string(),
                            actual,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Rebuild a model from an ontology written by [`emit_sbpm_owl`] or by hand
/// against the same vocabulary.
pub fn load_sbpm_owl(ontology: &Ontology) -> Result<SbpmModel, LoadError> {
    let r = Reader { ontology };
    for individual in ontology.individuals() {
        r.class(individual)?;
    }
    r.check_cardinalities()?;
    let roots: Vec<&NamedIndividual> = ontology
        .individuals()
        .filter(|i| r.class(i).ok() == Some("ProcessModel"))
        .collect();
    let [root] = roots.as_slice() else {
        return Err(LoadError::ModelCount(roots.len()));
    };

    let mut subject_name: BTreeMap<&Iri, String> = BTreeMap::new();
    let subject_nodes = r.targets(root, "hasSubject")?;
    for s in &subject_nodes {
        subject_name.insert(&s.iri, r.text(s, "name")?);
    }
    let name_of = |s: &NamedIndividual| -> Result<String, LoadError> {
        subject_name.get(&s.iri).cloned().ok_or_else(|| LoadError::Missing {
            individual: s.iri.clone(),
            detail: "subject is not listed by the process model".into(),
        })
    };

    let mut messages = Vec::new();
    for m in r.targets(root, "hasMessage")? {
        messages.push(MessageSpec {
            name: r.text(m, "name")?,
            sender: name_of(r.one(m, "sender")?)?,
            receiver: name_of(r.one(m, "receiver")?)?,
            payload_schema: m.data(&sbpm("payloadSchema")).map(|a| a.value.clone()),
        });
    }

    let mut subjects = Vec::new();
    for s in subject_nodes {
        let kind = match r.class(s)? {
            "ExternalSubject" => SubjectKind::External,
            "MultiSubject" => SubjectKind::Multi,
            _ => SubjectKind::Internal,
        };
        let behavior = match r.targets(s, "hasBehavior")?.as_slice() {
            [] => None,
            [b] => Some(load_behavior(&r, b, &name_of)?),
            _ => unreachable!("cardinality checked"),
        };
        subjects.push(Subject {
            name: name_of(s)?,
            kind,
            behavior,
        });
    }

    let model = SbpmModel {
        name: r.text(root, "name")?,
        subjects,
        messages,
    };
    model.validate().map_err(LoadError::Invalid)?;
    Ok(model)
}

fn load_behavior(
    r: &Reader<'_>,
    b: &NamedIndividual,
    name_of: &dyn Fn(&NamedIndividual) -> Result<String, LoadError>,
) -> Result<Behavior, LoadError> {
    let invariant = |detail: String| LoadError::BehaviorInvariantViolation {
        behavior: b.iri.clone(),
        detail,
    };
    let mut states = Vec::new();
    let mut ids: BTreeMap<&Iri, String> = BTreeMap::new();
    let mut start = None;
    let mut end_states = BTreeSet::new();
    for st in r.targets(b, "hasState")? {
        let id = r.text(st, "stateId")?;
        let kind = match r.class(st)? {
            "FunctionState" => StateKind::Function {
                task: r.text(st, "taskName")?,
            },
            "SendState" => {
                let m = r.one(st, "sends")?;
                StateKind::Send {
                    message: r.text(m, "name")?,
                    to: name_of(r.one(m, "receiver")?)?,
                }
            }
            "ReceiveState" => StateKind::Receive {
                alternatives: r
                    .targets(st, "receives")?
                    .into_iter()
                    .map(|m| {
                        Ok(Alternative {
                            message: r.text(m, "name")?,
                            from: name_of(r.one(m, "sender")?)?,
                        })
                    })
                    .collect::<Result<_, LoadError>>()?,
            },
            other => return Err(invariant(format!("`{}` is a {other}, not a state kind", st.iri))),
        };
        if r.flag(st, "isStart") && start.replace(id.clone()).is_some() {
            return Err(invariant("more than one start state".into()));
        }
        if r.flag(st, "isEnd") {
            end_states.insert(id.clone());
        }
        ids.insert(&st.iri, id.clone());
        states.push(State { id, kind });
    }
    let state_id = |t: &NamedIndividual, property: &str| -> Result<String, LoadError> {
        let s = r.one(t, property)?;
        ids.get(&s.iri)
            .cloned()
            .ok_or_else(|| invariant(format!("transition `{}` leaves the behavior", t.iri)))
    };
    let mut transitions = Vec::new();
    for t in r.targets(b, "hasTransition")? {
        transitions.push(Transition {
            from: state_id(t, "source")?,
            label: r.text(t, "label")?,
            to: state_id(t, "target")?,
        });
    }
    Ok(Behavior {
        states,
        start_state: start.ok_or_else(|| invariant("no start state".into()))?,
        end_states,
        transitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbpm::fixtures::question_answer;

    #[test]
    fn manifest_is_valid() {
        let m = sbpm_manifest();
        m.validate().unwrap();
        assert_eq!(m.classes().len(), 11);
        assert!(m.is_subclass_of(&sbpm("SendState"), &sbpm("State")));
    }

    #[test]
    fn emit_then_load_is_identity() {
        let model = question_answer();
        let o = emit_sbpm_owl(&model).unwrap();
        assert_eq!(load_sbpm_owl(&o).unwrap(), model);
    }

    #[test]
    fn emitted_individuals_follow_the_numbering_scheme() {
        let o = emit_sbpm_owl(&question_answer()).unwrap();
        let await_state = o.individual(&sbpm("state_1_2")).unwrap();
        assert_eq!(await_state.types, [sbpm("ReceiveState")]);
        assert_eq!(
            await_state.objects(&sbpm("receives")).collect::<Vec<_>>(),
            [&sbpm("message_2"), &sbpm("message_3")]
        );
        assert_eq!(o.individual(&sbpm("state_1_1")).unwrap().data(&sbpm("isStart")).unwrap().value, "true");
    }

    #[test]
    fn two_start_states_are_rejected() {
        let o = emit_sbpm_owl(&question_answer()).unwrap();
        let mut parts = o.into_parts();
        let st = parts
            .individuals
            .iter_mut()
            .find(|i| i.iri == sbpm("state_1_3"))
            .unwrap();
        st.data_assertions.push(DataAssertion {
            property: sbpm("isStart"),
            value: "true".into(),
            datatype: Datatype::Boolean,
        });
        let o = Ontology::from_parts(parts).unwrap();
        assert!(matches!(
            load_sbpm_owl(&o),
            Err(LoadError::BehaviorInvariantViolation { .. })
        ));
    }

    #[test]
    fn foreign_type_is_rejected() {
        let mut o = emit_sbpm_owl(&question_answer()).unwrap();
        o.add_namespace("x", "urn:x#").unwrap();
        o.add_class(OntoClass::new(Iri::new("x", "Other").unwrap())).unwrap();
        o.add_individual(NamedIndividual::new(sbpm("stray"), Iri::new("x", "Other").unwrap()))
            .unwrap();
        assert!(matches!(load_sbpm_owl(&o), Err(LoadError::UnknownSbpmClass { .. })));
    }

    #[test]
    fn missing_sender_breaks_cardinality() {
        let o = emit_sbpm_owl(&question_answer()).unwrap();
        let mut parts = o.into_parts();
        let m = parts.individuals.iter_mut().find(|i| i.iri == sbpm("message_1")).unwrap();
        m.object_assertions.retain(|a| a.property != sbpm("sender"));
        let o = Ontology::from_parts(parts).unwrap();
        assert!(matches!(
            load_sbpm_owl(&o),
            Err(LoadError::Cardinality { actual: 0, .. })
        ));
    }
}
