//! S-BPM model → BPMN collaboration.
//!
//! The output only uses constructs the forward translation understands, so
//! translating it again gives back the model whenever the model has the shape
//! the forward translation produces: transitions grouped by source state in
//! state order, every message bound to one send state and one receive
//! alternative, and non-empty labels on branching transitions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Behavior, SbpmModel, StateKind, SubjectKind};
use crate::bpmn::{BpmnDocument, BpmnElement, DocumentError, QName, MODEL_NS};

pub const EXPORT_NAMESPACE: &str = "urn:bpmnowl:sbpm-export";

fn el(local: &str, id: &str) -> BpmnElement {
    BpmnElement::new(QName::model(local)).with_attr("id", id)
}

fn flow(id: &str, source: &str, target: &str, name: &str) -> BpmnElement {
    let mut f = el("sequenceFlow", id);
    if !name.is_empty() {
        f = f.with_attr("name", name);
    }
    f.with_attr("sourceRef", source).with_attr("targetRef", target)
}

fn catch_id(gateway: &str, i: usize) -> String {
    format!("{gateway}_{}", i + 1)
}

/// BPMN node that receives `message` from `sender` in `behavior`.
fn receive_node(behavior: &Behavior, message: &str, sender: &str) -> Option<String> {
    behavior.states.iter().find_map(|s| match &s.kind {
        StateKind::Receive { alternatives } => alternatives
            .iter()
            .position(|a| a.message == message && a.from == sender)
            .map(|i| if alternatives.len() == 1 { s.id.clone() } else { catch_id(&s.id, i) }),
        _ => None,
    })
}

fn send_node(behavior: &Behavior, message: &str, receiver: &str) -> Option<String> {
    behavior.states.iter().find_map(|s| match &s.kind {
        StateKind::Send { message: m, to } if m == message && to == receiver => Some(s.id.clone()),
        _ => None,
    })
}

fn process(k: usize, name: &str, b: &Behavior) -> BpmnElement {
    let mut p = el("process", &format!("Process_{k}")).with_attr("name", name);
    let mut flows: Vec<BpmnElement> = Vec::new();
    let mut next_flow = |source: &str, target: &str, label: &str| {
        flows.push(flow(&format!("Flow_{k}_{}", flows.len() + 1), source, target, label));
    };
    let start = format!("Start_{k}");
    p.children.push(el("startEvent", &start));
    next_flow(&start, &b.start_state, "");
    for s in &b.states {
        let outgoing: Vec<_> = b.outgoing(&s.id).collect();
        match &s.kind {
            StateKind::Function { task } if b.is_end(&s.id) => {
                let mut e = el("endEvent", &s.id);
                if !task.is_empty() {
                    e = e.with_attr("name", task);
                }
                p.children.push(e);
            }
            StateKind::Function { task } => {
                let mut t = el("task", &s.id);
                if !task.is_empty() {
                    t = t.with_attr("name", task);
                }
                p.children.push(t);
                if outgoing.len() > 1 {
                    let split = format!("{}_split", s.id);
                    p.children.push(el("exclusiveGateway", &split));
                    next_flow(&s.id, &split, "");
                    for t in &outgoing {
                        next_flow(&split, &t.to, &t.label);
                    }
                } else {
                    for t in &outgoing {
                        next_flow(&s.id, &t.to, &t.label);
                    }
                }
            }
            StateKind::Send { .. } => {
                p.children.push(el("sendTask", &s.id));
                for t in &outgoing {
                    next_flow(&s.id, &t.to, &t.label);
                }
            }
            StateKind::Receive { alternatives } if alternatives.len() == 1 => {
                p.children.push(el("receiveTask", &s.id));
                if let Some(t) = outgoing.first() {
                    next_flow(&s.id, &t.to, "");
                }
            }
            StateKind::Receive { alternatives } => {
                p.children.push(el("eventBasedGateway", &s.id));
                for (i, a) in alternatives.iter().enumerate() {
                    let id = catch_id(&s.id, i);
                    p.children.push(
                        el("intermediateCatchEvent", &id)
                            .with_attr("name", &a.message)
                            .with_child(BpmnElement::new(QName::model("messageEventDefinition"))),
                    );
                    next_flow(&s.id, &id, "");
                    if let Some(t) = outgoing.iter().find(|t| t.label == a.message) {
                        next_flow(&id, &t.to, "");
                    }
                }
            }
        }
    }
    p.children.extend(flows);
    p
}

/// Build a BPMN collaboration for `model`. Fails only when ids collide, e.g.
/// two subjects using the same state id.
pub fn to_bpmn(model: &SbpmModel) -> Result<BpmnDocument, DocumentError> {
    let mut root = el("definitions", "Definitions_1").with_attr("targetNamespace", EXPORT_NAMESPACE);
    root.namespaces.push((Some("bpmn2".to_string()), MODEL_NS.to_string()));
    for (k, m) in model.messages.iter().enumerate() {
        root.children
            .push(el("message", &format!("Message_{}", k + 1)).with_attr("name", &m.name));
    }

    let participant_id = |name: &str| -> String {
        let k = model.subjects.iter().position(|s| s.name == name).unwrap_or(0);
        format!("Participant_{}", k + 1)
    };
    let mut collab = el("collaboration", "Collaboration_1").with_attr("name", &model.name);
    let mut processes = Vec::new();
    for (k, s) in model.subjects.iter().enumerate() {
        let k = k + 1;
        let mut p = el("participant", &format!("Participant_{k}")).with_attr("name", &s.name);
        if let Some(b) = &s.behavior {
            p = p.with_attr("processRef", &format!("Process_{k}"));
            processes.push(process(k, &s.name, b));
        }
        if s.kind == SubjectKind::Multi {
            p = p.with_child(
                BpmnElement::new(QName::model("participantMultiplicity")).with_attr("minimum", "2"),
            );
        }
        collab.children.push(p);
    }
    let mut n = 0;
    for (k, m) in model.messages.iter().enumerate() {
        if m.sender == m.receiver {
            continue;
        }
        let behavior = |name: &str| model.subject(name).and_then(|s| s.behavior.as_ref());
        let source = behavior(&m.sender)
            .and_then(|b| send_node(b, &m.name, &m.receiver))
            .unwrap_or_else(|| participant_id(&m.sender));
        let target = behavior(&m.receiver)
            .and_then(|b| receive_node(b, &m.name, &m.sender))
            .unwrap_or_else(|| participant_id(&m.receiver));
        n += 1;
        collab.children.push(
            el("messageFlow", &format!("MessageFlow_{n}"))
                .with_attr("name", &m.name)
                .with_attr("sourceRef", &source)
                .with_attr("targetRef", &target)
                .with_attr("messageRef", &format!("Message_{}", k + 1)),
        );
    }
    root.children.push(collab);
    root.children.extend(processes);
    BpmnDocument::new(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbpm::fixtures::question_answer;
    use crate::sbpm::{transform_document, Subject};

    #[test]
    fn question_answer_survives_the_round_trip() {
        let model = question_answer();
        let doc = to_bpmn(&model).unwrap();
        assert_eq!(transform_document(&doc).unwrap(), model);
    }

    #[test]
    fn multi_gateway_receive_becomes_event_gateway() {
        let doc = to_bpmn(&question_answer()).unwrap();
        let gateway = doc.resolve_reference("await").unwrap();
        assert_eq!(gateway.qname.local, "eventBasedGateway");
        let catch = doc.resolve_reference("await_2").unwrap();
        assert_eq!(catch.name(), Some("no"));
        assert_eq!(doc.resolve_reference("decide_split").unwrap().qname.local, "exclusiveGateway");
    }

    #[test]
    fn external_and_multi_subjects() {
        let mut model = question_answer();
        model.subjects[1].kind = SubjectKind::Multi;
        model.subjects.push(Subject {
            name: "auditor".into(),
            kind: SubjectKind::External,
            behavior: None,
        });
        let doc = to_bpmn(&model).unwrap();
        assert_eq!(transform_document(&doc).unwrap(), model);
    }
}
