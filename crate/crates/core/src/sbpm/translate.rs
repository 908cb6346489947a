//! BPMN collaboration → S-BPM model.
//!
//! Pools become subjects (black-box pools become external subjects), message
//! flows become messages, and each process becomes a behavior whose states
//! keep the ids of the BPMN nodes they come from:
//!
//! | BPMN | state |
//! |---|---|
//! | task, userTask | function |
//! | sendTask, message throw event | send |
//! | receiveTask, message catch event, message start event | receive |
//! | eventBasedGateway | one receive state, one alternative per branch |
//! | exclusiveGateway split right after a task | labeled transitions of that task |
//! | other exclusiveGateway split | function state (the decision) |
//! | exclusiveGateway merge | elided |
//! | endEvent | terminal function state |
//!
//! Lanes, data store references, documentation and extension elements are
//! ignored; any other element inside a process is rejected.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Alternative, Behavior, MessageSpec, SbpmModel, State, StateKind, Subject, SubjectKind, Transition, Violation};
use crate::bpmn::{BpmnDocument, BpmnElement, ElementPath};
use crate::transform::{ModelOntology, TransformError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("unsupported element `{tag}` at {path}")]
    UnsupportedElement { tag: String, path: String },
    #[error("message flow `{flow}`: {detail}")]
    DanglingMessageFlow { flow: String, detail: String },
    #[error("participant `{participant}` refers to no process")]
    NoProcessForInternalParticipant { participant: String },
    #[error("{path}: {detail}")]
    MalformedFlow { path: String, detail: String },
    #[error("translated model is not well formed: {}", render(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

fn render(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

const FLOW_NODES: [&str; 10] = [
    "startEvent",
    "endEvent",
    "task",
    "userTask",
    "sendTask",
    "receiveTask",
    "exclusiveGateway",
    "eventBasedGateway",
    "intermediateThrowEvent",
    "intermediateCatchEvent",
];
const IGNORED_IN_PROCESS: [&str; 4] = ["laneSet", "dataStoreReference", "documentation", "extensionElements"];
const ALLOWED_IN_NODE: [&str; 7] = [
    "incoming",
    "outgoing",
    "documentation",
    "extensionElements",
    "messageEventDefinition",
    "dataInputAssociation",
    "dataOutputAssociation",
];

/// Translate a model ontology.
pub fn transform(model: &ModelOntology) -> Result<SbpmModel, TranslateError> {
    transform_document(&model.to_bpmn()?)
}

struct Pool<'a> {
    subject: String,
    participant: Option<&'a BpmnElement>,
    multi: bool,
    process: Option<(ElementPath, &'a BpmnElement)>,
}

struct Flow<'a> {
    id: &'a str,
    name: Option<&'a str>,
    source: &'a str,
    target: &'a str,
}

fn local(el: &BpmnElement) -> &str {
    &el.qname.local
}

fn is_message_event(el: &BpmnElement) -> bool {
    el.children_named("messageEventDefinition").next().is_some()
}

fn can_send(el: &BpmnElement) -> bool {
    matches!(local(el), "sendTask" | "intermediateThrowEvent")
}

fn can_receive(el: &BpmnElement) -> bool {
    match local(el) {
        "receiveTask" | "intermediateCatchEvent" => true,
        "startEvent" => is_message_event(el),
        _ => false,
    }
}

/// Translate a BPMN document.
pub fn transform_document(doc: &BpmnDocument) -> Result<SbpmModel, TranslateError> {
    let root = doc.root();
    let processes: Vec<(ElementPath, &BpmnElement)> = root
        .children
        .iter()
        .enumerate()
        .filter(|(_, c)| c.qname.is_model("process"))
        .map(|(i, c)| (ElementPath::root().child(i), c))
        .collect();
    let collaboration = root.children.iter().find(|c| c.qname.is_model("collaboration"));

    let mut pools: Vec<Pool> = Vec::new();
    let mut taken: Vec<String> = Vec::new();
    let mut unique = |preferred: String, fallback: &str| -> String {
        let name = if taken.contains(&preferred) {
            format!("{preferred}_{fallback}")
        } else {
            preferred
        };
        taken.push(name.clone());
        name
    };
    match collaboration {
        Some(collab) => {
            for (k, p) in collab.children_named("participant").enumerate() {
                let fallback = p.id().map(ToString::to_string).unwrap_or_else(|| format!("{}", k + 1));
                let preferred = p.name().or(p.id()).map(ToString::to_string).unwrap_or_else(|| format!("participant_{}", k + 1));
                let process = match p.attr("processRef") {
                    None => None,
                    Some(r) => Some(
                        processes
                            .iter()
                            .find(|(_, pr)| pr.id() == Some(r))
                            .cloned()
                            .ok_or_else(|| TranslateError::NoProcessForInternalParticipant {
                                participant: preferred.clone(),
                            })?,
                    ),
                };
                pools.push(Pool {
                    subject: unique(preferred, &fallback),
                    participant: Some(p),
                    multi: p.children_named("participantMultiplicity").next().is_some(),
                    process,
                });
            }
        }
        None => {
            for (k, (path, pr)) in processes.iter().enumerate() {
                let fallback = format!("{}", k + 1);
                let preferred = pr.name().or(pr.id()).map(ToString::to_string).unwrap_or_else(|| format!("process_{}", k + 1));
                pools.push(Pool {
                    subject: unique(preferred, &fallback),
                    participant: None,
                    multi: false,
                    process: Some((path.clone(), pr)),
                });
            }
        }
    }

    // Node and participant ids → pool.
    let mut pool_of: BTreeMap<&str, usize> = BTreeMap::new();
    let mut node_of: BTreeMap<&str, &BpmnElement> = BTreeMap::new();
    for (i, pool) in pools.iter().enumerate() {
        if let Some(id) = pool.participant.and_then(BpmnElement::id) {
            pool_of.insert(id, i);
        }
        if let Some((path, process)) = &pool.process {
            check_process(doc, path, process)?;
            for node in process.children.iter().filter(|c| c.qname.is_model(local(c)) && FLOW_NODES.contains(&local(c))) {
                if let Some(id) = node.id() {
                    pool_of.insert(id, i);
                    node_of.insert(id, node);
                }
            }
        }
    }

    let mut messages: Vec<MessageSpec> = Vec::new();
    let mut sends: BTreeMap<&str, Vec<(String, String)>> = BTreeMap::new();
    let mut receives: BTreeMap<&str, Vec<Alternative>> = BTreeMap::new();
    if let Some(collab) = collaboration {
        for (k, flow) in collab.children_named("messageFlow").enumerate() {
            let flow_id = flow.id().unwrap_or("?").to_string();
            let dangling = |detail: String| TranslateError::DanglingMessageFlow {
                flow: flow_id.clone(),
                detail,
            };
            let endpoint = |attr: &str| -> Result<(usize, Option<&BpmnElement>), TranslateError> {
                let id = flow.attr(attr).ok_or_else(|| dangling(format!("no {attr}")))?;
                let pool = *pool_of
                    .get(id)
                    .ok_or_else(|| dangling(format!("`{id}` is neither a pool nor a node of a pool")))?;
                Ok((pool, node_of.get(id).copied()))
            };
            let (from, source) = endpoint("sourceRef")?;
            let (to, target) = endpoint("targetRef")?;
            match source {
                Some(node) if !can_send(node) => {
                    return Err(dangling(format!("source `{}` cannot send messages", local(node))))
                }
                None if pools[from].process.is_some() => {
                    return Err(dangling("source is the border of a pool with a process".into()))
                }
                _ => {}
            }
            match target {
                Some(node) if !can_receive(node) => {
                    return Err(dangling(format!("target `{}` cannot receive messages", local(node))))
                }
                None if pools[to].process.is_some() => {
                    return Err(dangling("target is the border of a pool with a process".into()))
                }
                _ => {}
            }
            if from == to {
                continue;
            }
            let referenced = flow
                .attr("messageRef")
                .and_then(|r| doc.resolve_reference(r))
                .and_then(BpmnElement::name);
            let base = flow
                .name()
                .or(referenced)
                .map(ToString::to_string)
                .unwrap_or_else(|| format!("msg_{}", k + 1));
            let (sender, receiver) = (pools[from].subject.clone(), pools[to].subject.clone());
            let mut name = base.clone();
            let mut n = 1;
            while messages
                .iter()
                .any(|m| m.name == name && m.sender == sender && m.receiver == receiver)
            {
                n += 1;
                name = format!("{base}_{n}");
            }
            if let Some(node) = source {
                sends
                    .entry(node.id().expect("indexed by id"))
                    .or_default()
                    .push((name.clone(), receiver.clone()));
            }
            if let Some(node) = target {
                receives
                    .entry(node.id().expect("indexed by id"))
                    .or_default()
                    .push(Alternative {
                        message: name.clone(),
                        from: sender.clone(),
                    });
            }
            messages.push(MessageSpec {
                name,
                sender,
                receiver,
                payload_schema: None,
            });
        }
    }

    let mut subjects = Vec::new();
    for pool in &pools {
        let behavior = match &pool.process {
            Some((path, process)) => Some(behavior_of(doc, path, process, &sends, &receives)?),
            None => None,
        };
        subjects.push(Subject {
            name: pool.subject.clone(),
            kind: match (&behavior, pool.multi) {
                (None, _) => SubjectKind::External,
                (Some(_), true) => SubjectKind::Multi,
                (Some(_), false) => SubjectKind::Internal,
            },
            behavior,
        });
    }

    let name = collaboration
        .and_then(BpmnElement::name)
        .or_else(|| processes.iter().find_map(|(_, p)| p.name()))
        .or(root.id())
        .unwrap_or("model");
    let model = SbpmModel {
        name: name.to_string(),
        subjects,
        messages,
    };
    model.validate().map_err(TranslateError::Invalid)?;
    Ok(model)
}

fn unsupported(doc: &BpmnDocument, path: &ElementPath, el: &BpmnElement) -> TranslateError {
    TranslateError::UnsupportedElement {
        tag: el.qname.to_string(),
        path: doc.describe(path),
    }
}

fn check_process(doc: &BpmnDocument, path: &ElementPath, process: &BpmnElement) -> Result<(), TranslateError> {
    for (i, child) in process.children.iter().enumerate() {
        if !child.qname.is_conformance() {
            continue;
        }
        let child_path = path.child(i);
        let tag = local(child);
        let model_ns = child.qname.is_model(tag);
        if model_ns && (IGNORED_IN_PROCESS.contains(&tag) || tag == "sequenceFlow") {
            continue;
        }
        if !model_ns || !FLOW_NODES.contains(&tag) {
            return Err(unsupported(doc, &child_path, child));
        }
        for (j, inner) in child.children.iter().enumerate() {
            if inner.qname.is_conformance()
                && !(inner.qname.is_model(local(inner)) && ALLOWED_IN_NODE.contains(&local(inner)))
            {
                return Err(unsupported(doc, &child_path.child(j), inner));
            }
        }
        let message = is_message_event(child);
        let ok = match tag {
            "intermediateThrowEvent" | "intermediateCatchEvent" => message,
            "startEvent" => true,
            _ => !message,
        };
        if !ok {
            return Err(unsupported(doc, &child_path, child));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    State,
    PlainStart,
    Merge,
    /// Catch node that only serves as an event-gateway branch.
    Branch,
    /// Split folded into the task before it.
    FoldedSplit,
}

fn behavior_of(
    doc: &BpmnDocument,
    path: &ElementPath,
    process: &BpmnElement,
    sends: &BTreeMap<&str, Vec<(String, String)>>,
    receives: &BTreeMap<&str, Vec<Alternative>>,
) -> Result<Behavior, TranslateError> {
    let location = doc.describe(path);
    let malformed = |detail: String| TranslateError::MalformedFlow {
        path: location.clone(),
        detail,
    };
    let nodes: Vec<&BpmnElement> = process
        .children
        .iter()
        .filter(|c| c.qname.is_model(local(c)) && FLOW_NODES.contains(&local(c)))
        .collect();
    let mut by_id: BTreeMap<&str, &BpmnElement> = BTreeMap::new();
    for n in &nodes {
        let id = n.id().ok_or_else(|| malformed(format!("`{}` without id", n.qname)))?;
        by_id.insert(id, n);
    }
    let mut flows: Vec<Flow> = Vec::new();
    for f in process.children_named("sequenceFlow") {
        let id = f.id().unwrap_or("?");
        let source = f.attr("sourceRef").ok_or_else(|| malformed(format!("sequence flow `{id}` has no sourceRef")))?;
        let target = f.attr("targetRef").ok_or_else(|| malformed(format!("sequence flow `{id}` has no targetRef")))?;
        for end in [source, target] {
            if !by_id.contains_key(end) {
                return Err(malformed(format!("sequence flow `{id}` names unknown node `{end}`")));
            }
        }
        flows.push(Flow {
            id,
            name: f.name().filter(|n| !n.is_empty()),
            source,
            target,
        });
    }
    let outgoing = |id: &str| -> Vec<&Flow> { flows.iter().filter(|f| f.source == id).collect() };
    let incoming = |id: &str| -> Vec<&Flow> { flows.iter().filter(|f| f.target == id).collect() };

    let role = |n: &BpmnElement| -> Role {
        let id = n.id().expect("checked");
        match local(n) {
            "startEvent" if !is_message_event(n) => Role::PlainStart,
            "exclusiveGateway" => {
                let outs = outgoing(id);
                let ins = incoming(id);
                if outs.len() <= 1 {
                    return Role::Merge;
                }
                let folded = match ins.as_slice() {
                    [only] => {
                        let before = by_id[only.source];
                        matches!(local(before), "task" | "userTask") && outgoing(only.source).len() == 1
                    }
                    _ => false,
                };
                if folded {
                    Role::FoldedSplit
                } else {
                    Role::State
                }
            }
            "intermediateCatchEvent" | "receiveTask" => {
                let ins = incoming(id);
                if !ins.is_empty() && ins.iter().all(|f| local(by_id[f.source]) == "eventBasedGateway") {
                    Role::Branch
                } else {
                    Role::State
                }
            }
            _ => Role::State,
        }
    };

    // Follow elided merges to the next state.
    let resolve = |start: &str| -> Result<String, TranslateError> {
        let mut id = start;
        for _ in 0..=nodes.len() {
            let node = by_id[id];
            match role(node) {
                Role::State => return Ok(id.to_string()),
                Role::Merge => match outgoing(id).as_slice() {
                    [next] => id = next.target,
                    _ => return Err(malformed(format!("gateway `{id}` has no outgoing flow"))),
                },
                other => return Err(malformed(format!("flow into `{id}` ({other:?}) cannot be followed"))),
            }
        }
        Err(malformed(format!("gateways starting at `{start}` form a cycle")))
    };
    let label = |f: &Flow, siblings: usize| -> String {
        match f.name {
            Some(n) => n.to_string(),
            None if siblings > 1 => f.id.to_string(),
            None => String::new(),
        }
    };
    let single_successor = |id: &str| -> Result<String, TranslateError> {
        match outgoing(id).as_slice() {
            [only] => resolve(only.target),
            outs => Err(malformed(format!("`{id}` needs exactly one outgoing flow, has {}", outs.len()))),
        }
    };
    let alternatives_of = |id: &str| -> Result<Vec<Alternative>, TranslateError> {
        receives
            .get(id)
            .filter(|a| !a.is_empty())
            .cloned()
            .ok_or_else(|| malformed(format!("`{id}` receives no message flow")))
    };

    let mut states = Vec::new();
    let mut transitions = Vec::new();
    let mut end_states = alloc::collections::BTreeSet::new();
    let mut start: Option<String> = None;
    let mut set_start = |id: String| -> Result<(), TranslateError> {
        if start.replace(id).is_some() {
            return Err(malformed("process needs exactly one start event".into()));
        }
        Ok(())
    };

    for node in &nodes {
        let id = node.id().expect("checked");
        let name = node.name().unwrap_or("");
        match role(node) {
            Role::PlainStart => {
                set_start(single_successor(id)?)?;
                continue;
            }
            Role::Merge | Role::Branch | Role::FoldedSplit => continue,
            Role::State => {}
        }
        let outs = outgoing(id);
        let labeled = |outs: &[&Flow]| -> Result<Vec<Transition>, TranslateError> {
            outs.iter()
                .map(|f| Ok(Transition::new(id, &label(f, outs.len()), &resolve(f.target)?)))
                .collect()
        };
        match local(node) {
            "task" | "userTask" | "exclusiveGateway" => {
                let task = if name.is_empty() { id } else { name };
                states.push(State::function(id, task));
                match outs.as_slice() {
                    [only] if role(by_id[only.target]) == Role::FoldedSplit => {
                        transitions.extend(labeled(&outgoing(only.target))?);
                    }
                    _ => transitions.extend(labeled(&outs)?),
                }
            }
            "sendTask" | "intermediateThrowEvent" => {
                let (message, to) = match sends.get(id).map(Vec::as_slice) {
                    Some([one]) => one.clone(),
                    Some([]) | None => return Err(malformed(format!("`{id}` sends no message flow"))),
                    Some(_) => return Err(malformed(format!("`{id}` sends more than one message flow"))),
                };
                states.push(State::send(id, &message, &to));
                transitions.extend(labeled(&outs)?);
            }
            "receiveTask" | "intermediateCatchEvent" | "startEvent" => {
                let alternatives = alternatives_of(id)?;
                let next = single_successor(id)?;
                for a in &alternatives {
                    transitions.push(Transition::new(id, &a.message, &next));
                }
                states.push(State {
                    id: id.to_string(),
                    kind: StateKind::Receive { alternatives },
                });
                if local(node) == "startEvent" {
                    set_start(id.to_string())?;
                }
            }
            "eventBasedGateway" => {
                let mut alternatives = Vec::new();
                for f in &outs {
                    let branch = by_id[f.target];
                    if role(branch) != Role::Branch {
                        return Err(malformed(format!(
                            "event gateway `{id}` leads to `{}`, not a message catch",
                            branch.qname
                        )));
                    }
                    let next = single_successor(f.target)?;
                    for a in alternatives_of(f.target)? {
                        transitions.push(Transition::new(id, &a.message, &next));
                        alternatives.push(a);
                    }
                }
                states.push(State {
                    id: id.to_string(),
                    kind: StateKind::Receive { alternatives },
                });
            }
            "endEvent" => {
                if !outs.is_empty() {
                    return Err(malformed(format!("end event `{id}` has outgoing flows")));
                }
                states.push(State::function(id, name));
                end_states.insert(id.to_string());
            }
            other => unreachable!("`{other}` is not a flow node"),
        }
    }
    let start_state = start.ok_or_else(|| malformed("process has no start event".into()))?;
    Ok(Behavior {
        states,
        start_state,
        end_states,
        transitions,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::bpmn::{QName, MODEL_NS};
    use crate::sbpm::fixtures::question_answer;
    use crate::transform::bpmn_to_owl;

    pub(crate) fn el(local: &str) -> BpmnElement {
        BpmnElement::new(QName::model(local))
    }

    fn node(local: &str, id: &str) -> BpmnElement {
        el(local).with_attr("id", id)
    }

    fn flow(id: &str, source: &str, target: &str) -> BpmnElement {
        el("sequenceFlow")
            .with_attr("id", id)
            .with_attr("sourceRef", source)
            .with_attr("targetRef", target)
    }

    fn catch(id: &str) -> BpmnElement {
        node("intermediateCatchEvent", id).with_child(el("messageEventDefinition"))
    }

    /// The question/answer collaboration as a BPMN tree.
    pub(crate) fn question_answer_doc() -> BpmnDocument {
        let questioner = node("process", "P_q")
            .with_child(node("startEvent", "qs"))
            .with_child(node("sendTask", "ask").with_attr("name", "ask question"))
            .with_child(node("eventBasedGateway", "await"))
            .with_child(catch("c_yes"))
            .with_child(catch("c_no"))
            .with_child(node("endEvent", "done_yes"))
            .with_child(node("endEvent", "done_no"))
            .with_child(flow("q1", "qs", "ask"))
            .with_child(flow("q2", "ask", "await"))
            .with_child(flow("q3", "await", "c_yes"))
            .with_child(flow("q4", "await", "c_no"))
            .with_child(flow("q5", "c_yes", "done_yes"))
            .with_child(flow("q6", "c_no", "done_no"));
        let answerer = node("process", "P_a")
            .with_child(node("startEvent", "as"))
            .with_child(node("receiveTask", "get"))
            .with_child(node("task", "decide").with_attr("name", "decide"))
            .with_child(node("exclusiveGateway", "split"))
            .with_child(node("sendTask", "say_yes"))
            .with_child(node("sendTask", "say_no"))
            .with_child(node("exclusiveGateway", "merge"))
            .with_child(node("endEvent", "end"))
            .with_child(flow("a1", "as", "get"))
            .with_child(flow("a2", "get", "decide"))
            .with_child(flow("a3", "decide", "split"))
            .with_child(flow("a4", "split", "say_yes").with_attr("name", "yes"))
            .with_child(flow("a5", "split", "say_no").with_attr("name", "no"))
            .with_child(flow("a6", "say_yes", "merge"))
            .with_child(flow("a7", "say_no", "merge"))
            .with_child(flow("a8", "merge", "end"));
        let message_flow = |id: &str, name: &str, s: &str, t: &str| {
            node("messageFlow", id)
                .with_attr("name", name)
                .with_attr("sourceRef", s)
                .with_attr("targetRef", t)
        };
        let collab = node("collaboration", "C")
            .with_attr("name", "question answer")
            .with_child(node("participant", "Pq").with_attr("name", "questioner").with_attr("processRef", "P_q"))
            .with_child(node("participant", "Pa").with_attr("name", "answerer").with_attr("processRef", "P_a"))
            .with_child(message_flow("m1", "question", "ask", "get"))
            .with_child(message_flow("m2", "yes", "say_yes", "c_yes"))
            .with_child(message_flow("m3", "no", "say_no", "c_no"));
        let mut root = node("definitions", "D")
            .with_attr("targetNamespace", "urn:t")
            .with_child(collab)
            .with_child(questioner)
            .with_child(answerer);
        root.namespaces.push((Some("bpmn2".into()), MODEL_NS.into()));
        BpmnDocument::new(root).unwrap()
    }

    #[test]
    fn question_answer_translates_to_expected_model() {
        let doc = question_answer_doc();
        assert_eq!(transform_document(&doc).unwrap(), question_answer());
        assert_eq!(transform(&bpmn_to_owl(&doc).unwrap()).unwrap(), question_answer());
    }

    #[test]
    fn elementary_single_pool() {
        let process = node("process", "P")
            .with_attr("name", "solo")
            .with_child(node("startEvent", "s"))
            .with_child(node("task", "t").with_attr("name", "work"))
            .with_child(node("endEvent", "e"))
            .with_child(flow("f1", "s", "t"))
            .with_child(flow("f2", "t", "e"));
        let doc = BpmnDocument::new(node("definitions", "D").with_child(process)).unwrap();
        let m = transform_document(&doc).unwrap();
        assert_eq!(m.subjects.len(), 1);
        assert!(m.messages.is_empty());
        let b = m.subjects[0].behavior.as_ref().unwrap();
        assert_eq!(b.start_state, "t");
        assert_eq!(b.states, [State::function("t", "work"), State::function("e", "")]);
        assert_eq!(b.end_states.iter().collect::<Vec<_>>(), ["e"]);
    }

    #[test]
    fn parallel_gateway_is_unsupported() {
        let mut root = question_answer_doc().into_root();
        root.children[1].children.insert(2, node("parallelGateway", "pg"));
        let err = transform_document(&BpmnDocument::new(root).unwrap()).unwrap_err();
        assert_eq!(
            err,
            TranslateError::UnsupportedElement {
                tag: "bpmn2:parallelGateway".into(),
                path: "/bpmn2:definitions/bpmn2:process[1]/bpmn2:parallelGateway[1]".into()
            }
        );
    }

    #[test]
    fn black_box_pool_is_external() {
        let mut root = question_answer_doc().into_root();
        let collab = &mut root.children[0];
        collab
            .children
            .push(node("participant", "Pc").with_attr("name", "customer"));
        collab.children.push(
            node("messageFlow", "m4")
                .with_attr("sourceRef", "ask")
                .with_attr("targetRef", "Pc"),
        );
        // the questioner's send now has two message flows
        let err = transform_document(&BpmnDocument::new(root.clone()).unwrap()).unwrap_err();
        assert!(matches!(err, TranslateError::MalformedFlow { .. }), "{err}");

        root.children[0].children.pop();
        let m = transform_document(&BpmnDocument::new(root).unwrap()).unwrap();
        let customer = m.subject("customer").unwrap();
        assert_eq!(customer.kind, SubjectKind::External);
        assert!(customer.behavior.is_none());
    }

    #[test]
    fn flow_into_a_plain_task_is_dangling() {
        let mut root = question_answer_doc().into_root();
        root.children[0].children.push(
            node("messageFlow", "bad")
                .with_attr("sourceRef", "ask")
                .with_attr("targetRef", "decide"),
        );
        assert!(matches!(
            transform_document(&BpmnDocument::new(root).unwrap()),
            Err(TranslateError::DanglingMessageFlow { .. })
        ));
    }

    #[test]
    fn missing_process_for_participant() {
        let mut root = question_answer_doc().into_root();
        root.children[0].children[0] = node("participant", "Pq")
            .with_attr("name", "questioner")
            .with_attr("processRef", "nowhere");
        assert_eq!(
            transform_document(&BpmnDocument::new(root).unwrap()).unwrap_err(),
            TranslateError::NoProcessForInternalParticipant {
                participant: "questioner".into()
            }
        );
    }

    #[test]
    fn unnamed_flows_fall_back_to_message_then_synthetic_names() {
        let mut root = question_answer_doc().into_root();
        root.children.push(node("message", "Msg_q").with_attr("name", "query"));
        let collab = &mut root.children[0];
        collab.children[2].attributes.retain(|(q, _)| q.local != "name");
        collab.children[2].attributes.push((QName::local("messageRef"), "Msg_q".into()));
        collab.children[3].attributes.retain(|(q, _)| q.local != "name");
        let m = transform_document(&BpmnDocument::new(root).unwrap()).unwrap();
        let names: Vec<&str> = m.messages.iter().map(|x| x.name.as_str()).collect();
        assert_eq!(names, ["query", "msg_2", "no"]);
    }
}
