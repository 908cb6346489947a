//! Subject-oriented process models.
//!
//! A model is a set of subjects exchanging declared messages. Internal and
//! multi subjects own a behavior: a state machine of function, send and
//! receive states. External subjects only appear as message endpoints.

mod owl;
mod reverse;
mod translate;

pub use owl::{emit_sbpm_owl, load_sbpm_owl, sbpm_manifest, LoadError, SBPM_PREFIX, SBPM_URI};
pub use reverse::to_bpmn;
pub use translate::{transform, transform_document, TranslateError};

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum SubjectKind {
    Internal,
    External,
    Multi,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subject {
    pub name: String,
    pub kind: SubjectKind,
    pub behavior: Option<Behavior>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageSpec {
    pub name: String,
    pub sender: String,
    pub receiver: String,
    pub payload_schema: Option<String>,
}

/// One way a receive state can be left: `message` arriving from `from`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alternative {
    pub message: String,
    pub from: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateKind {
    Function { task: String },
    Send { message: String, to: String },
    Receive { alternatives: Vec<Alternative> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub id: String,
    pub kind: StateKind,
}

impl State {
    pub fn function(id: &str, task: &str) -> Self {
        State {
            id: id.to_string(),
            kind: StateKind::Function { task: task.to_string() },
        }
    }

    pub fn send(id: &str, message: &str, to: &str) -> Self {
        State {
            id: id.to_string(),
            kind: StateKind::Send {
                message: message.to_string(),
                to: to.to_string(),
            },
        }
    }

    pub fn receive<'a>(id: &str, alternatives: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        State {
            id: id.to_string(),
            kind: StateKind::Receive {
                alternatives: alternatives
                    .into_iter()
                    .map(|(message, from)| Alternative {
                        message: message.to_string(),
                        from: from.to_string(),
                    })
                    .collect(),
            },
        }
    }

    pub fn is_receive(&self) -> bool {
        matches!(self.kind, StateKind::Receive { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transition {
    pub from: String,
    pub label: String,
    pub to: String,
}

impl Transition {
    pub fn new(from: &str, label: &str, to: &str) -> Self {
        Transition {
            from: from.to_string(),
            label: label.to_string(),
            to: to.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Behavior {
    pub states: Vec<State>,
    pub start_state: String,
    pub end_states: BTreeSet<String>,
    pub transitions: Vec<Transition>,
}

impl Behavior {
    pub fn state(&self, id: &str) -> Option<&State> {
        self.states.iter().find(|s| s.id == id)
    }

    pub fn outgoing<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Transition> + 'a {
        self.transitions.iter().filter(move |t| t.from == id)
    }

    pub fn is_end(&self, id: &str) -> bool {
        self.end_states.contains(id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SbpmModel {
    pub name: String,
    pub subjects: Vec<Subject>,
    pub messages: Vec<MessageSpec>,
}

/// A broken model rule. `subject` is `None` for model-level rules.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Violation {
    pub subject: Option<String>,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.subject {
            Some(s) => write!(f, "subject `{s}`: {}", self.rule),
            None => f.write_str(&self.rule),
        }
    }
}

impl SbpmModel {
    pub fn new(name: &str) -> Self {
        SbpmModel {
            name: name.to_string(),
            subjects: Vec::new(),
            messages: Vec::new(),
        }
    }

    pub fn subject(&self, name: &str) -> Option<&Subject> {
        self.subjects.iter().find(|s| s.name == name)
    }

    pub fn message(&self, name: &str, sender: &str, receiver: &str) -> Option<&MessageSpec> {
        self.messages
            .iter()
            .find(|m| m.name == name && m.sender == sender && m.receiver == receiver)
    }

    pub fn internal_subjects(&self) -> impl Iterator<Item = &Subject> {
        self.subjects.iter().filter(|s| s.kind != SubjectKind::External)
    }

    /// Every violated rule, in a stable order. Empty for a well-formed model.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let model = |rule: String| Violation { subject: None, rule };
        let mut names = BTreeSet::new();
        for s in &self.subjects {
            if !names.insert(s.name.as_str()) {
                out.push(model(format!("subject `{}` is declared twice", s.name)));
            }
        }
        let mut triples = BTreeSet::new();
        for m in &self.messages {
            for endpoint in [&m.sender, &m.receiver] {
                if self.subject(endpoint).is_none() {
                    out.push(model(format!("message `{}` names unknown subject `{endpoint}`", m.name)));
                }
            }
            if !triples.insert((&m.name, &m.sender, &m.receiver)) {
                out.push(model(format!(
                    "message `{}` from `{}` to `{}` is declared twice",
                    m.name, m.sender, m.receiver
                )));
            }
        }
        for s in &self.subjects {
            match (&s.kind, &s.behavior) {
                (SubjectKind::External, Some(_)) => out.push(Violation {
                    subject: Some(s.name.clone()),
                    rule: "external subjects have no behavior".into(),
                }),
                (SubjectKind::Internal | SubjectKind::Multi, None) => out.push(Violation {
                    subject: Some(s.name.clone()),
                    rule: "internal and multi subjects need a behavior".into(),
                }),
                (_, Some(b)) => {
                    out.extend(
                        self.behavior_rules(&s.name, b)
                            .into_iter()
                            .map(|rule| Violation {
                                subject: Some(s.name.clone()),
                                rule,
                            }),
                    );
                }
                (SubjectKind::External, None) => {}
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    fn behavior_rules(&self, subject: &str, b: &Behavior) -> Vec<String> {
        let mut out = Vec::new();
        let mut ids = BTreeSet::new();
        for s in &b.states {
            if !ids.insert(s.id.as_str()) {
                out.push(format!("state `{}` is declared twice", s.id));
            }
        }
        if !ids.contains(b.start_state.as_str()) {
            out.push(format!("start state `{}` does not exist", b.start_state));
        }
        if b.end_states.is_empty() {
            out.push("behavior has no end state".into());
        }
        for e in &b.end_states {
            if !ids.contains(e.as_str()) {
                out.push(format!("end state `{e}` does not exist"));
            }
        }
        for t in &b.transitions {
            for end in [&t.from, &t.to] {
                if !ids.contains(end.as_str()) {
                    out.push(format!("transition `{}` -> `{}` names unknown state `{end}`", t.from, t.to));
                }
            }
        }
        for s in &b.states {
            let outgoing: Vec<&Transition> = b.outgoing(&s.id).collect();
            if b.is_end(&s.id) {
                if !outgoing.is_empty() {
                    out.push(format!("end state `{}` has outgoing transitions", s.id));
                }
                continue;
            }
            if outgoing.is_empty() {
                out.push(format!("state `{}` has no outgoing transition", s.id));
            }
            let labels: BTreeSet<&str> = outgoing.iter().map(|t| t.label.as_str()).collect();
            if labels.len() != outgoing.len() {
                out.push(format!("state `{}` has two transitions with the same label", s.id));
            }
            match &s.kind {
                StateKind::Function { .. } => {}
                StateKind::Send { message, to } => {
                    if self.message(message, subject, to).is_none() {
                        out.push(format!(
                            "send state `{}` uses undeclared message `{message}` to `{to}`",
                            s.id
                        ));
                    }
                }
                StateKind::Receive { alternatives } => {
                    if alternatives.is_empty() {
                        out.push(format!("receive state `{}` has no alternatives", s.id));
                    }
                    for a in alternatives {
                        if self.message(&a.message, &a.from, subject).is_none() {
                            out.push(format!(
                                "receive state `{}` expects undeclared message `{}` from `{}`",
                                s.id, a.message, a.from
                            ));
                        }
                    }
                    let names: BTreeSet<&str> = alternatives.iter().map(|a| a.message.as_str()).collect();
                    if names.len() != alternatives.len() || names != labels {
                        out.push(format!(
                            "receive state `{}` needs exactly one transition per alternative, labeled by message",
                            s.id
                        ));
                    }
                }
            }
        }
        // reachability from the start state
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut queue: VecDeque<&str> = VecDeque::new();
        if ids.contains(b.start_state.as_str()) {
            queue.push_back(&b.start_state);
        }
        while let Some(id) = queue.pop_front() {
            if seen.insert(id) {
                queue.extend(b.outgoing(id).map(|t| t.to.as_str()));
            }
        }
        for s in &b.states {
            if !seen.contains(s.id.as_str()) {
                out.push(format!("state `{}` is unreachable from the start state", s.id));
            }
        }
        out
    }

    /// Name → subject lookup for callers that need many queries.
    pub fn subject_index(&self) -> BTreeMap<&str, &Subject> {
        self.subjects.iter().map(|s| (s.name.as_str(), s)).collect()
    }
}
