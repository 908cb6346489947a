//! Deterministic execution of S-BPM models.
//!
//! Every internal subject runs as one instance (multi subjects as `S#1`,
//! `S#2`, …) with a private FIFO input pool. Instances share nothing; a send
//! appends an envelope to the receiver's pool. The scheduler always steps the
//! runnable instance with the lowest name, so a run is a pure function of the
//! definition and the scenario.
//!
//! A step executes the current state of one instance:
//!
//! * function: pick the outgoing transition (scripted when there is more than
//!   one) and advance;
//! * send: deliver one envelope, then advance as for a function state;
//! * receive: consume the first pool envelope matching any alternative and
//!   take the transition labeled with its message.
//!
//! Arriving in a state emits `StateEntered`; arriving in an end state also
//! emits `SubjectEnded`. Instances enter their start state before step 1.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::sbpm::{SbpmModel, StateKind, Subject, SubjectKind, Violation};

pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// A state with more than one outgoing transition whose choice is scripted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecisionPoint {
    pub subject: String,
    pub state: String,
    pub labels: Vec<String>,
}

impl DecisionPoint {
    /// `subject/state`
    pub fn id(&self) -> String {
        format!("{}/{}", self.subject, self.state)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessDefinition {
    model: SbpmModel,
    decision_points: Vec<DecisionPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("model is not well formed: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    ModelInvalid(Vec<Violation>),
    #[error("scenario names unknown {what} `{key}`")]
    UnknownReference { what: &'static str, key: String },
    #[error("scenario key `{0}` matches states of several subjects; use subject/state")]
    AmbiguousReference(String),
    #[error("decision point `{decision}` has no transition labeled `{label}`")]
    UnknownChoiceLabel { decision: String, label: String },
    #[error("max_steps must be positive")]
    ZeroMaxSteps,
    #[error("no scripted choice for decision point `{decision}` (visit {visit})")]
    ScenarioMissingChoice { decision: String, visit: usize },
}

/// Validate `model` and enumerate its decision points in (subject, state)
/// order. Receive states are not decision points: the arriving message picks
/// the transition.
pub fn compile(model: SbpmModel) -> Result<ProcessDefinition, EngineError> {
    model.validate().map_err(EngineError::ModelInvalid)?;
    let mut decision_points = Vec::new();
    for s in model.internal_subjects() {
        let b = s.behavior.as_ref().expect("validated");
        for st in b.states.iter().filter(|st| !st.is_receive()) {
            let labels: Vec<String> = b.outgoing(&st.id).map(|t| t.label.clone()).collect();
            if labels.len() > 1 {
                decision_points.push(DecisionPoint {
                    subject: s.name.clone(),
                    state: st.id.clone(),
                    labels,
                });
            }
        }
    }
    decision_points.sort();
    Ok(ProcessDefinition { model, decision_points })
}

impl ProcessDefinition {
    pub fn model(&self) -> &SbpmModel {
        &self.model
    }

    pub fn decision_points(&self) -> &[DecisionPoint] {
        &self.decision_points
    }

    /// Resolve a scenario key, `subject/state` or a bare state id owned by a
    /// single subject, to (subject, state).
    fn resolve_key<'a>(&'a self, key: &str) -> Result<(&'a str, &'a str), EngineError> {
        let unknown = || EngineError::UnknownReference {
            what: "state",
            key: key.to_string(),
        };
        let owners = |subject: Option<&str>, state: &str| -> Vec<(&'a str, &'a str)> {
            self.model
                .internal_subjects()
                .filter(|s| subject.is_none_or(|n| n == s.name))
                .filter_map(|s| {
                    let st = s.behavior.as_ref()?.state(state)?;
                    Some((s.name.as_str(), st.id.as_str()))
                })
                .collect()
        };
        let found = match key.split_once('/') {
            Some((subject, state)) if !owners(Some(subject), state).is_empty() => owners(Some(subject), state),
            _ => owners(None, key),
        };
        match found.as_slice() {
            [] => Err(unknown()),
            [one] => Ok(*one),
            _ => Err(EngineError::AmbiguousReference(key.to_string())),
        }
    }
}

/// Scripted label for a decision point: the same label on every visit, or
/// one label per visit.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum Choice {
    Always(String),
    PerVisit(Vec<String>),
}

impl Choice {
    fn at(&self, visit: usize) -> Option<&str> {
        match self {
            Choice::Always(l) => Some(l),
            Choice::PerVisit(ls) => ls.get(visit).map(String::as_str),
        }
    }

    fn labels(&self) -> Vec<&str> {
        match self {
            Choice::Always(l) => alloc::vec![l.as_str()],
            Choice::PerVisit(ls) => ls.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct Scenario {
    /// Decision point key → choice.
    pub choices: BTreeMap<String, Choice>,
    /// Send state key → payload attached to every envelope it sends.
    pub payloads: BTreeMap<String, String>,
    pub max_steps: usize,
    /// Multi subject → instance count (default 1).
    pub multi_counts: BTreeMap<String, usize>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            choices: BTreeMap::new(),
            payloads: BTreeMap::new(),
            max_steps: DEFAULT_MAX_STEPS,
            multi_counts: BTreeMap::new(),
        }
    }
}

impl Scenario {
    pub fn choose(mut self, decision: &str, label: &str) -> Self {
        self.choices.insert(decision.to_string(), Choice::Always(label.to_string()));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "event", rename_all = "snake_case"))]
pub enum EventKind {
    StateEntered {
        state: String,
    },
    MessageSent {
        seq: u64,
        message: String,
        to: String,
        payload: Option<String>,
    },
    MessageReceived {
        seq: u64,
        message: String,
        from: String,
    },
    DecisionTaken {
        state: String,
        label: String,
    },
    SubjectEnded {
        state: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Event {
    /// 0 for the initial state entries.
    pub step: usize,
    pub instance: String,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TerminalStatus {
    Completed,
    Deadlock,
    StepLimit,
}

impl TerminalStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminalStatus::Completed => "completed",
            TerminalStatus::Deadlock => "deadlock",
            TerminalStatus::StepLimit => "step_limit",
        }
    }
}

impl fmt::Display for TerminalStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Waiting {
    pub instance: String,
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trace {
    pub events: Vec<Event>,
    pub terminal: TerminalStatus,
    pub steps: usize,
    /// Instance → envelopes left in its pool.
    pub unconsumed: BTreeMap<String, usize>,
    /// Instances that had not ended, with their current state.
    pub waiting: Vec<Waiting>,
    /// External subject → envelopes delivered to its sink.
    pub sinks: BTreeMap<String, usize>,
}

impl Trace {
    pub fn sent(&self) -> impl Iterator<Item = &Event> {
        self.events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::MessageSent { .. }))
    }

    pub fn total_unconsumed(&self) -> usize {
        self.unconsumed.values().sum()
    }
}

#[derive(Debug, Clone)]
struct Envelope {
    seq: u64,
    from_instance: String,
    from_subject: String,
    message: String,
}

struct Instance<'a> {
    subject: &'a Subject,
    state: String,
    ended: bool,
    pool: VecDeque<Envelope>,
    visits: BTreeMap<String, usize>,
}

impl Instance<'_> {
    /// Pool index of the envelope the current receive state would consume.
    fn matching(&self) -> Option<usize> {
        let b = self.subject.behavior.as_ref()?;
        let StateKind::Receive { alternatives } = &b.state(&self.state)?.kind else {
            return None;
        };
        self.pool.iter().position(|e| {
            alternatives
                .iter()
                .any(|a| a.message == e.message && a.from == e.from_subject)
        })
    }

    fn runnable(&self) -> bool {
        if self.ended {
            return false;
        }
        let b = self.subject.behavior.as_ref().expect("internal");
        !b.state(&self.state).expect("validated").is_receive() || self.matching().is_some()
    }
}

struct Run<'a> {
    scenario: &'a Scenario,
    choices: BTreeMap<(&'a str, &'a str), &'a Choice>,
    payloads: BTreeMap<(&'a str, &'a str), &'a str>,
    instances: BTreeMap<String, Instance<'a>>,
    /// Multi subject → its instance names and the next delivery index.
    rotation: BTreeMap<&'a str, (Vec<String>, usize)>,
    sinks: BTreeMap<String, usize>,
    events: Vec<Event>,
    seq: u64,
}

impl<'a> Run<'a> {
    fn new(def: &'a ProcessDefinition, scenario: &'a Scenario) -> Result<Self, EngineError> {
        if scenario.max_steps == 0 {
            return Err(EngineError::ZeroMaxSteps);
        }
        let mut choices = BTreeMap::new();
        for (key, choice) in &scenario.choices {
            let (subject, state) = def.resolve_key(key)?;
            let Some(dp) = def
                .decision_points
                .iter()
                .find(|d| d.subject == subject && d.state == state)
            else {
                return Err(EngineError::UnknownReference {
                    what: "decision point",
                    key: key.clone(),
                });
            };
            for label in choice.labels() {
                if !dp.labels.iter().any(|l| l == label) {
                    return Err(EngineError::UnknownChoiceLabel {
                        decision: dp.id(),
                        label: label.to_string(),
                    });
                }
            }
            choices.insert((subject, state), choice);
        }
        let mut payloads = BTreeMap::new();
        for (key, value) in &scenario.payloads {
            payloads.insert(def.resolve_key(key)?, value.as_str());
        }
        for name in scenario.multi_counts.keys() {
            if !def
                .model
                .subjects
                .iter()
                .any(|s| &s.name == name && s.kind == SubjectKind::Multi)
            {
                return Err(EngineError::UnknownReference {
                    what: "multi subject",
                    key: name.clone(),
                });
            }
        }

        let mut instances = BTreeMap::new();
        let mut rotation = BTreeMap::new();
        let mut sinks = BTreeMap::new();
        for s in &def.model.subjects {
            let names: Vec<String> = match s.kind {
                SubjectKind::External => {
                    sinks.insert(s.name.clone(), 0);
                    continue;
                }
                SubjectKind::Internal => alloc::vec![s.name.clone()],
                SubjectKind::Multi => {
                    let n = scenario.multi_counts.get(&s.name).copied().unwrap_or(1).max(1);
                    (1..=n).map(|k| format!("{}#{k}", s.name)).collect()
                }
            };
            if s.kind == SubjectKind::Multi {
                rotation.insert(s.name.as_str(), (names.clone(), 0));
            }
            let start = &s.behavior.as_ref().expect("validated").start_state;
            for name in names {
                instances.insert(
                    name,
                    Instance {
                        subject: s,
                        state: start.clone(),
                        ended: false,
                        pool: VecDeque::new(),
                        visits: BTreeMap::new(),
                    },
                );
            }
        }
        Ok(Run {
            scenario,
            choices,
            payloads,
            instances,
            rotation,
            sinks,
            events: Vec::new(),
            seq: 0,
        })
    }

    fn emit(&mut self, step: usize, instance: &str, kind: EventKind) {
        self.events.push(Event {
            step,
            instance: instance.to_string(),
            kind,
        });
    }

    fn enter(&mut self, step: usize, name: &str, state: &str) {
        self.emit(step, name, EventKind::StateEntered { state: state.to_string() });
        let inst = self.instances.get_mut(name).expect("instance");
        inst.state = state.to_string();
        let b = inst.subject.behavior.as_ref().expect("internal");
        if b.is_end(state) {
            inst.ended = true;
            self.emit(step, name, EventKind::SubjectEnded { state: state.to_string() });
        }
    }

    /// Follow the only outgoing transition, or the scripted one.
    fn advance(&mut self, step: usize, name: &str) -> Result<(), EngineError> {
        let inst = &self.instances[name];
        let subject = inst.subject;
        let b = subject.behavior.as_ref().expect("internal");
        let state = inst.state.clone();
        let outgoing: Vec<_> = b.outgoing(&state).collect();
        let next = if let [only] = outgoing.as_slice() {
            only.to.clone()
        } else {
            let visit = {
                let inst = self.instances.get_mut(name).expect("instance");
                let v = inst.visits.entry(state.clone()).or_insert(0);
                *v += 1;
                *v - 1
            };
            let decision = format!("{}/{state}", subject.name);
            let label = self
                .choices
                .get(&(subject.name.as_str(), state.as_str()))
                .and_then(|c| c.at(visit))
                .ok_or(EngineError::ScenarioMissingChoice { decision, visit: visit + 1 })?;
            let t = outgoing.iter().find(|t| t.label == label).expect("labels checked");
            let to = t.to.clone();
            self.emit(
                step,
                name,
                EventKind::DecisionTaken {
                    state: state.clone(),
                    label: label.to_string(),
                },
            );
            to
        };
        self.enter(step, name, &next);
        Ok(())
    }

    fn deliver(&mut self, receiver: &str) -> Option<String> {
        if let Some(count) = self.sinks.get_mut(receiver) {
            *count += 1;
            return None;
        }
        if let Some((names, next)) = self.rotation.get_mut(receiver) {
            let name = names[*next % names.len()].clone();
            *next += 1;
            return Some(name);
        }
        Some(receiver.to_string())
    }

    fn step(&mut self, step: usize, name: &str) -> Result<(), EngineError> {
        let inst = &self.instances[name];
        let subject = inst.subject;
        let state = inst.state.clone();
        let kind = &subject.behavior.as_ref().expect("internal").state(&state).expect("validated").kind;
        match kind {
            StateKind::Function { .. } => self.advance(step, name),
            StateKind::Send { message, to } => {
                self.seq += 1;
                let seq = self.seq;
                let payload = self
                    .payloads
                    .get(&(subject.name.as_str(), state.as_str()))
                    .map(|p| p.to_string());
                let target = self.deliver(to);
                let to_name = target.clone().unwrap_or_else(|| to.clone());
                if let Some(t) = target {
                    self.instances.get_mut(&t).expect("instance").pool.push_back(Envelope {
                        seq,
                        from_instance: name.to_string(),
                        from_subject: subject.name.clone(),
                        message: message.clone(),
                    });
                }
                self.emit(
                    step,
                    name,
                    EventKind::MessageSent {
                        seq,
                        message: message.clone(),
                        to: to_name,
                        payload,
                    },
                );
                self.advance(step, name)
            }
            StateKind::Receive { .. } => {
                let inst = self.instances.get_mut(name).expect("instance");
                let i = inst.matching().expect("only runnable instances step");
                let env = inst.pool.remove(i).expect("index from matching");
                self.emit(
                    step,
                    name,
                    EventKind::MessageReceived {
                        seq: env.seq,
                        message: env.message.clone(),
                        from: env.from_instance,
                    },
                );
                let b = subject.behavior.as_ref().expect("internal");
                let t = b
                    .outgoing(&state)
                    .find(|t| t.label == env.message)
                    .expect("validated receive transitions");
                let to = t.to.clone();
                self.enter(step, name, &to);
                Ok(())
            }
        }
    }

    fn execute(mut self) -> Result<Trace, EngineError> {
        let names: Vec<String> = self.instances.keys().cloned().collect();
        for name in &names {
            let start = self.instances[name].state.clone();
            self.enter(0, name, &start);
        }
        let mut steps = 0;
        let terminal = loop {
            if self.instances.values().all(|i| i.ended) {
                break TerminalStatus::Completed;
            }
            let Some(next) = self.instances.iter().find(|(_, i)| i.runnable()).map(|(n, _)| n.clone()) else {
                break TerminalStatus::Deadlock;
            };
            if steps == self.scenario.max_steps {
                break TerminalStatus::StepLimit;
            }
            steps += 1;
            self.step(steps, &next)?;
        };
        Ok(Trace {
            events: self.events,
            terminal,
            steps,
            unconsumed: self.instances.iter().map(|(n, i)| (n.clone(), i.pool.len())).collect(),
            waiting: self
                .instances
                .iter()
                .filter(|(_, i)| !i.ended)
                .map(|(n, i)| Waiting {
                    instance: n.clone(),
                    state: i.state.clone(),
                })
                .collect(),
            sinks: self.sinks,
        })
    }
}

/// Run `def` under `scenario`.
pub fn run(def: &ProcessDefinition, scenario: &Scenario) -> Result<Trace, EngineError> {
    Run::new(def, scenario)?.execute()
}

/// True iff running again reproduces `trace` exactly.
pub fn replay_check(def: &ProcessDefinition, scenario: &Scenario, trace: &Trace) -> bool {
    run(def, scenario).is_ok_and(|t| &t == trace)
}
