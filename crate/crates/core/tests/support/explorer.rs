//! Exhaustive interleaving explorer for S-BPM models, written against the
//! model types only. Every runnable subject may move next; decision states
//! follow a fixed label per (subject, state).

use std::collections::{BTreeMap, BTreeSet};

use bpmnowl_core::engine::TerminalStatus;
use bpmnowl_core::sbpm::{SbpmModel, StateKind, SubjectKind};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Config {
    at: Vec<String>,
    /// (message, sender) in arrival order.
    pools: Vec<Vec<(String, String)>>,
}

pub struct Explorer<'a> {
    model: &'a SbpmModel,
    /// Internal subject names, indexed as in `Config`.
    subjects: Vec<&'a str>,
    choices: &'a BTreeMap<(String, String), String>,
}

/// Every (subject, state) with more than one exit that is not a receive
/// state, with its labels.
pub fn decisions(model: &SbpmModel) -> Vec<((String, String), Vec<String>)> {
    let mut out = Vec::new();
    for s in &model.subjects {
        let Some(b) = &s.behavior else { continue };
        for st in &b.states {
            let labels: Vec<String> = b.transitions.iter().filter(|t| t.from == st.id).map(|t| t.label.clone()).collect();
            if labels.len() > 1 && !st.is_receive() {
                out.push(((s.name.clone(), st.id.clone()), labels));
            }
        }
    }
    out
}

/// Every assignment of one label per decision, at most `cap` of them.
pub fn assignments(model: &SbpmModel, cap: usize) -> Vec<BTreeMap<(String, String), String>> {
    let mut out = vec![BTreeMap::new()];
    for (key, labels) in decisions(model) {
        let mut next = Vec::new();
        for partial in &out {
            for l in &labels {
                let mut a: BTreeMap<(String, String), String> = partial.clone();
                a.insert(key.clone(), l.clone());
                next.push(a);
            }
        }
        next.truncate(cap);
        out = next;
    }
    out
}

impl<'a> Explorer<'a> {
    pub fn new(model: &'a SbpmModel, choices: &'a BTreeMap<(String, String), String>) -> Self {
        assert!(
            model.subjects.iter().all(|s| s.kind != SubjectKind::Multi),
            "explorer covers internal and external subjects only"
        );
        let subjects = model
            .subjects
            .iter()
            .filter(|s| s.kind == SubjectKind::Internal)
            .map(|s| s.name.as_str())
            .collect();
        Explorer { model, subjects, choices }
    }

    fn follow(&self, subject: &str, state: &str, label: Option<&str>) -> Option<String> {
        let b = self.model.subject(subject)?.behavior.as_ref()?;
        let out: Vec<_> = b.transitions.iter().filter(|t| t.from == state).collect();
        let label = match (label, out.as_slice()) {
            (Some(l), _) => l.to_string(),
            (None, [only]) => return Some(only.to.clone()),
            (None, _) => self.choices.get(&(subject.to_string(), state.to_string()))?.clone(),
        };
        out.iter().find(|t| t.label == label).map(|t| t.to.clone())
    }

    fn ended(&self, i: usize, c: &Config) -> bool {
        let b = self.model.subject(self.subjects[i]).unwrap().behavior.as_ref().unwrap();
        b.end_states.contains(&c.at[i])
    }

    fn successors(&self, c: &Config) -> Vec<Config> {
        let mut out = Vec::new();
        for (i, &me) in self.subjects.iter().enumerate() {
            if self.ended(i, c) {
                continue;
            }
            let b = self.model.subject(me).unwrap().behavior.as_ref().unwrap();
            let state = b.states.iter().find(|s| s.id == c.at[i]).unwrap();
            let mut next = c.clone();
            match &state.kind {
                StateKind::Function { .. } => {
                    let Some(to) = self.follow(me, &state.id, None) else { continue };
                    next.at[i] = to;
                }
                StateKind::Send { message, to } => {
                    if let Some(r) = self.subjects.iter().position(|s| s == to) {
                        next.pools[r].push((message.clone(), me.to_string()));
                    }
                    let Some(dest) = self.follow(me, &state.id, None) else { continue };
                    next.at[i] = dest;
                }
                StateKind::Receive { alternatives } => {
                    let hit = c.pools[i]
                        .iter()
                        .position(|(m, from)| alternatives.iter().any(|a| &a.message == m && &a.from == from));
                    let Some(k) = hit else { continue };
                    let (message, _) = next.pools[i].remove(k);
                    next.at[i] = self.follow(me, &state.id, Some(&message)).unwrap();
                }
            }
            out.push(next);
        }
        out
    }

    /// Terminal statuses some interleaving reaches within `max_steps` steps,
    /// found layer by layer: layer `d` holds every configuration some run is
    /// in after exactly `d` steps.
    pub fn reachable(&self, max_steps: usize) -> BTreeSet<TerminalStatus> {
        let start = Config {
            at: self
                .subjects
                .iter()
                .map(|s| self.model.subject(s).unwrap().behavior.as_ref().unwrap().start_state.clone())
                .collect(),
            pools: vec![Vec::new(); self.subjects.len()],
        };
        let mut found = BTreeSet::new();
        let mut layer = BTreeSet::from([start]);
        for d in 0..=max_steps {
            let mut next = BTreeSet::new();
            for c in &layer {
                if (0..self.subjects.len()).all(|i| self.ended(i, c)) {
                    found.insert(TerminalStatus::Completed);
                    continue;
                }
                let succ = self.successors(c);
                if succ.is_empty() {
                    found.insert(TerminalStatus::Deadlock);
                } else if d == max_steps {
                    found.insert(TerminalStatus::StepLimit);
                } else {
                    next.extend(succ);
                }
            }
            assert!(next.len() < 200_000, "state space too large for the explorer");
            layer = next;
        }
        found
    }
}
