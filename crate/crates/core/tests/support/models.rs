//! Random well-formed S-BPM models: up to 3 subjects with up to 6 states
//! each, possibly looping, possibly deadlocking.
//!
//! Every message is sent by exactly one state and received by exactly one
//! alternative, which is the shape a collaboration diagram translates to.

use std::collections::BTreeSet;

use bpmnowl_core::sbpm::{Behavior, MessageSpec, SbpmModel, State, Subject, SubjectKind, Transition};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 3] = ["ann", "bob", "cyd"];

#[derive(Clone)]
enum Slot {
    Free,
    Send(usize),
    Receive(Vec<usize>),
}

struct Skeleton {
    name: String,
    slots: Vec<Slot>,
    ends: BTreeSet<usize>,
}

impl Skeleton {
    fn new(rng: &mut ChaCha8Rng, name: &str) -> Self {
        let n = rng.random_range(2..=6);
        let ends = (0..n).filter(|&i| i == n - 1 || (i > 0 && rng.random_bool(0.15))).collect();
        Skeleton {
            name: name.to_string(),
            slots: vec![Slot::Free; n],
            ends,
        }
    }

    fn open(&self, i: usize) -> bool {
        !self.ends.contains(&i)
    }
}

fn state_id(me: &str, i: usize) -> String {
    // state ids are document ids, so they carry the subject name
    format!("{me}_s{i}")
}

fn behavior(rng: &mut ChaCha8Rng, sk: &Skeleton, messages: &[MessageSpec]) -> Option<Behavior> {
    let me = sk.name.as_str();
    let n = sk.slots.len();
    let mut states = Vec::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for (i, slot) in sk.slots.iter().enumerate() {
        let id = state_id(me, i);
        let (state, outs) = match slot {
            _ if !sk.open(i) => (State::function(&id, "finish"), Vec::new()),
            Slot::Send(k) => {
                let m = &messages[*k];
                let k = if rng.random_bool(0.2) { 2 } else { 1 };
                (State::send(&id, &m.name, &m.receiver), ["a", "b"][..k].iter().map(|s| s.to_string()).collect())
            }
            Slot::Receive(ks) => {
                let mut alts: Vec<&MessageSpec> = ks.iter().map(|&k| &messages[k]).collect();
                alts.sort_by(|a, b| a.name.cmp(&b.name));
                let outs = alts.iter().map(|m| m.name.clone()).collect();
                (State::receive(&id, alts.iter().map(|m| (m.name.as_str(), m.sender.as_str()))), outs)
            }
            Slot::Free => {
                let k = if rng.random_bool(0.3) { 2 } else { 1 };
                (State::function(&id, &format!("work {i}")), ["a", "b"][..k].iter().map(|s| s.to_string()).collect())
            }
        };
        states.push(state);
        labels.push(outs);
    }

    // spanning tree from the first state through open slots, then random
    // targets for the rest
    let mut open: Vec<(usize, String)> = labels[0].iter().map(|l| (0, l.clone())).collect();
    let mut transitions = Vec::new();
    for (i, outs) in labels.iter().enumerate().skip(1) {
        if open.is_empty() {
            return None;
        }
        let (from, label) = open.swap_remove(rng.random_range(0..open.len()));
        transitions.push(Transition::new(&state_id(me, from), &label, &state_id(me, i)));
        open.extend(outs.iter().map(|l| (i, l.clone())));
    }
    for (from, label) in open {
        let to = rng.random_range(0..n);
        transitions.push(Transition::new(&state_id(me, from), &label, &state_id(me, to)));
    }
    transitions.sort();
    Some(Behavior {
        states,
        start_state: state_id(me, 0),
        end_states: sk.ends.iter().map(|&i| state_id(me, i)).collect(),
        transitions,
    })
}

/// Places message `k` into a free send slot of its sender and a receive slot
/// of its receiver; false when either side has no room.
fn place(rng: &mut ChaCha8Rng, skeletons: &mut [Skeleton], k: usize, from: usize, to: usize) -> bool {
    let sends: Vec<usize> = (0..skeletons[from].slots.len())
        .filter(|&i| skeletons[from].open(i) && matches!(skeletons[from].slots[i], Slot::Free))
        .collect();
    let receives: Vec<usize> = (0..skeletons[to].slots.len())
        .filter(|&i| {
            skeletons[to].open(i)
                && match &skeletons[to].slots[i] {
                    Slot::Free => true,
                    Slot::Receive(ks) => ks.len() < 2,
                    Slot::Send(_) => false,
                }
        })
        .collect();
    let (Some(&s), Some(&r)) = (sends.choose(rng), receives.choose(rng)) else {
        return false;
    };
    skeletons[from].slots[s] = Slot::Send(k);
    match &mut skeletons[to].slots[r] {
        Slot::Receive(ks) => ks.push(k),
        slot => *slot = Slot::Receive(vec![k]),
    }
    true
}

/// A valid model determined by `seed`.
pub fn random_model(seed: u64) -> SbpmModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let count = rng.random_range(1..=3);
        let mut skeletons: Vec<Skeleton> = NAMES[..count].iter().map(|n| Skeleton::new(&mut rng, n)).collect();
        let mut messages = Vec::new();
        if count > 1 {
            for _ in 0..rng.random_range(0..=4) {
                let from = rng.random_range(0..count);
                let to = (from + rng.random_range(1..count)) % count;
                if place(&mut rng, &mut skeletons, messages.len(), from, to) {
                    messages.push(MessageSpec {
                        name: format!("m{}", messages.len()),
                        sender: NAMES[from].to_string(),
                        receiver: NAMES[to].to_string(),
                        payload_schema: None,
                    });
                }
            }
        }
        let behaviors: Option<Vec<Behavior>> = skeletons.iter().map(|sk| behavior(&mut rng, sk, &messages)).collect();
        let Some(behaviors) = behaviors else { continue };
        let subjects = NAMES[..count]
            .iter()
            .zip(behaviors)
            .map(|(name, b)| Subject {
                name: name.to_string(),
                kind: SubjectKind::Internal,
                behavior: Some(b),
            })
            .collect();
        let model = SbpmModel {
            name: format!("random {seed}"),
            subjects,
            messages,
        };
        if model.validate().is_ok() {
            return model;
        }
    }
}
