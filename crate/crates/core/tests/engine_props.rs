mod support;

use std::collections::{BTreeMap, BTreeSet};

use bpmnowl_core::engine::{compile, replay_check, run, EventKind, Scenario, TerminalStatus, Trace};
use bpmnowl_core::sbpm::SbpmModel;
use proptest::prelude::*;
use support::explorer::{assignments, Explorer};
use support::models::random_model;

const MAX_STEPS: usize = 60;

fn scenario(choices: &BTreeMap<(String, String), String>) -> Scenario {
    let mut s = Scenario {
        max_steps: MAX_STEPS,
        ..Default::default()
    };
    for ((subject, state), label) in choices {
        s = s.choose(&format!("{subject}/{state}"), label);
    }
    s
}

/// Every move in the trace follows a transition of the mover's behavior.
fn check_moves(model: &SbpmModel, trace: &Trace) -> Result<(), String> {
    let mut at: BTreeMap<&str, &str> = BTreeMap::new();
    for e in &trace.events {
        let b = model.subject(&e.instance).unwrap().behavior.as_ref().unwrap();
        match &e.kind {
            EventKind::StateEntered { state } => {
                if b.state(state).is_none() {
                    return Err(format!("{} entered foreign state `{state}`", e.instance));
                }
                if let Some(prev) = at.insert(&e.instance, state) {
                    if !b.outgoing(prev).any(|t| &t.to == state) {
                        return Err(format!("{}: no transition {prev} -> {state}", e.instance));
                    }
                } else if *state != b.start_state {
                    return Err(format!("{} did not begin in its start state", e.instance));
                }
            }
            EventKind::SubjectEnded { state } if !b.is_end(state) => {
                return Err(format!("{} ended in `{state}`", e.instance));
            }
            _ => {}
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn runs_are_deterministic_and_replayable(seed in any::<u64>()) {
        let model = random_model(seed);
        let def = compile(model.clone()).unwrap();
        for choices in assignments(&model, 4) {
            let sc = scenario(&choices);
            let trace = run(&def, &sc).unwrap();
            prop_assert_eq!(run(&def, &sc).unwrap(), trace.clone());
            prop_assert!(replay_check(&def, &sc, &trace));
        }
    }

    #[test]
    fn messages_are_conserved(seed in any::<u64>()) {
        let model = random_model(seed);
        let def = compile(model.clone()).unwrap();
        for choices in assignments(&model, 4) {
            let trace = run(&def, &scenario(&choices)).unwrap();
            let sent = trace.sent().count();
            let received = trace.events.iter().filter(|e| matches!(e.kind, EventKind::MessageReceived { .. })).count();
            prop_assert_eq!(sent, received + trace.total_unconsumed() + trace.sinks.values().sum::<usize>());
            let seqs: BTreeSet<u64> = trace.sent().map(|e| match e.kind {
                EventKind::MessageSent { seq, .. } => seq,
                _ => unreachable!(),
            }).collect();
            prop_assert_eq!(seqs.len(), sent);
        }
    }

    #[test]
    fn moves_follow_transitions(seed in any::<u64>()) {
        let model = random_model(seed);
        let def = compile(model.clone()).unwrap();
        for choices in assignments(&model, 4) {
            let trace = run(&def, &scenario(&choices)).unwrap();
            prop_assert_eq!(check_moves(&model, &trace), Ok(()));
        }
    }

    #[test]
    fn terminal_status_matches_the_final_configuration(seed in any::<u64>()) {
        let model = random_model(seed);
        let def = compile(model.clone()).unwrap();
        for choices in assignments(&model, 4) {
            let trace = run(&def, &scenario(&choices)).unwrap();
            prop_assert!(trace.steps <= MAX_STEPS);
            match trace.terminal {
                TerminalStatus::Completed => prop_assert!(trace.waiting.is_empty()),
                TerminalStatus::Deadlock => {
                    prop_assert!(!trace.waiting.is_empty());
                    prop_assert!(trace.steps <= MAX_STEPS);
                }
                TerminalStatus::StepLimit => prop_assert_eq!(trace.steps, MAX_STEPS),
            }
        }
    }

    #[test]
    fn outcome_is_one_the_explorer_can_reach(seed in any::<u64>()) {
        let model = random_model(seed);
        let def = compile(model.clone()).unwrap();
        for choices in assignments(&model, 4) {
            let trace = run(&def, &scenario(&choices)).unwrap();
            let reachable = Explorer::new(&model, &choices).reachable(MAX_STEPS);
            prop_assert!(reachable.contains(&trace.terminal), "{} not in {:?}", trace.terminal, reachable);
            if reachable.len() == 1 {
                prop_assert_eq!(Some(&trace.terminal), reachable.first());
            }
        }
    }
}
