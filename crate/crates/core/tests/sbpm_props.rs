mod support;

use std::collections::{BTreeSet, VecDeque};

use bpmnowl_core::bpmn::BpmnDocument;
use bpmnowl_core::sbpm::{
    emit_sbpm_owl, load_sbpm_owl, to_bpmn, transform, transform_document, Behavior, SbpmModel, StateKind,
};
use bpmnowl_core::transform::bpmn_to_owl;
use proptest::prelude::*;
use support::models::random_model;

fn reach(b: &Behavior, from: &str, forward: bool) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([from.to_string()]);
    while let Some(s) = queue.pop_front() {
        if !seen.insert(s.clone()) {
            continue;
        }
        for t in &b.transitions {
            let (a, z) = if forward { (&t.from, &t.to) } else { (&t.to, &t.from) };
            if *a == s {
                queue.push_back(z.clone());
            }
        }
    }
    seen
}

/// Structural checks of a translation against its source document.
fn check_structure(doc: &BpmnDocument, m: &SbpmModel) -> Result<(), String> {
    let flows = doc
        .walk()
        .filter(|(_, el)| el.qname.is_model("messageFlow"))
        .count();
    if flows != m.messages.len() {
        return Err(format!("{flows} message flows, {} messages", m.messages.len()));
    }
    let pools = doc.walk().filter(|(_, el)| el.qname.is_model("participant")).count();
    if pools != m.subjects.len() {
        return Err(format!("{pools} participants, {} subjects", m.subjects.len()));
    }
    for s in &m.subjects {
        let Some(b) = &s.behavior else { continue };
        let forward = reach(b, &b.start_state, true);
        for st in &b.states {
            if !forward.contains(&st.id) {
                return Err(format!("{}: `{}` unreachable", s.name, st.id));
            }
            if let StateKind::Send { message, to } = &st.kind {
                if m.message(message, &s.name, to).is_none() {
                    return Err(format!("{}: send of `{message}` has no spec with this sender", s.name));
                }
            }
        }
        let mut to_end = BTreeSet::new();
        for e in &b.end_states {
            to_end.extend(reach(b, e, false));
        }
        if let Some(st) = b.states.iter().find(|st| !to_end.contains(&st.id)) {
            // a state that can never finish is legal only on a cycle
            let cyclic = b.transitions.iter().any(|t| t.from == st.id);
            if !cyclic {
                return Err(format!("{}: `{}` cannot reach an end state", s.name, st.id));
            }
        }
        if b.end_states.iter().any(|e| !forward.contains(e)) {
            return Err(format!("{}: an end state is unreachable", s.name));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn supported_subset_documents_translate(seed in any::<u64>()) {
        let model = random_model(seed);
        let doc = to_bpmn(&model).unwrap();
        let back = transform_document(&doc).unwrap();
        prop_assert_eq!(transform(&bpmn_to_owl(&doc).unwrap()).unwrap(), back.clone());
        prop_assert_eq!(check_structure(&doc, &back), Ok(()));
    }

    #[test]
    fn reverse_then_translate_is_the_identity(seed in any::<u64>()) {
        let model = random_model(seed);
        let back = transform_document(&to_bpmn(&model).unwrap()).unwrap();
        prop_assert_eq!(back, model);
    }

    #[test]
    fn emitted_ontology_reloads_and_is_deterministic(seed in any::<u64>()) {
        let model = random_model(seed);
        let ont = emit_sbpm_owl(&model).unwrap();
        prop_assert_eq!(emit_sbpm_owl(&model.clone()).unwrap(), ont.clone());
        prop_assert_eq!(load_sbpm_owl(&ont).unwrap(), model);
    }
}
