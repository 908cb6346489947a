#[path = "../../core/tests/support/mod.rs"]
mod support;

use bpmnowl::bpmn_xml::{canonicalize, parse_bpmn, serialize_bpmn};
use bpmnowl::owl_xml::{parse_owl, serialize_owl};
use bpmnowl::trace_io::{read_trace, write_trace};
use bpmnowl_core::engine::{compile, run, Scenario};
use bpmnowl_core::ontology::diff;
use bpmnowl_core::reference::build_reference;
use bpmnowl_core::sbpm::{emit_sbpm_owl, load_sbpm_owl};
use bpmnowl_core::transform::{bpmn_to_owl, ModelOntology};
use proptest::prelude::*;
use support::docs::random_document;
use support::explorer::assignments;
use support::models::random_model;
use support::ontologies::random_ontology;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ontology_text_round_trips(seed in any::<u64>()) {
        let o = random_ontology(seed, 10);
        let text = serialize_owl(&o);
        let back = parse_owl(&text).unwrap();
        prop_assert_eq!(&back, &o);
        prop_assert_eq!(serialize_owl(&back), text);
    }

    #[test]
    fn diff_is_empty_exactly_when_the_bytes_agree(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (random_ontology(a, 5), random_ontology(b, 5));
        prop_assert_eq!(diff(&x, &y).is_empty(), serialize_owl(&x) == serialize_owl(&y));
    }

    #[test]
    fn document_text_round_trips(seed in any::<u64>()) {
        let doc = random_document(seed, 30);
        let text = serialize_bpmn(&doc);
        prop_assert_eq!(parse_bpmn(&text).unwrap(), doc);
    }

    #[test]
    fn canonical_form_is_a_fixpoint(seed in any::<u64>()) {
        let doc = random_document(seed, 30);
        let c = canonicalize(&doc);
        prop_assert_eq!(canonicalize(&parse_bpmn(&c).unwrap()), c.clone());
        prop_assert_eq!(canonicalize(&parse_bpmn(&serialize_bpmn(&doc)).unwrap()), c);
    }

    #[test]
    fn model_ontology_survives_the_file(seed in any::<u64>()) {
        let doc = random_document(seed, 30);
        let text = serialize_owl(&bpmn_to_owl(&doc).unwrap().ontology);
        let back = ModelOntology::from_ontology(parse_owl(&text).unwrap()).unwrap().to_bpmn().unwrap();
        prop_assert_eq!(canonicalize(&back), canonicalize(&doc));
    }

    #[test]
    fn sbpm_ontology_survives_the_file(seed in any::<u64>()) {
        let model = random_model(seed);
        let text = serialize_owl(&emit_sbpm_owl(&model).unwrap());
        prop_assert_eq!(load_sbpm_owl(&parse_owl(&text).unwrap()).unwrap(), model);
    }

    #[test]
    fn traces_survive_the_file(seed in any::<u64>()) {
        let model = random_model(seed);
        let def = compile(model.clone()).unwrap();
        for choices in assignments(&model, 2) {
            let mut sc = Scenario { max_steps: 40, ..Default::default() };
            for ((subject, state), label) in &choices {
                sc = sc.choose(&format!("{subject}/{state}"), label);
            }
            let trace = run(&def, &sc).unwrap();
            let text = write_trace(&trace);
            prop_assert_eq!(read_trace(&text).unwrap(), trace);
        }
    }
}

#[test]
fn reference_serialization_is_stable() {
    let r = build_reference();
    let text = serialize_owl(r.ontology());
    assert_eq!(serialize_owl(build_reference().ontology()), text);
    assert_eq!(&parse_owl(&text).unwrap(), r.ontology());
}
