//! Random BPMN-like documents: mostly reference vocabulary, with typos,
//! unknown attributes, vendor extensions and dangling references mixed in.

use bpmnowl_core::bpmn::{BpmnDocument, BpmnElement, QName, MODEL_NS};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VENDOR_NS: &str = "http://acme.example/bpmn/ext";

/// Tags that may appear under each parent tag.
fn children_of(tag: &str) -> &'static [&'static str] {
    match tag {
        "definitions" => &["process", "message", "collaboration", "proces", "@vendor"],
        "process" => &[
            "task",
            "userTask",
            "startEvent",
            "endEvent",
            "sequenceFlow",
            "laneSet",
            "documentation",
            "extensionElements",
            "taks",
        ],
        "laneSet" => &["lane"],
        "lane" => &["flowNodeRef"],
        "collaboration" => &["participant", "messageFlow"],
        "extensionElements" => &["@vendor"],
        "@vendor" => &["@vendor"],
        _ => &[],
    }
}

fn attributes_of(tag: &str) -> &'static [&'static str] {
    match tag {
        "process" => &["name", "isExecutable"],
        "task" | "userTask" | "startEvent" | "endEvent" | "lane" | "message" | "collaboration" => &["name"],
        "sequenceFlow" => &["sourceRef", "targetRef", "name"],
        "messageFlow" => &["sourceRef", "targetRef", "name"],
        "participant" => &["name", "processRef"],
        _ => &[],
    }
}

struct Gen {
    rng: ChaCha8Rng,
    budget: usize,
    next_id: usize,
    id_pool: usize,
}

impl Gen {
    fn value(&mut self, attr: &str) -> String {
        match attr {
            "isExecutable" => ["true", "false", "maybe"].choose(&mut self.rng).unwrap().to_string(),
            a if a.ends_with("Ref") => format!("e{}", self.rng.random_range(0..self.id_pool + 2)),
            _ => ["alpha", "a & b", "<x>", "say \"hi\"", "7", "two words"]
                .choose(&mut self.rng)
                .unwrap()
                .to_string(),
        }
    }

    fn element(&mut self, tag: &str) -> BpmnElement {
        let mut el = if tag == "@vendor" {
            let local = ["prop", "note", "meta"].choose(&mut self.rng).unwrap();
            let mut el = BpmnElement::new(QName::new(Some(VENDOR_NS), Some("acme"), local));
            if self.rng.random_bool(0.5) {
                el.attributes.push((QName::local("key"), self.value("key")));
            }
            el
        } else {
            BpmnElement::new(QName::model(tag))
        };
        if tag != "@vendor" && tag != "flowNodeRef" && tag != "documentation" && self.rng.random_bool(0.8) {
            el.attributes.push((QName::local("id"), format!("e{}", self.next_id)));
            self.next_id += 1;
        }
        for attr in attributes_of(tag) {
            if self.rng.random_bool(0.6) {
                let v = self.value(attr);
                el.attributes.push((QName::local(attr), v));
            }
        }
        if tag != "@vendor" && self.rng.random_bool(0.1) {
            el.attributes.push((QName::local("bogusAttr"), "1".into()));
        }
        if tag != "@vendor" && self.rng.random_bool(0.1) {
            el.attributes.push((QName::new(Some(VENDOR_NS), Some("acme"), "hint"), "v".into()));
        }
        match tag {
            "flowNodeRef" => el.text = Some(format!("e{}", self.rng.random_range(0..self.id_pool))),
            "documentation" => el.text = Some("notes & <remarks>".into()),
            "@vendor" if self.rng.random_bool(0.3) => el.text = Some("vendor text".into()),
            _ => {}
        }
        let options = children_of(tag);
        if !options.is_empty() {
            let wanted = self.rng.random_range(0..4);
            for _ in 0..wanted {
                if self.budget == 0 {
                    break;
                }
                self.budget -= 1;
                let child = *options.choose(&mut self.rng).unwrap();
                let child = self.element(child);
                el.children.push(child);
            }
        }
        el
    }
}

/// A document with at most `max_elements` elements, determined by `seed`.
pub fn random_document(seed: u64, max_elements: usize) -> BpmnDocument {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        budget: max_elements.saturating_sub(1),
        next_id: 0,
        id_pool: max_elements,
    };
    let mut root = g.element("definitions");
    if !root.attributes.iter().any(|(q, _)| q.local == "targetNamespace") && g.rng.random_bool(0.9) {
        root.attributes.push((QName::local("targetNamespace"), "urn:example".into()));
    }
    root.namespaces.push((Some("bpmn2".into()), MODEL_NS.into()));
    root.namespaces.push((Some("acme".into()), VENDOR_NS.into()));
    BpmnDocument::new(root).expect("generated ids are unique")
}
