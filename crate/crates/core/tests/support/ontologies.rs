//! Random valid ontologies: a class DAG, data and object properties,
//! restrictions and individuals with awkward literals.

use bpmnowl_core::iri::Datatype;
use bpmnowl_core::ontology::{
    Cardinality, DataAssertion, NamedIndividual, ObjectAssertion, OntoClass, Ontology, PropertyDecl, Restriction,
};
use bpmnowl_core::Iri;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LITERALS: [&str; 8] = ["plain", "", "a & b < c", "  padded  ", "line\nbreak", "quote \" and '", "tab\there", "ünï ✓"];

fn iri(prefix: &str, local: &str) -> Iri {
    Iri::new(prefix, local).unwrap()
}

fn cardinality(rng: &mut ChaCha8Rng) -> Cardinality {
    let a = rng.random_range(0..3);
    match rng.random_range(0..4) {
        0 => Cardinality::Exact(a),
        1 => Cardinality::Min(a),
        2 => Cardinality::Max(a),
        _ => Cardinality::Range(a, a + rng.random_range(0..3)),
    }
}

/// An ontology with up to `max_classes` classes, determined by `seed`.
pub fn random_ontology(seed: u64, max_classes: usize) -> Ontology {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut o = Ontology::new(iri("t", "Onto"));
    o.add_namespace("t", "urn:test#").unwrap();
    o.add_namespace("u", "urn:other/").unwrap();
    if rng.random_bool(0.5) {
        o.add_annotation("comment", *LITERALS.choose(&mut rng).unwrap());
    }

    let n = rng.random_range(1..=max_classes.max(1));
    let classes: Vec<Iri> = (0..n).map(|i| iri(if i % 3 == 2 { "u" } else { "t" }, &format!("C{i}"))).collect();
    for (i, c) in classes.iter().enumerate() {
        let mut class = OntoClass::new(c.clone());
        for earlier in &classes[..i] {
            if rng.random_bool(0.3) {
                class.superclasses.push(earlier.clone());
            }
        }
        if rng.random_bool(0.2) {
            class.annotations.push(("label".into(), LITERALS.choose(&mut rng).unwrap().to_string()));
        }
        o.add_class(class).unwrap();
    }

    let mut data_props = Vec::new();
    let mut object_props = Vec::new();
    for i in 0..rng.random_range(1..=4) {
        let p = iri("t", &format!("p{i}"));
        if rng.random_bool(0.5) {
            let dt = *Datatype::ALL.choose(&mut rng).unwrap();
            o.add_property(PropertyDecl::data(p.clone(), dt)).unwrap();
            data_props.push((p, dt));
        } else {
            let range = rng.random_bool(0.5).then(|| classes.choose(&mut rng).unwrap().clone());
            o.add_property(PropertyDecl::object(p.clone(), range)).unwrap();
            object_props.push(p);
        }
    }

    for _ in 0..rng.random_range(0..=2 * n) {
        let subject = classes.choose(&mut rng).unwrap().clone();
        let r = if !object_props.is_empty() && rng.random_bool(0.5) {
            let p = object_props.choose(&mut rng).unwrap().clone();
            Restriction::child(subject, p, cardinality(&mut rng), classes.choose(&mut rng).unwrap().clone())
        } else if let Some((p, dt)) = data_props.choose(&mut rng) {
            Restriction::attribute(subject, p.clone(), cardinality(&mut rng), rng.random_bool(0.7).then_some(*dt))
        } else {
            continue;
        };
        if !o.restrictions().contains(&r) {
            o.add_restriction(r).unwrap();
        }
    }

    let count = rng.random_range(0..=4);
    let individuals: Vec<Iri> = (0..count).map(|i| iri("t", &format!("x{i}"))).collect();
    for x in &individuals {
        let mut ind = NamedIndividual::new(x.clone(), classes.choose(&mut rng).unwrap().clone());
        if rng.random_bool(0.3) {
            let extra = classes.choose(&mut rng).unwrap().clone();
            if !ind.types.contains(&extra) {
                ind.types.push(extra);
            }
        }
        for (p, dt) in &data_props {
            if rng.random_bool(0.5) {
                let value = match dt {
                    Datatype::Integer => "-42".to_string(),
                    Datatype::Boolean => "true".to_string(),
                    Datatype::IdRef => "x0".to_string(),
                    _ => LITERALS.choose(&mut rng).unwrap().to_string(),
                };
                ind.data_assertions.push(DataAssertion {
                    property: p.clone(),
                    value,
                    datatype: *dt,
                });
            }
        }
        for p in &object_props {
            if rng.random_bool(0.5) {
                ind.object_assertions.push(ObjectAssertion {
                    property: p.clone(),
                    target: individuals.choose(&mut rng).unwrap().clone(),
                });
            }
        }
        if rng.random_bool(0.4) {
            ind.text_content = Some(LITERALS.choose(&mut rng).unwrap().to_string());
        }
        if rng.random_bool(0.3) {
            ind.annotations.push(("note".into(), LITERALS.choose(&mut rng).unwrap().to_string()));
        }
        o.add_individual(ind).unwrap();
    }
    o.validate().unwrap();
    o
}
