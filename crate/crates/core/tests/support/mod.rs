//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod docs;
pub mod explorer;
pub mod models;
pub mod naive_verify;
pub mod ontologies;
