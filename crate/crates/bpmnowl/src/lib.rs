//! File formats, corpus verification and the command line for
//! [`bpmnowl_core`].

pub mod bpmn_xml;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod files;
pub mod owl_xml;
pub mod trace_io;
pub mod xml;
