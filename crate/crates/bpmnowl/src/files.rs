//! Loading inputs from disk with errors that name the file.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use bpmnowl_core::bpmn::BpmnDocument;
use bpmnowl_core::engine::Scenario;
use bpmnowl_core::reference::{build_reference, ExtensionError, ReferenceOntology, TranslationError, TranslationTable};
use bpmnowl_core::sbpm::{load_sbpm_owl, LoadError, SbpmModel};
use bpmnowl_core::Ontology;

use crate::bpmn_xml::{parse_bpmn, BpmnXmlError};
use crate::owl_xml::{parse_owl, parse_owl_parts, OwlXmlError};

/// An input that could not be read or understood.
#[derive(Debug)]
pub struct InputError {
    pub path: PathBuf,
    pub kind: Box<InputErrorKind>,
}

#[derive(Debug, thiserror::Error)]
pub enum InputErrorKind {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Bpmn(#[from] BpmnXmlError),
    #[error(transparent)]
    Owl(#[from] OwlXmlError),
    #[error(transparent)]
    Sbpm(#[from] LoadError),
    #[error(transparent)]
    Table(#[from] TranslationError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path.display(), self.kind)
    }
}

impl std::error::Error for InputError {}

pub(crate) fn at<E: Into<InputErrorKind>>(path: &Path) -> impl FnOnce(E) -> InputError + '_ {
    move |e| InputError {
        path: path.to_path_buf(),
        kind: Box::new(e.into()),
    }
}

pub fn read_text(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(at(path))
}

pub fn load_bpmn(path: &Path) -> Result<BpmnDocument, InputError> {
    parse_bpmn(&read_text(path)?).map_err(at(path))
}

pub fn load_owl(path: &Path) -> Result<Ontology, InputError> {
    parse_owl(&read_text(path)?).map_err(at(path))
}

pub fn load_sbpm(path: &Path) -> Result<SbpmModel, InputError> {
    let ont = load_owl(path)?;
    load_sbpm_owl(&ont).map_err(at(path))
}

/// The built-in reference, extended by `extension` when given. A file with
/// no content is an empty extension.
pub fn load_reference(extension: Option<&Path>) -> Result<ReferenceOntology, InputError> {
    let reference = build_reference();
    let Some(path) = extension else {
        return Ok(reference);
    };
    let text = read_text(path)?;
    if text.trim().is_empty() {
        return Ok(reference);
    }
    let parts = parse_owl_parts(&text).map_err(at(path))?;
    reference.extend(parts).map_err(at(path))
}

pub fn load_table(path: Option<&Path>) -> Result<TranslationTable, InputError> {
    match path {
        None => Ok(TranslationTable::bpmn_default()),
        Some(path) => TranslationTable::parse(&read_text(path)?).map_err(at(path)),
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario, InputError> {
    serde_json::from_str(&read_text(path)?).map_err(at(path))
}

/// `.bpmn` files under each directory (sorted), other paths as given.
pub fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, InputError> {
    let mut out = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found = Vec::new();
            for entry in fs::read_dir(input).map_err(at(input))? {
                let p = entry.map_err(at(input))?.path();
                if p.extension().is_some_and(|e| e == "bpmn") {
                    found.push(p);
                }
            }
            found.sort();
            out.extend(found);
        } else {
            out.push(input.clone());
        }
    }
    Ok(out)
}

/// Write `contents` to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<(), InputError> {
    use std::io::Write;
    match path {
        Some(p) => fs::write(p, contents).map_err(at(p)),
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(at(Path::new("<stdout>"))),
    }
}
