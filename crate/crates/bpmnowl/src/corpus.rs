//! Verification of many files at once, and the report formats.

use std::path::{Path, PathBuf};

use bpmnowl_core::reference::{ReferenceOntology, TranslationTable};
use bpmnowl_core::verify::{verify_with, FindingKind, SeverityPolicy, VerificationReport};
use rayon::prelude::*;
use serde_json::json;

use crate::files::load_bpmn;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Text,
    Jsonl,
}

#[derive(Debug)]
pub struct CorpusEntry {
    pub file: PathBuf,
    /// The report, or why the file could not be verified.
    pub outcome: Result<VerificationReport, String>,
}

impl CorpusEntry {
    pub fn status(&self) -> &'static str {
        match &self.outcome {
            Ok(r) if r.passed() => "pass",
            Ok(_) => "fail",
            Err(_) => "error",
        }
    }
}

/// One entry per input, in input order. Files are checked in parallel.
pub fn verify_corpus(
    paths: &[PathBuf],
    reference: &ReferenceOntology,
    table: &TranslationTable,
    policy: &SeverityPolicy,
) -> Vec<CorpusEntry> {
    paths
        .par_iter()
        .map(|path| CorpusEntry {
            file: path.clone(),
            outcome: verify_file(path, reference, table, policy),
        })
        .collect()
}

fn verify_file(
    path: &Path,
    reference: &ReferenceOntology,
    table: &TranslationTable,
    policy: &SeverityPolicy,
) -> Result<VerificationReport, String> {
    let doc = load_bpmn(path).map_err(|e| e.to_string())?;
    Ok(verify_with(&doc, reference, table, policy).with_model(path.display().to_string()))
}

/// 0 when every file passes, 1 when some file has error findings, 2 when
/// some file could not be verified.
pub fn exit_code(entries: &[CorpusEntry]) -> i32 {
    if entries.iter().any(|e| e.outcome.is_err()) {
        2
    } else if entries.iter().any(|e| e.status() == "fail") {
        1
    } else {
        0
    }
}

pub fn render(entries: &[CorpusEntry], format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => render_text(entries),
        ReportFormat::Jsonl => render_jsonl(entries),
    }
}

fn render_text(entries: &[CorpusEntry]) -> String {
    let mut out = String::from("file\tstatus");
    for k in FindingKind::ALL {
        out.push('\t');
        out.push_str(k.as_str());
    }
    out.push_str("\twarnings\n");
    for e in entries {
        out.push_str(&format!("{}\t{}", e.file.display(), e.status()));
        match &e.outcome {
            Ok(r) => {
                for k in FindingKind::ALL {
                    out.push_str(&format!("\t{}", r.counts.of(k)));
                }
                out.push_str(&format!("\t{}\n", r.counts.warnings));
            }
            Err(_) => {
                out.push_str(&"\t-".repeat(FindingKind::ALL.len() + 1));
                out.push('\n');
            }
        }
    }
    for e in entries {
        match &e.outcome {
            Ok(r) => {
                for f in &r.findings {
                    out.push_str(&format!("{}\t{f}\n", e.file.display()));
                }
            }
            Err(msg) => out.push_str(&format!("{}\terror\tinput\t-\t{msg}\n", e.file.display())),
        }
    }
    out
}

fn render_jsonl(entries: &[CorpusEntry]) -> String {
    let mut out = String::new();
    let mut line = |v: serde_json::Value| {
        out.push_str(&v.to_string());
        out.push('\n');
    };
    for e in entries {
        let file = e.file.display().to_string();
        match &e.outcome {
            Ok(r) => {
                for f in &r.findings {
                    line(json!({
                        "record": "finding",
                        "file": file,
                        "kind": f.kind.as_str(),
                        "severity": f.severity.to_string(),
                        "location": f.location,
                        "tag": f.tag,
                        "subject": f.subject,
                        "restriction": f.restriction,
                        "expected": f.expected,
                        "actual": f.actual,
                        "message": f.message,
                    }));
                }
                line(json!({
                    "record": "file",
                    "file": file,
                    "status": e.status(),
                    "reference": r.reference_version,
                    "unknown_class": r.counts.unknown_class,
                    "unknown_property": r.counts.unknown_property,
                    "restriction_violation": r.counts.restriction_violation,
                    "errors": r.counts.errors,
                    "warnings": r.counts.warnings,
                }));
            }
            Err(msg) => line(json!({
                "record": "file",
                "file": file,
                "status": "error",
                "error": msg,
            })),
        }
    }
    let count = |s: &str| entries.iter().filter(|e| e.status() == s).count();
    line(json!({
        "record": "summary",
        "files": entries.len(),
        "passed": count("pass"),
        "failed": count("fail"),
        "unreadable": count("error"),
    }));
    out
}
