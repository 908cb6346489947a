//! The `bpmnowl` command line.
//!
//! Exit codes: 0 success, 1 findings (verification errors, an unsupported
//! element, a round-trip mismatch, a run that did not complete), 2 any
//! operational error (unreadable or malformed input, bad options).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use bpmnowl_core::engine::{self, TerminalStatus};
use bpmnowl_core::sbpm::{emit_sbpm_owl, to_bpmn, transform, TranslateError};
use bpmnowl_core::transform::{bpmn_to_owl, compare_to_reference, ModelOntology};
use bpmnowl_core::verify::FindingKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use crate::bpmn_xml::{canonicalize, parse_bpmn, serialize_bpmn};
use crate::config::Config;
use crate::corpus::{exit_code, render, verify_corpus, ReportFormat};
use crate::files::{expand_inputs, load_bpmn, load_reference, load_scenario, load_sbpm, load_table, read_text};
use crate::owl_xml::{parse_owl, serialize_owl};
use crate::trace_io::write_trace;

#[derive(Debug, Parser)]
#[command(name = "bpmnowl", version, about = "BPMN models as OWL ontologies: convert, verify, transform to S-BPM, run")]
pub struct Cli {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ReferenceArgs {
    /// Ontology file merged into the built-in reference.
    #[arg(long, value_name = "OWL")]
    pub extension: Option<PathBuf>,
    /// Translation table (`scope standard serialized` per line).
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a BPMN file into its model ontology.
    Convert {
        input: PathBuf,
        #[arg(short, long, value_name = "OWL")]
        output: Option<PathBuf>,
        /// Write the comparison with the reference ontology as JSON lines.
        #[arg(long, value_name = "JSONL")]
        log: Option<PathBuf>,
        #[command(flatten)]
        reference: ReferenceArgs,
    },
    /// Verify BPMN files (or directories of them) against the reference.
    Verify {
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        reference: ReferenceArgs,
        #[arg(long, value_enum)]
        format: Option<ReportFormat>,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
        /// Report this finding kind as a warning (repeatable).
        #[arg(long, value_name = "KIND")]
        warn: Vec<FindingKind>,
    },
    /// Translate a BPMN collaboration into an S-BPM ontology.
    Transform {
        input: PathBuf,
        #[arg(short, long, value_name = "OWL")]
        output: Option<PathBuf>,
    },
    /// Convert BPMN to OWL and back, and compare the canonical forms.
    Roundtrip {
        input: PathBuf,
        /// Read the intermediate ontology from this file instead of
        /// converting the input.
        #[arg(long, value_name = "OWL", conflicts_with = "keep_owl")]
        owl: Option<PathBuf>,
        /// Keep the intermediate ontology in this file.
        #[arg(long, value_name = "OWL")]
        keep_owl: Option<PathBuf>,
    },
    /// Execute an S-BPM ontology under a scripted scenario.
    Run {
        model: PathBuf,
        /// Scenario JSON; without it no decision can be taken.
        #[arg(long, value_name = "JSON")]
        scenario: Option<PathBuf>,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(short, long, value_name = "JSONL")]
        output: Option<PathBuf>,
    },
    /// Write an S-BPM ontology back out as a BPMN collaboration.
    Reverse {
        model: PathBuf,
        #[arg(short, long, value_name = "BPMN")]
        output: Option<PathBuf>,
    },
}

/// An operational failure: reported, exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, path: Option<&Path>, contents: &str) -> Result<(), Failure> {
        match path {
            Some(p) => std::fs::write(p, contents).map_err(|e| Failure(format!("{}: {e}", p.display()))),
            None => Ok(self.out.write_all(contents.as_bytes())?),
        }
    }

    fn note(&mut self, line: &str) {
        let _ = writeln!(self.err, "{line}");
    }
}

/// Parse `args` (program name first) and run the command.
pub fn main_with(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { out, err };
    match execute(cli, &mut io) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            io.note(&format!("error: {msg}"));
            2
        }
    }
}

fn execute(cli: Cli, io: &mut Io<'_>) -> Result<i32, Failure> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Convert {
            input,
            output,
            log,
            reference,
        } => {
            let doc = load_bpmn(&input)?;
            let model = bpmn_to_owl(&doc).map_err(|e| Failure(format!("{}: {e}", input.display())))?;
            if let Some(log) = log {
                let (reference, table) = reference_inputs(&reference, &config)?;
                let mut lines = String::new();
                for d in compare_to_reference(&model, &reference, &table) {
                    lines.push_str(&json!({"kind": d.kind.to_string(), "side": d.side.to_string(), "name": d.item}).to_string());
                    lines.push('\n');
                }
                io.emit(Some(&log), &lines)?;
            }
            io.emit(output.as_deref(), &serialize_owl(&model.ontology))?;
            Ok(0)
        }
        Command::Verify {
            inputs,
            reference,
            format,
            output,
            warn,
        } => {
            let (reference, table) = reference_inputs(&reference, &config)?;
            let mut policy = config.policy().map_err(Failure)?;
            policy.warn_kinds.extend(warn);
            let files = expand_inputs(&inputs)?;
            let entries = verify_corpus(&files, &reference, &table, &policy);
            let format = format.or(config.format).unwrap_or_default();
            io.emit(output.as_deref(), &render(&entries, format))?;
            for e in entries.iter().filter_map(|e| e.outcome.as_ref().err()) {
                io.note(&format!("error: {e}"));
            }
            Ok(exit_code(&entries))
        }
        Command::Transform { input, output } => {
            let doc = load_bpmn(&input)?;
            let model = bpmn_to_owl(&doc).map_err(|e| Failure(format!("{}: {e}", input.display())))?;
            let sbpm = match transform(&model) {
                Ok(m) => m,
                Err(e @ TranslateError::UnsupportedElement { .. }) => {
                    io.note(&format!("{}: {e}", input.display()));
                    return Ok(1);
                }
                Err(e) => return Err(Failure(format!("{}: {e}", input.display()))),
            };
            let ont = emit_sbpm_owl(&sbpm)?;
            io.emit(output.as_deref(), &serialize_owl(&ont))?;
            Ok(0)
        }
        Command::Roundtrip { input, owl, keep_owl } => {
            let original = load_bpmn(&input)?;
            let intermediate = match &owl {
                Some(p) => read_text(p)?,
                None => serialize_owl(&bpmn_to_owl(&original).map_err(|e| Failure(format!("{}: {e}", input.display())))?.ontology),
            };
            if let Some(p) = &keep_owl {
                io.emit(Some(p), &intermediate)?;
            }
            let source = owl.as_deref().unwrap_or(&input).display().to_string();
            let ont = parse_owl(&intermediate).map_err(|e| Failure(format!("{source}: {e}")))?;
            let back = ModelOntology::from_ontology(ont)
                .and_then(|m| m.to_bpmn())
                .map_err(|e| Failure(format!("{source}: {e}")))?;
            let back = parse_bpmn(&serialize_bpmn(&back)).map_err(|e| Failure(format!("reconstructed document: {e}")))?;
            let (a, b) = (canonicalize(&original), canonicalize(&back));
            match first_difference(&a, &b) {
                None => {
                    io.emit(None, &format!("{}: identical ({} canonical bytes)\n", input.display(), a.len()))?;
                    Ok(0)
                }
                Some(report) => {
                    io.emit(None, &format!("{}: differs\n{report}", input.display()))?;
                    Ok(1)
                }
            }
        }
        Command::Run {
            model,
            scenario,
            max_steps,
            output,
        } => {
            let sbpm = load_sbpm(&model)?;
            let mut scenario = match &scenario {
                Some(p) => load_scenario(p)?,
                None => engine::Scenario::default(),
            };
            if let Some(n) = max_steps.or(config.run.max_steps) {
                scenario.max_steps = n;
            }
            let def = engine::compile(sbpm)?;
            let trace = engine::run(&def, &scenario)?;
            io.emit(output.as_deref(), &write_trace(&trace))?;
            let mut summary = format!("{}: {} after {} steps", model.display(), trace.terminal, trace.steps);
            for w in &trace.waiting {
                summary.push_str(&format!("; {} waiting in {}", w.instance, w.state));
            }
            io.note(&summary);
            Ok(match trace.terminal {
                TerminalStatus::Completed => 0,
                TerminalStatus::Deadlock | TerminalStatus::StepLimit => 1,
            })
        }
        Command::Reverse { model, output } => {
            let sbpm = load_sbpm(&model)?;
            let doc = to_bpmn(&sbpm)?;
            io.emit(output.as_deref(), &serialize_bpmn(&doc))?;
            Ok(0)
        }
    }
}

fn reference_inputs(
    args: &ReferenceArgs,
    config: &Config,
) -> Result<(bpmnowl_core::reference::ReferenceOntology, bpmnowl_core::reference::TranslationTable), Failure> {
    let extension = args.extension.as_deref().or(config.extension.as_deref());
    let table = args.table.as_deref().or(config.table.as_deref());
    Ok((load_reference(extension)?, load_table(table)?))
}

/// The first differing region of two canonical strings, with a little
/// context on each side; `None` when equal.
fn first_difference(a: &str, b: &str) -> Option<String> {
    if a == b {
        return None;
    }
    let at = a.bytes().zip(b.bytes()).position(|(x, y)| x != y).unwrap_or(a.len().min(b.len()));
    let window = |s: &str| {
        let mut start = at.saturating_sub(40);
        while !s.is_char_boundary(start) {
            start -= 1;
        }
        let mut end = (at + 40).min(s.len());
        while !s.is_char_boundary(end) {
            end += 1;
        }
        s[start..end].to_string()
    };
    Some(format!("at byte {at}\n  original:      {}\n  reconstructed: {}\n", window(a), window(b)))
}
