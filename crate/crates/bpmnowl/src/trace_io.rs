//! Traces as JSON lines: one event per line, then a footer line.

use std::collections::BTreeMap;

use bpmnowl_core::engine::{Event, TerminalStatus, Trace, Waiting};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Footer {
    terminal: TerminalStatus,
    steps: usize,
    unconsumed: BTreeMap<String, usize>,
    waiting: Vec<Waiting>,
    sinks: BTreeMap<String, usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum TraceReadError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("trace has no footer line")]
    MissingFooter,
}

pub fn write_trace(trace: &Trace) -> String {
    let mut out = String::new();
    for e in &trace.events {
        out.push_str(&serde_json::to_string(e).expect("events serialize"));
        out.push('\n');
    }
    let footer = Footer {
        terminal: trace.terminal,
        steps: trace.steps,
        unconsumed: trace.unconsumed.clone(),
        waiting: trace.waiting.clone(),
        sinks: trace.sinks.clone(),
    };
    out.push_str(&serde_json::to_string(&footer).expect("footer serializes"));
    out.push('\n');
    out
}

pub fn read_trace(src: &str) -> Result<Trace, TraceReadError> {
    let lines: Vec<(usize, &str)> = src
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| (n + 1, l))
        .collect();
    let Some(((footer_line, footer), events)) = lines.split_last() else {
        return Err(TraceReadError::MissingFooter);
    };
    let footer: Footer = serde_json::from_str(footer).map_err(|source| TraceReadError::Json {
        line: *footer_line,
        source,
    })?;
    let events = events
        .iter()
        .map(|(line, l)| serde_json::from_str::<Event>(l).map_err(|source| TraceReadError::Json { line: *line, source }))
        .collect::<Result<_, _>>()?;
    Ok(Trace {
        events,
        terminal: footer.terminal,
        steps: footer.steps,
        unconsumed: footer.unconsumed,
        waiting: footer.waiting,
        sinks: footer.sinks,
    })
}
