//! Deterministic interpreter with run-to-line, continue, reset and edit.
//!
//! Every operation takes `&mut self`: one session has a single owner, and
//! distinct sessions share nothing. Edits roll the environment back by
//! replaying from line 1, never by restoring snapshots.

mod exec;
mod render;
mod value;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::dsl::{parse_line, ParseError, Script};
use crate::stats::CiResult;
use crate::table::Table;

pub use render::format_number;
pub use value::{CiRecord, ModelRecord, Value};

/// One rendered line of output, tagged with the script line that made it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputLine {
    pub line: usize,
    pub text: String,
}

impl OutputLine {
    /// `[L<line>] <text>`
    pub fn render(&self) -> String {
        if self.text.is_empty() {
            format!("[L{}]", self.line)
        } else {
            format!("[L{}] {}", self.line, self.text)
        }
    }
}

/// Joins lines as `[L<line>] <text>\n`.
pub fn render_log(lines: &[OutputLine]) -> String {
    let mut out = String::new();
    for l in lines {
        writeln!(out, "{}", l.render()).expect("writing to String");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct RunError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("nothing to run")]
    NothingToRun,
    #[error("line {line} is outside 1..={max}")]
    LineOutOfRange { line: usize, max: usize },
    #[error(
        "line {through} has already run; next line is {next} (reset or run from an earlier line)"
    )]
    AlreadyRun { through: usize, next: usize },
}

impl EngineError {
    /// Script line the error refers to, when there is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            EngineError::Parse(e) => Some(e.line),
            EngineError::Run(e) => Some(e.line),
            EngineError::LineOutOfRange { line, .. } => Some(*line),
            EngineError::AlreadyRun { through, .. } => Some(*through),
            EngineError::NothingToRun => None,
        }
    }
}

/// A loaded table and the line that loaded it.
#[derive(Debug, Clone, PartialEq)]
pub struct TableEntry {
    pub table: Table,
    pub load_line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionState {
    script: Script,
    base_dir: PathBuf,
    env: BTreeMap<String, Value>,
    tables: BTreeMap<String, TableEntry>,
    next_line: usize,
    output_log: Vec<OutputLine>,
    results: Vec<(usize, Value)>,
    inference_lines: Vec<usize>,
    correction_lines: Vec<usize>,
    fits: Vec<ModelRecord>,
}

impl SessionState {
    /// Fresh session; CSV paths resolve against the current directory.
    pub fn new(script: Script) -> Self {
        Self::with_base_dir(script, ".")
    }

    /// Fresh session resolving relative CSV paths against `base_dir`.
    pub fn with_base_dir(script: Script, base_dir: impl Into<PathBuf>) -> Self {
        Self {
            script,
            base_dir: base_dir.into(),
            env: BTreeMap::new(),
            tables: BTreeMap::new(),
            next_line: 1,
            output_log: Vec::new(),
            results: Vec::new(),
            inference_lines: Vec::new(),
            correction_lines: Vec::new(),
            fits: Vec::new(),
        }
    }

    pub fn script(&self) -> &Script {
        &self.script
    }

    pub fn base_dir(&self) -> &Path {
        &self.base_dir
    }

    pub fn next_line(&self) -> usize {
        self.next_line
    }

    /// True once every line has run.
    pub fn is_finished(&self) -> bool {
        self.next_line > self.script.len()
    }

    pub fn output_log(&self) -> &[OutputLine] {
        &self.output_log
    }

    pub fn rendered_log(&self) -> String {
        render_log(&self.output_log)
    }

    pub fn env(&self) -> &BTreeMap<String, Value> {
        &self.env
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.env.get(name)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.get(name).map(|e| &e.table)
    }

    pub fn tables(&self) -> impl Iterator<Item = (&str, &TableEntry)> {
        self.tables.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Values produced by `print`, `ci`, `ci_bonf` and `model`, in order.
    pub fn results(&self) -> &[(usize, Value)] {
        &self.results
    }

    pub fn ci_results(&self) -> impl Iterator<Item = (usize, &CiResult<f64>)> {
        self.results.iter().filter_map(|(line, v)| match v {
            Value::Ci(c) => Some((*line, &c.result)),
            _ => None,
        })
    }

    /// Every model fitted so far, in execution order.
    pub fn fits(&self) -> &[ModelRecord] {
        &self.fits
    }

    /// Intervals formed without any multiplicity correction.
    pub fn inference_count(&self) -> usize {
        self.inference_lines.len()
    }

    pub fn inference_lines(&self) -> &[usize] {
        &self.inference_lines
    }

    /// Lines where a correction (`ci_bonf` or `coef_audit`) ran.
    pub fn correction_lines(&self) -> &[usize] {
        &self.correction_lines
    }

    /// Runs lines `next_line..=through`. Returns the output lines this call
    /// appended. On a run error the session stops at the failing line, and
    /// output from earlier lines stays in the log.
    pub fn run_to_line(&mut self, through: usize) -> Result<Vec<OutputLine>, EngineError> {
        let len = self.script.len();
        if through > len {
            return Err(EngineError::LineOutOfRange {
                line: through,
                max: len,
            });
        }
        if through + 1 < self.next_line {
            return Err(EngineError::AlreadyRun {
                through,
                next: self.next_line,
            });
        }
        let first_new = self.output_log.len();
        while self.next_line <= through {
            let line = self.next_line;
            let stmt = self.script.lines[line - 1].kind.clone();
            if let Err(message) = self.exec(line, &stmt) {
                return Err(RunError { line, message }.into());
            }
            self.next_line += 1;
        }
        Ok(self.output_log[first_new..].to_vec())
    }

    /// Runs everything that has not run yet.
    pub fn continue_run(&mut self) -> Result<Vec<OutputLine>, EngineError> {
        if self.is_finished() {
            return Err(EngineError::NothingToRun);
        }
        self.run_to_line(self.script.len())
    }

    /// Back to a fresh session on the same script.
    pub fn reset(&mut self) {
        let script = std::mem::take(&mut self.script);
        let base_dir = std::mem::take(&mut self.base_dir);
        *self = Self::with_base_dir(script, base_dir);
    }

    /// Resets and replays lines before `line` so the next run starts there.
    pub fn start_at(&mut self, line: usize) -> Result<(), EngineError> {
        let max = self.script.len() + 1;
        if line == 0 || line > max {
            return Err(EngineError::LineOutOfRange { line, max });
        }
        self.reset();
        self.run_to_line(line - 1).map(drop)
    }

    /// Replaces line `n` (or appends when `n == len + 1`). If line `n` had
    /// already run, the session is rebuilt by replaying lines `1..n`.
    /// An unparseable `text` leaves the session untouched.
    pub fn edit_line(&mut self, n: usize, text: &str) -> Result<(), EngineError> {
        let max = self.script.len() + 1;
        if n == 0 || n > max {
            return Err(EngineError::LineOutOfRange { line: n, max });
        }
        let stmt = parse_line(text, n)?;
        self.script.put_line(n, stmt);
        if self.next_line > n {
            self.start_at(n)?;
        }
        Ok(())
    }

    fn emit(&mut self, line: usize, text: impl Into<String>) {
        self.output_log.push(OutputLine {
            line,
            text: text.into(),
        });
    }
}
