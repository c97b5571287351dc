//! What the CLI and the HTTP server share: opening scripts, running them,
//! and the JSON shapes of lines, outputs and advisories. Both front ends go
//! through [`Session::run`], so their output is identical.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rv_core::audit::{audit_session, Advisory, AuditConfig};
use rv_core::dsl::{format_stmt, parse_script, Script};
use rv_core::engine::{EngineError, OutputLine, SessionState};
use rv_core::store::{
    parse_branch_file_name, read_branch_text, BranchRecord, BranchStore, StoreError, EXTENSION,
};
use serde::{Deserialize, Serialize};

pub const DEFAULT_BASE: &str = "untitled";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineView {
    pub line: usize,
    pub text: String,
}

impl From<&OutputLine> for LineView {
    fn from(o: &OutputLine) -> Self {
        Self {
            line: o.line,
            text: o.text.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdvisoryView {
    pub code: String,
    pub message: String,
    pub line: usize,
    pub subject: String,
    /// The advisory as printed: `WARN <code>: <message> (line <n>)`.
    pub text: String,
}

impl From<&Advisory> for AdvisoryView {
    fn from(a: &Advisory) -> Self {
        Self {
            code: a.code.as_str().to_owned(),
            message: a.message.clone(),
            line: a.line,
            subject: a.subject.clone(),
            text: a.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(default)]
pub struct RunRequest {
    pub from: Option<usize>,
    pub through: Option<usize>,
    pub audit: bool,
}

/// Outcome of one run. Output produced before a failing line is kept.
#[derive(Debug)]
pub struct RunReport {
    pub outputs: Vec<LineView>,
    pub advisories: Vec<AdvisoryView>,
    pub next_line: usize,
    pub error: Option<EngineError>,
}

impl RunReport {
    /// Text as the CLI prints it: `[L<n>] ...` per output, then advisories.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for o in &self.outputs {
            out.push_str(&format!("[L{}] {}\n", o.line, o.text));
        }
        for a in &self.advisories {
            out.push_str(&a.text);
            out.push('\n');
        }
        out
    }
}

/// A script under analysis plus where it came from.
#[derive(Debug, Clone)]
pub struct Session {
    pub base: String,
    /// Branch number the script was loaded from (0 for the original).
    pub parent: u32,
    pub state: SessionState,
    pub advisories: Vec<AdvisoryView>,
}

impl Session {
    pub fn new(base: String, parent: u32, state: SessionState) -> Self {
        Self {
            base,
            parent,
            state,
            advisories: Vec::new(),
        }
    }

    pub fn lines(&self) -> Vec<LineView> {
        script_lines(self.state.script())
    }

    pub fn run(&mut self, req: RunRequest) -> RunReport {
        let mut before = self.state.output_log().len();
        let mut result = Ok(());
        if let Some(from) = req.from {
            // replayed lines before `from` are not part of this run's output
            result = self.state.start_at(from);
            before = self.state.output_log().len();
        }
        if result.is_ok() {
            result = match req.through {
                Some(t) => self.state.run_to_line(t),
                None => self.state.continue_run(),
            }
            .map(drop);
        }
        let outputs = self.state.output_log()[before..]
            .iter()
            .map(LineView::from)
            .collect();
        let error = result.err();
        self.advisories = if req.audit && error.is_none() && self.state.is_finished() {
            audit_session(&self.state, &AuditConfig::default())
                .iter()
                .map(AdvisoryView::from)
                .collect()
        } else {
            Vec::new()
        };
        RunReport {
            outputs,
            advisories: self.advisories.clone(),
            next_line: self.state.next_line(),
            error,
        }
    }

    pub fn save_branch(
        &self,
        store: &BranchStore,
        description: &str,
    ) -> Result<BranchRecord, StoreError> {
        store.save_branch(
            self.state.script(),
            &self.base,
            description,
            Some(self.parent),
        )
    }
}

pub fn script_lines(script: &Script) -> Vec<LineView> {
    script
        .lines
        .iter()
        .map(|s| LineView {
            line: s.line_no,
            text: format_stmt(s),
        })
        .collect()
}

/// Opens a script file. A branch file (`<base>.<n>.rvl` with a header) has
/// its hash checked and keeps its number as the parent; a plain script is
/// registered in `store` as `<base>.0`. Data paths resolve against the
/// file's directory.
pub fn open_script(path: &Path, store: &BranchStore) -> Result<Session> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let file_name = path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or_default();
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let dir = if dir.as_os_str().is_empty() {
        PathBuf::from(".")
    } else {
        dir
    };
    let dir = dir
        .canonicalize()
        .with_context(|| format!("cannot resolve {}", dir.display()))?;

    if let Some((base, n)) = parse_branch_file_name(file_name) {
        if text.starts_with("#: ") {
            let (script, _) = read_branch_text(&text, path, base, n)?;
            return Ok(Session::new(
                base.to_owned(),
                n,
                SessionState::with_base_dir(script, dir),
            ));
        }
    }
    let script = parse_script(&text, file_name)
        .map_err(|e| anyhow::Error::new(e).context(file_name.to_owned()))?;
    let base = base_name(file_name);
    store.ensure_original(&script, &base)?;
    Ok(Session::new(
        base,
        0,
        SessionState::with_base_dir(script, dir),
    ))
}

/// Script text with no file behind it (data paths resolve against `dir`).
pub fn open_text(
    text: &str,
    name: Option<&str>,
    dir: &Path,
    store: &BranchStore,
) -> Result<Session, OpenError> {
    let source = name.unwrap_or(DEFAULT_BASE);
    let script = parse_script(text, source).map_err(OpenError::Parse)?;
    let base = base_name(source);
    store
        .ensure_original(&script, &base)
        .map_err(|e| OpenError::Other(e.into()))?;
    Ok(Session::new(
        base,
        0,
        SessionState::with_base_dir(script, dir),
    ))
}

#[derive(Debug)]
pub enum OpenError {
    Parse(rv_core::dsl::ParseError),
    Other(anyhow::Error),
}

/// `pima.rvl` → `pima`; anything unusable as a base becomes `untitled`.
pub fn base_name(file_name: &str) -> String {
    let stem = file_name
        .strip_suffix(&format!(".{EXTENSION}"))
        .unwrap_or(file_name);
    let ok = !stem.is_empty()
        && stem
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if ok {
        stem.to_owned()
    } else {
        DEFAULT_BASE.to_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_names() {
        assert_eq!(base_name("pima.rvl"), "pima");
        assert_eq!(base_name("my-run_2.rvl"), "my-run_2");
        assert_eq!(base_name("a b.rvl"), "untitled");
        assert_eq!(base_name(""), "untitled");
    }
}
