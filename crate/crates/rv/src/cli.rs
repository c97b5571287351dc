//! The `rv` command line. Each invocation is a separate process, so the
//! current session is kept in `<root>/.rv/session.json`: the canonical
//! script text and how far it has run. Restoring replays the lines already
//! run, which is deterministic, then carries on.

use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use rv_core::dsl::parse_script;
use rv_core::engine::SessionState;
use rv_core::store::BranchStore;
use serde::{Deserialize, Serialize};

use crate::session::{open_script, RunRequest, Session};

pub const DEFAULT_PORT: u16 = 7343;
const STATE_DIR: &str = ".rv";
const STATE_FILE: &str = "session.json";

#[derive(Debug, Parser)]
#[command(
    name = "rv",
    version,
    about = "Run, audit and branch RVL analysis scripts"
)]
pub struct Cli {
    /// Directory holding branch files and the current session.
    #[arg(long, env = "RV_ROOT", global = true)]
    pub root: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Start a session on a script or branch file.
    Load { file: PathBuf },
    /// Run the session onwards (by default to the end).
    Run {
        /// Re-run from this line; earlier lines are replayed silently.
        #[arg(long)]
        from: Option<usize>,
        /// Stop after this line.
        #[arg(long)]
        through: Option<usize>,
        /// Append audit advisories once the script has run to the end.
        #[arg(long)]
        audit: bool,
    },
    /// Replace line N (or append at one past the end).
    Edit { line: usize, text: String },
    /// Save, list or compare numbered versions of the script.
    Branch {
        #[command(subcommand)]
        command: BranchCommand,
    },
    /// Forget all results; the next run starts at line 1.
    Reset,
    /// Print the script with line numbers and the next-line marker.
    Show,
    /// Serve the HTTP API (and optionally the web UI's static files).
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Directory of static files served at `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BranchCommand {
    Save {
        description: String,
    },
    List {
        /// Defaults to the current session's base.
        #[arg(long)]
        base: Option<String>,
    },
    /// Line diff between two branch numbers of the current base.
    Diff {
        a: u32,
        b: u32,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    NoSession,
    Failed(anyhow::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::NoSession => f.write_str("no session; start one with `rv load <file.rvl>`"),
            CliError::Failed(e) => write!(f, "{e:#}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::NoSession => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Failed(e)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SavedSession {
    base: String,
    parent: u32,
    source_name: String,
    base_dir: PathBuf,
    script: String,
    next_line: usize,
}

impl SavedSession {
    fn capture(s: &Session) -> Self {
        Self {
            base: s.base.clone(),
            parent: s.parent,
            source_name: s.state.script().source_name.clone(),
            base_dir: s.state.base_dir().to_path_buf(),
            script: rv_core::dsl::format_script(s.state.script()),
            next_line: s.state.next_line(),
        }
    }

    fn restore(self) -> anyhow::Result<Session> {
        let script = parse_script(&self.script, &self.source_name)
            .map_err(|e| anyhow!("saved session: {e}"))?;
        let mut state = SessionState::with_base_dir(script, self.base_dir);
        state
            .run_to_line(self.next_line.saturating_sub(1))
            .context("replaying the saved session (did a data file change?)")?;
        Ok(Session::new(self.base, self.parent, state))
    }
}

pub fn root_dir(root: Option<PathBuf>) -> anyhow::Result<PathBuf> {
    match root {
        Some(r) => Ok(r),
        None => std::env::current_dir().context("cannot determine the current directory"),
    }
}

fn state_path(root: &Path) -> PathBuf {
    root.join(STATE_DIR).join(STATE_FILE)
}

fn load_session(root: &Path) -> Result<Session, CliError> {
    let path = state_path(root);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(CliError::NoSession),
        Err(e) => {
            return Err(anyhow!(e)
                .context(format!("cannot read {}", path.display()))
                .into())
        }
    };
    let saved: SavedSession = serde_json::from_str(&text)
        .with_context(|| format!("{} is corrupt; run `rv load` again", path.display()))?;
    Ok(saved.restore()?)
}

fn store_session(root: &Path, s: &Session) -> anyhow::Result<()> {
    let path = state_path(root);
    fs::create_dir_all(path.parent().expect("has parent"))?;
    let json = serde_json::to_string_pretty(&SavedSession::capture(s))?;
    // write-then-rename so a crash never leaves a half-written session
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, json).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, &path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Executes everything except `serve`, writing normal output to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let root = root_dir(cli.root)?;
    let store = BranchStore::new(&root);
    let w = |e: std::io::Error| CliError::Failed(e.into());
    match cli.command {
        Command::Load { file } => {
            let session = open_script(&file, &store)?;
            store_session(&root, &session)?;
            writeln!(
                out,
                "loaded {} as {}.{}: {} lines",
                file.display(),
                session.base,
                session.parent,
                session.state.script().len()
            )
            .map_err(w)?;
        }
        Command::Run {
            from,
            through,
            audit,
        } => {
            let mut session = load_session(&root)?;
            let report = session.run(RunRequest {
                from,
                through,
                audit,
            });
            out.write_all(report.render().as_bytes()).map_err(w)?;
            store_session(&root, &session)?;
            if let Some(e) = report.error {
                return Err(anyhow!(e).into());
            }
        }
        Command::Edit { line, text } => {
            let mut session = load_session(&root)?;
            session
                .state
                .edit_line(line, &text)
                .map_err(anyhow::Error::from)?;
            store_session(&root, &session)?;
            let shown = &session.lines()[line - 1];
            writeln!(out, "{:>4}  {}", shown.line, shown.text).map_err(w)?;
        }
        Command::Reset => {
            let mut session = load_session(&root)?;
            session.state.reset();
            store_session(&root, &session)?;
            writeln!(out, "session reset; next line 1").map_err(w)?;
        }
        Command::Show => {
            let session = load_session(&root)?;
            let next = session.state.next_line();
            for l in session.lines() {
                let mark = if l.line == next { '>' } else { ' ' };
                writeln!(out, "{mark}{:>4}  {}", l.line, l.text).map_err(w)?;
            }
            if session.state.is_finished() {
                writeln!(out, ">{:>4}  (end)", next).map_err(w)?;
            }
        }
        Command::Branch { command } => match command {
            BranchCommand::Save { description } => {
                let session = load_session(&root)?;
                let rec = session
                    .save_branch(&store, &description)
                    .map_err(anyhow::Error::from)?;
                let path = store.path_for(&rec.base, rec.number);
                let parent = rec
                    .parent
                    .as_ref()
                    .map_or_else(String::new, |p| format!(" (parent {p})"));
                writeln!(out, "saved {}{parent}", path.display()).map_err(w)?;
            }
            BranchCommand::List { base } => {
                let base = match base {
                    Some(b) => b,
                    None => load_session(&root)?.base,
                };
                for r in store.list_branches(&base).map_err(anyhow::Error::from)? {
                    let parent = r
                        .parent
                        .as_ref()
                        .map_or_else(|| "-".to_owned(), ToString::to_string);
                    let created = r.created_at.format("%Y-%m-%dT%H:%M:%SZ");
                    writeln!(
                        out,
                        "{}.{}\t{parent}\t{created}\t{}\t{}",
                        r.base, r.number, r.content_hash, r.description
                    )
                    .map_err(w)?;
                }
            }
            BranchCommand::Diff { a, b } => {
                let base = load_session(&root)?.base;
                for e in store
                    .diff_branches(&base, a, b)
                    .map_err(anyhow::Error::from)?
                {
                    if let (Some(l), Some(t)) = (e.left_line, &e.left) {
                        writeln!(out, "-{l:>4}  {t}").map_err(w)?;
                    }
                    if let (Some(r), Some(t)) = (e.right_line, &e.right) {
                        writeln!(out, "+{r:>4}  {t}").map_err(w)?;
                    }
                }
            }
        },
        Command::Serve {
            port,
            host,
            static_dir,
        } => {
            let addr = SocketAddr::new(host, port);
            let runtime = tokio::runtime::Runtime::new().map_err(w)?;
            runtime.block_on(crate::server::serve(addr, root, static_dir))?;
        }
    }
    Ok(())
}
