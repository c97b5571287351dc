//! Numbered, described script versions kept as plain files.
//!
//! A branch is `<base>.<n>.rvl`: header comments, then canonical script
//! text. Number 0 is the original as loaded.
//!
//! ```text
//! #: desc use Bonferroni intervals
//! #: parent pima.0
//! #: created 2026-01-02T03:04:05Z
//! #: hash 8c1f0e6a0b9d2c41
//! # Pima diabetes
//! load pima = csv("pima.csv")
//! ```
//!
//! The hash is FNV-1a over the script text after the header. Because the
//! header lines are comments, a branch file is itself a runnable script.

mod diff;
mod hash;

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use thiserror::Error;

use crate::dsl::{format_script, parse_script, ParseError, Script};

pub use diff::{diff_lines, DiffEntry};
pub use hash::{fnv1a64, ContentHash};

pub const EXTENSION: &str = "rvl";
const HEADER: &str = "#: ";
const MAX_SAVE_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchRef {
    pub base: String,
    pub number: u32,
}

impl std::fmt::Display for BranchRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.base, self.number)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchRecord {
    pub base: String,
    pub number: u32,
    pub description: String,
    pub parent: Option<BranchRef>,
    pub created_at: DateTime<Utc>,
    pub content_hash: ContentHash,
}

impl BranchRecord {
    pub fn reference(&self) -> BranchRef {
        BranchRef {
            base: self.base.clone(),
            number: self.number,
        }
    }
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invalid base name {0:?}")]
    BadBase(String),
    #[error("description must be a non-empty single line")]
    BadDescription,
    #[error("branch {0} does not exist")]
    NotFound(BranchRef),
    #[error("{path}: content hash mismatch (header {expected}, content {actual})")]
    Integrity {
        path: PathBuf,
        expected: ContentHash,
        actual: ContentHash,
    },
    #[error("{path}: bad header: {message}")]
    BadHeader { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("could not allocate a branch number for {0}")]
    Exhausted(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Splits `pima.3.rvl` into `("pima", 3)`.
pub fn parse_branch_file_name(name: &str) -> Option<(&str, u32)> {
    let stem = name.strip_suffix(EXTENSION)?.strip_suffix('.')?;
    let (base, n) = stem.rsplit_once('.')?;
    if base.is_empty() || n.is_empty() || !n.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((base, n.parse().ok()?))
}

fn check_base(base: &str) -> Result<(), StoreError> {
    let ok = !base.is_empty()
        && !base.starts_with('.')
        && base
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if ok {
        Ok(())
    } else {
        Err(StoreError::BadBase(base.to_owned()))
    }
}

/// Branch files for any number of bases in one directory.
#[derive(Debug, Clone)]
pub struct BranchStore {
    dir: PathBuf,
}

impl BranchStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, base: &str, number: u32) -> PathBuf {
        self.dir.join(format!("{base}.{number}.{EXTENSION}"))
    }

    /// Writes `<base>.0.rvl` unless it already exists; returns its record.
    pub fn ensure_original(&self, script: &Script, base: &str) -> Result<BranchRecord, StoreError> {
        check_base(base)?;
        let _lock = self.lock(base)?;
        let path = self.path_for(base, 0);
        if path.exists() {
            return self.load_branch(base, 0).map(|(_, rec)| rec);
        }
        let desc = if script.source_name.is_empty() {
            "original".to_owned()
        } else {
            format!("original {}", script.source_name)
        };
        self.write_new(script, base, 0, &desc, None)?
            .ok_or_else(|| StoreError::Exhausted(base.to_owned()))
    }

    /// Saves `script` as the next free number for `base` (never 0).
    pub fn save_branch(
        &self,
        script: &Script,
        base: &str,
        description: &str,
        parent: Option<u32>,
    ) -> Result<BranchRecord, StoreError> {
        check_base(base)?;
        let description = description.trim();
        if description.is_empty() || description.contains(['\n', '\r']) {
            return Err(StoreError::BadDescription);
        }
        let parent = match parent {
            Some(n) => {
                let r = BranchRef {
                    base: base.to_owned(),
                    number: n,
                };
                if !self.path_for(base, n).exists() {
                    return Err(StoreError::NotFound(r));
                }
                Some(r)
            }
            None => None,
        };
        let _lock = self.lock(base)?;
        let first = self.numbers(base)?.last().map_or(1, |n| n + 1).max(1);
        for number in (first..).take(MAX_SAVE_ATTEMPTS) {
            if let Some(rec) = self.write_new(script, base, number, description, parent.clone())? {
                return Ok(rec);
            }
        }
        Err(StoreError::Exhausted(base.to_owned()))
    }

    pub fn load_branch(
        &self,
        base: &str,
        number: u32,
    ) -> Result<(Script, BranchRecord), StoreError> {
        check_base(base)?;
        let path = self.path_for(base, number);
        let text = match fs::read_to_string(&path) {
            Err(e) if e.kind() == io::ErrorKind::NotFound => {
                return Err(StoreError::NotFound(BranchRef {
                    base: base.to_owned(),
                    number,
                }))
            }
            r => r.map_err(io_err(&path))?,
        };
        read_branch_text(&text, &path, base, number)
    }

    /// All records for `base`, sorted by number.
    pub fn list_branches(&self, base: &str) -> Result<Vec<BranchRecord>, StoreError> {
        check_base(base)?;
        self.numbers(base)?
            .into_iter()
            .map(|n| self.load_branch(base, n).map(|(_, r)| r))
            .collect()
    }

    /// Line diff of the canonical texts of two branches.
    pub fn diff_branches(&self, base: &str, a: u32, b: u32) -> Result<Vec<DiffEntry>, StoreError> {
        let (sa, _) = self.load_branch(base, a)?;
        let (sb, _) = self.load_branch(base, b)?;
        let (ta, tb) = (format_script(&sa), format_script(&sb));
        let la: Vec<&str> = ta.lines().collect();
        let lb: Vec<&str> = tb.lines().collect();
        Ok(diff_lines(&la, &lb))
    }

    fn numbers(&self, base: &str) -> Result<Vec<u32>, StoreError> {
        let entries = match fs::read_dir(&self.dir) {
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            r => r.map_err(io_err(&self.dir))?,
        };
        let mut out = Vec::new();
        for entry in entries {
            let entry = entry.map_err(io_err(&self.dir))?;
            if let Some(name) = entry.file_name().to_str() {
                if let Some((b, n)) = parse_branch_file_name(name) {
                    if b == base {
                        out.push(n);
                    }
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Creates the file exclusively; `Ok(None)` when the number is taken.
    fn write_new(
        &self,
        script: &Script,
        base: &str,
        number: u32,
        description: &str,
        parent: Option<BranchRef>,
    ) -> Result<Option<BranchRecord>, StoreError> {
        let body = format_script(script);
        let rec = BranchRecord {
            base: base.to_owned(),
            number,
            description: description.to_owned(),
            parent,
            created_at: truncate_to_seconds(Utc::now()),
            content_hash: ContentHash::of(&body),
        };
        let path = self.path_for(base, number);
        let mut file = match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => return Ok(None),
            Err(e) => return Err(io_err(&path)(e)),
        };
        let text = format!("{}{body}", render_header(&rec));
        file.write_all(text.as_bytes())
            .and_then(|()| file.sync_all())
            .map_err(io_err(&path))?;
        Ok(Some(rec))
    }

    fn lock(&self, base: &str) -> Result<File, StoreError> {
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let path = self.dir.join(format!("{base}.lock"));
        let file = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&path)
            .map_err(io_err(&path))?;
        file.lock().map_err(io_err(&path))?;
        Ok(file)
    }
}

fn truncate_to_seconds(t: DateTime<Utc>) -> DateTime<Utc> {
    DateTime::from_timestamp(t.timestamp(), 0).expect("in range")
}

fn render_header(rec: &BranchRecord) -> String {
    let mut h = format!("{HEADER}desc {}\n", rec.description);
    if let Some(p) = &rec.parent {
        h.push_str(&format!("{HEADER}parent {p}\n"));
    }
    h.push_str(&format!(
        "{HEADER}created {}\n",
        rec.created_at.to_rfc3339_opts(SecondsFormat::Secs, true)
    ));
    h.push_str(&format!("{HEADER}hash {}\n", rec.content_hash));
    h
}

/// Parses a branch file's text, checking its hash.
pub fn read_branch_text(
    text: &str,
    path: &Path,
    base: &str,
    number: u32,
) -> Result<(Script, BranchRecord), StoreError> {
    let bad = |message: String| StoreError::BadHeader {
        path: path.to_path_buf(),
        message,
    };
    let (mut desc, mut parent, mut created, mut hash) = (None, None, None, None);
    let mut rest = text;
    while hash.is_none() {
        let Some((line, tail)) = rest.split_once('\n') else {
            return Err(bad("header ends before `hash`".into()));
        };
        let Some(field) = line.strip_prefix(HEADER) else {
            return Err(bad(format!("expected a `{HEADER}` line, found {line:?}")));
        };
        let (key, value) = field.split_once(' ').unwrap_or((field, ""));
        match key {
            "desc" => desc = Some(value.to_owned()),
            "parent" => {
                let (b, n) = value
                    .rsplit_once('.')
                    .and_then(|(b, n)| Some((b, n.parse::<u32>().ok()?)))
                    .ok_or_else(|| bad(format!("bad parent {value:?}")))?;
                parent = Some(BranchRef {
                    base: b.to_owned(),
                    number: n,
                });
            }
            "created" => {
                let t = DateTime::parse_from_rfc3339(value)
                    .map_err(|e| bad(format!("bad timestamp: {e}")))?;
                created = Some(t.with_timezone(&Utc));
            }
            "hash" => {
                hash = Some(
                    value
                        .parse::<ContentHash>()
                        .map_err(|e| bad(format!("bad hash: {e}")))?,
                )
            }
            other => return Err(bad(format!("unknown key {other:?}"))),
        }
        rest = tail;
    }
    let expected = hash.expect("loop exits on hash");
    let actual = ContentHash::of(rest);
    if actual != expected {
        return Err(StoreError::Integrity {
            path: path.to_path_buf(),
            expected,
            actual,
        });
    }
    let source_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let script = parse_script(rest, &source_name).map_err(|source| StoreError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    let rec = BranchRecord {
        base: base.to_owned(),
        number,
        description: desc.ok_or_else(|| bad("missing `desc`".into()))?,
        parent,
        created_at: created.ok_or_else(|| bad("missing `created`".into()))?,
        content_hash: expected,
    };
    Ok((script, rec))
}
