//! Canonical text rendering: single spaces between tokens, no trailing
//! whitespace, one statement per line.

use std::fmt::{self, Display, Write};

use super::ast::{CiSpec, ColumnRef, Expr, Formula, Script, Stmt, StmtKind};
use super::lexer::is_identifier;

pub fn format_script(s: &Script) -> String {
    let mut out = String::new();
    for stmt in &s.lines {
        writeln!(out, "{}", stmt.kind).expect("writing to String");
    }
    out
}

pub fn format_stmt(s: &Stmt) -> String {
    s.kind.to_string()
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Bare identifier when legal, quoted string otherwise.
fn name(s: &str) -> String {
    if is_identifier(s) {
        s.to_owned()
    } else {
        quote(s)
    }
}

impl Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.table, name(&self.column))
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ ", name(&self.response))?;
        let preds: Vec<String> = self.predictors.iter().map(|p| name(p)).collect();
        f.write_str(&preds.join(" + "))
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(v) => write!(f, "{v}"),
            Expr::Str(s) => f.write_str(&quote(s)),
            Expr::Ident(s) => f.write_str(s),
            Expr::Column(c) => write!(f, "{c}"),
            Expr::Call { name, args } => {
                let args: Vec<String> = args.iter().map(ToString::to_string).collect();
                write!(f, "{name}({})", args.join(", "))
            }
            Expr::Formula(fm) => write!(f, "{fm}"),
        }
    }
}

impl CiSpec {
    fn head(&self) -> String {
        format!(
            "diff_means({} by {}) level {}",
            self.response, self.group, self.level
        )
    }

    fn tail(&self) -> String {
        self.label
            .as_ref()
            .map(|l| format!(" label {}", quote(l)))
            .unwrap_or_default()
    }
}

impl Display for StmtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Load { name, path } => write!(f, "load {name} = csv({})", quote(path)),
            StmtKind::Let { name, expr } => write!(f, "let {name} = {expr}"),
            StmtKind::Print(e) => write!(f, "print {e}"),
            StmtKind::SetMissing { column, sentinel } => {
                write!(f, "set_missing {column} where == {sentinel}")
            }
            StmtKind::Ci(spec) => write!(f, "ci {}{}", spec.head(), spec.tail()),
            StmtKind::CiBonf(spec, k) => write!(f, "ci_bonf {} k {k}{}", spec.head(), spec.tail()),
            StmtKind::Model {
                name,
                formula,
                data,
            } => write!(f, "model {name} = lm({formula}) on {data}"),
            StmtKind::Comment(text) => write!(f, "#{text}"),
            StmtKind::Blank => Ok(()),
        }
    }
}

impl Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}
