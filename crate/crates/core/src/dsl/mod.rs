//! RVL, the line-oriented analysis script language.
//!
//! Statements (one per line):
//!
//! ```text
//! load NAME = csv("path")
//! let NAME = EXPR
//! print EXPR
//! set_missing TABLE.COL where == NUMBER
//! ci diff_means(TABLE.COL by TABLE.GROUP) level P [label "text"]
//! ci_bonf diff_means(TABLE.COL by TABLE.GROUP) level P k K [label "text"]
//! model NAME = lm(RESPONSE ~ PRED + ...) on TABLE
//! # comment
//! ```

mod ast;
mod format;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

pub use ast::{CiSpec, ColumnRef, Expr, Formula, Script, Span, Stmt, StmtKind};
pub use format::{format_script, format_stmt, quote};
pub use lexer::is_identifier;
pub use parser::{parse_expr, parse_line, parse_script};

/// First syntax error in a script. Columns are 1-based characters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: expected ", self.line, self.column)?;
        match self.expected.as_slice() {
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}
