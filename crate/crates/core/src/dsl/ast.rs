/// A parsed script: one statement per physical line.
///
/// Equality is structural: it compares statements and ignores
/// `source_name` and source spans.
#[derive(Debug, Clone, Default)]
pub struct Script {
    pub source_name: String,
    pub lines: Vec<Stmt>,
}

impl PartialEq for Script {
    fn eq(&self, other: &Self) -> bool {
        self.lines == other.lines
    }
}

impl Script {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Statement at 1-based line `n`.
    pub fn line(&self, n: usize) -> Option<&Stmt> {
        n.checked_sub(1).and_then(|i| self.lines.get(i))
    }

    /// Replaces line `n`, or appends when `n == len + 1`. Renumbers nothing
    /// else since statements keep their own `line_no`.
    pub(crate) fn put_line(&mut self, n: usize, mut stmt: Stmt) {
        stmt.line_no = n;
        if n == self.lines.len() + 1 {
            self.lines.push(stmt);
        } else {
            self.lines[n - 1] = stmt;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub offset: usize,
    pub len: usize,
}

#[derive(Debug, Clone)]
pub struct Stmt {
    pub line_no: usize,
    pub kind: StmtKind,
    pub span: Span,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.line_no == other.line_no && self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    /// `load NAME = csv("path")`
    Load {
        name: String,
        path: String,
    },
    /// `let NAME = EXPR`
    Let {
        name: String,
        expr: Expr,
    },
    /// `print EXPR`
    Print(Expr),
    /// `set_missing TABLE.COL where == NUMBER`
    SetMissing {
        column: ColumnRef,
        sentinel: f64,
    },
    /// `ci diff_means(T.C by T.G) level P [label "..."]`
    Ci(CiSpec),
    /// `ci_bonf diff_means(T.C by T.G) level P k K [label "..."]`
    CiBonf(CiSpec, usize),
    /// `model NAME = lm(FORMULA) on TABLE`
    Model {
        name: String,
        formula: Formula,
        data: String,
    },
    /// Text after the leading `#`, trailing whitespace removed.
    Comment(String),
    Blank,
}

impl StmtKind {
    pub fn is_comment_or_blank(&self) -> bool {
        matches!(self, StmtKind::Comment(_) | StmtKind::Blank)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CiSpec {
    pub response: ColumnRef,
    pub group: ColumnRef,
    pub level: f64,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColumnRef {
    pub table: String,
    pub column: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Formula {
    pub response: String,
    pub predictors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Str(String),
    Ident(String),
    Column(ColumnRef),
    Call { name: String, args: Vec<Expr> },
    Formula(Formula),
}
