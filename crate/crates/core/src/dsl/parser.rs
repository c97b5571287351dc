//! Recursive-descent parser, one statement per physical line.

use super::ast::{CiSpec, ColumnRef, Expr, Formula, Script, Span, Stmt, StmtKind};
use super::lexer::{tokenize, Spanned, Tok};
use super::ParseError;

const STATEMENT_KEYWORDS: &[&str] = &[
    "load",
    "let",
    "print",
    "set_missing",
    "ci",
    "ci_bonf",
    "model",
    "#",
];

/// Parses a whole script. Comments and blank lines are kept so that
/// statement `k` is always physical line `k`.
pub fn parse_script(text: &str, source_name: &str) -> Result<Script, ParseError> {
    let mut lines = Vec::new();
    let mut offset = 0;
    let body = text.strip_suffix('\n').unwrap_or(text);
    if !text.is_empty() {
        for (i, raw) in body.split('\n').enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            let mut stmt = parse_line(line, i + 1)?;
            stmt.span = Span {
                offset,
                len: line.len(),
            };
            lines.push(stmt);
            offset += raw.len() + 1;
        }
    }
    Ok(Script {
        source_name: source_name.to_owned(),
        lines,
    })
}

/// Parses one line of source as statement number `line_no`.
pub fn parse_line(line: &str, line_no: usize) -> Result<Stmt, ParseError> {
    if let Some(pos) = line.find(['\n', '\r']) {
        return Err(ParseError {
            line: line_no,
            column: line[..pos].chars().count() + 1,
            expected: vec!["end of line".into()],
            found: "line break".into(),
        });
    }
    let trimmed = line.trim_start();
    let kind = if trimmed.trim_end().is_empty() {
        StmtKind::Blank
    } else if let Some(rest) = trimmed.strip_prefix('#') {
        StmtKind::Comment(rest.trim_end().to_owned())
    } else {
        let mut p = Parser {
            toks: tokenize(line, line_no)?,
            pos: 0,
            line: line_no,
        };
        let kind = p.statement()?;
        p.expect_end()?;
        kind
    };
    Ok(Stmt {
        line_no,
        kind,
        span: Span {
            offset: 0,
            len: line.len(),
        },
    })
}

/// Parses a single expression, e.g. a line typed into an interactive prompt.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: tokenize(text, 1)?,
        pos: 0,
        line: 1,
    };
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn col(&self) -> usize {
        self.toks[self.pos].col
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if !matches!(t, Tok::End) {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col(),
            expected: expected.iter().map(|s| (*s).to_owned()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => Err(self.error(&["end of line"])),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(&[&format!("`{kw}`")])),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn string(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Str(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&[what])),
        }
    }

    /// Identifier or non-empty quoted name.
    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(_) => self.ident(what),
            Tok::Str(s) if !s.is_empty() => self.string(what),
            _ => Err(self.error(&[what])),
        }
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek() {
            Tok::Number(v) => {
                let v = *v;
                self.bump();
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.error(&["number"])),
        }
    }

    fn positive_integer(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Tok::Number(v) if *v >= 1.0 && v.fract() == 0.0 && *v <= u32::MAX as f64 => {
                let v = *v as usize;
                self.bump();
                Ok(v)
            }
            _ => Err(self.error(&["positive integer"])),
        }
    }

    fn statement(&mut self) -> Result<StmtKind, ParseError> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.error(STATEMENT_KEYWORDS)),
        };
        match kw.as_str() {
            "load" => {
                self.bump();
                let name = self.ident("table name")?;
                self.expect(Tok::Eq, "`=`")?;
                self.keyword("csv")?;
                self.expect(Tok::LParen, "`(`")?;
                let path = self.string("quoted file path")?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(StmtKind::Load { name, path })
            }
            "let" => {
                self.bump();
                let name = self.ident("variable name")?;
                self.expect(Tok::Eq, "`=`")?;
                let expr = self.expr()?;
                Ok(StmtKind::Let { name, expr })
            }
            "print" => {
                self.bump();
                Ok(StmtKind::Print(self.expr()?))
            }
            "set_missing" => {
                self.bump();
                let column = self.column_ref()?;
                self.keyword("where")?;
                self.expect(Tok::EqEq, "`==`")?;
                let sentinel = self.signed_number()?;
                Ok(StmtKind::SetMissing { column, sentinel })
            }
            "ci" | "ci_bonf" => {
                self.bump();
                self.keyword("diff_means")?;
                self.expect(Tok::LParen, "`(`")?;
                let response = self.column_ref()?;
                self.keyword("by")?;
                let group = self.column_ref()?;
                self.expect(Tok::RParen, "`)`")?;
                self.keyword("level")?;
                let level = self.signed_number()?;
                let k = if kw == "ci_bonf" {
                    self.keyword("k")?;
                    Some(self.positive_integer()?)
                } else {
                    None
                };
                let label = if self.at_keyword("label") {
                    self.bump();
                    Some(self.string("quoted label")?)
                } else {
                    None
                };
                let spec = CiSpec {
                    response,
                    group,
                    level,
                    label,
                };
                Ok(match k {
                    Some(k) => StmtKind::CiBonf(spec, k),
                    None => StmtKind::Ci(spec),
                })
            }
            "model" => {
                self.bump();
                let name = self.ident("model name")?;
                self.expect(Tok::Eq, "`=`")?;
                self.keyword("lm")?;
                self.expect(Tok::LParen, "`(`")?;
                let response = self.name("response name")?;
                let formula = self.formula_rest(response)?;
                self.expect(Tok::RParen, "`)`")?;
                self.keyword("on")?;
                let data = self.ident("table name")?;
                Ok(StmtKind::Model {
                    name,
                    formula,
                    data,
                })
            }
            _ => Err(self.error(STATEMENT_KEYWORDS)),
        }
    }

    fn column_ref(&mut self) -> Result<ColumnRef, ParseError> {
        let table = self.ident("table name")?;
        self.expect(Tok::Dot, "`.`")?;
        let column = self.name("column name")?;
        Ok(ColumnRef { table, column })
    }

    /// `~ name (+ name)*`, after the response has been read.
    fn formula_rest(&mut self, response: String) -> Result<Formula, ParseError> {
        self.expect(Tok::Tilde, "`~`")?;
        let mut predictors = vec![self.name("predictor name")?];
        while *self.peek() == Tok::Plus {
            self.bump();
            predictors.push(self.name("predictor name")?);
        }
        Ok(Formula {
            response,
            predictors,
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let e = self.primary()?;
        if *self.peek() != Tok::Tilde {
            return Ok(e);
        }
        let response = match e {
            Expr::Ident(s) => s,
            Expr::Str(s) if !s.is_empty() => s,
            _ => return Err(self.error(&["end of expression"])),
        };
        Ok(Expr::Formula(self.formula_rest(response)?))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Number(_) | Tok::Minus => Ok(Expr::Number(self.signed_number()?)),
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::Str(s))
            }
            Tok::Ident(name) => {
                self.bump();
                match self.peek() {
                    Tok::LParen => {
                        self.bump();
                        let mut args = Vec::new();
                        if *self.peek() != Tok::RParen {
                            args.push(self.expr()?);
                            while *self.peek() == Tok::Comma {
                                self.bump();
                                args.push(self.expr()?);
                            }
                        }
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::Call { name, args })
                    }
                    Tok::Dot => {
                        self.bump();
                        let column = self.name("column name")?;
                        Ok(Expr::Column(ColumnRef {
                            table: name,
                            column,
                        }))
                    }
                    _ => Ok(Expr::Ident(name)),
                }
            }
            _ => Err(self.error(&["number", "string", "identifier"])),
        }
    }
}
