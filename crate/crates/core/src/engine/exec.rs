//! Statement execution and expression evaluation. Errors are plain
//! messages; the caller attaches the line number.

use super::render::{format_number, render_ci, render_model, render_value};
use super::value::{CiRecord, ModelRecord, Value};
use super::{SessionState, TableEntry};
use crate::audit::{coef_audit, CoefAuditConfig};
use crate::dsl::{ColumnRef, Expr, Formula, StmtKind};
use crate::stats::{
    column_ranges, mad_outlier_scores, mean_sd, median, ols_fit, t_cdf, t_quantile, welch_ci,
};
use crate::table::{load_csv, CsvError, MaskedVec, Table};

type Exec<T> = Result<T, String>;

impl SessionState {
    pub(super) fn exec(&mut self, line: usize, stmt: &StmtKind) -> Exec<()> {
        match stmt {
            StmtKind::Comment(_) | StmtKind::Blank => Ok(()),
            StmtKind::Load { name, path } => self.exec_load(line, name, path),
            StmtKind::Let { name, expr } => {
                let v = self.eval(line, expr)?;
                self.env.insert(name.clone(), v);
                Ok(())
            }
            StmtKind::Print(expr) => {
                let v = self.eval(line, expr)?;
                let table = match &v {
                    Value::TableRef(t) => self.table(t),
                    _ => None,
                };
                for text in render_value(&v, table) {
                    self.emit(line, text);
                }
                self.results.push((line, v));
                Ok(())
            }
            StmtKind::SetMissing { column, sentinel } => {
                let table = self.table_name(&column.table)?;
                let data = self
                    .tables
                    .get_mut(&table)
                    .and_then(|e| e.table.column_mut(&column.column))
                    .ok_or_else(|| no_column(&table, &column.column))?;
                let n = data.mask_value(*sentinel);
                self.emit(
                    line,
                    format!(
                        "{column}: {n} cells equal to {} set to missing",
                        format_number(*sentinel)
                    ),
                );
                Ok(())
            }
            StmtKind::Ci(spec) => {
                self.exec_ci(
                    line,
                    &spec.response,
                    &spec.group,
                    spec.level,
                    1,
                    spec.label.as_deref(),
                )?;
                self.inference_lines.push(line);
                Ok(())
            }
            StmtKind::CiBonf(spec, k) => {
                self.exec_ci(
                    line,
                    &spec.response,
                    &spec.group,
                    spec.level,
                    *k,
                    spec.label.as_deref(),
                )?;
                self.correction_lines.push(line);
                Ok(())
            }
            StmtKind::Model {
                name,
                formula,
                data,
            } => self.exec_model(line, name, formula, data),
        }
    }

    fn exec_load(&mut self, line: usize, name: &str, path: &str) -> Exec<()> {
        let table = load_csv(&self.base_dir.join(path), name).map_err(|e| csv_message(path, e))?;
        let text = format!(
            "loaded {name} from {}: {} rows, {} columns",
            crate::dsl::quote(path),
            table.nrow(),
            table.ncol()
        );
        self.tables.insert(
            name.to_owned(),
            TableEntry {
                table,
                load_line: line,
            },
        );
        self.env
            .insert(name.to_owned(), Value::TableRef(name.to_owned()));
        self.emit(line, text);
        Ok(())
    }

    fn exec_ci(
        &mut self,
        line: usize,
        response: &ColumnRef,
        group: &ColumnRef,
        level: f64,
        k: usize,
        label: Option<&str>,
    ) -> Exec<()> {
        let y = self.column(response)?;
        let g = self.column(group)?;
        if y.len() != g.len() {
            return Err(format!(
                "{response} has {} rows but {group} has {}",
                y.len(),
                g.len()
            ));
        }
        let mut levels: Vec<f64> = g.present().collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let [low, high] = levels[..] else {
            return Err(format!(
                "group column {group} has {} distinct non-missing values; expected 2",
                levels.len()
            ));
        };
        let pick = |level: f64| -> MaskedVec<f64> {
            (0..y.len())
                .filter(|&i| g.get(i) == Some(level))
                .map(|i| y.get(i))
                .collect()
        };
        let (x_high, x_low) = (pick(high), pick(low));
        let label = label.map_or_else(
            || format!("diff_means({response} by {group})"),
            str::to_owned,
        );
        let result = welch_ci(&x_high, &x_low, level, k)
            .map_err(|e| format!("{label}: {e}"))?
            .with_label(label);
        let rec = CiRecord {
            result,
            group_column: group.column.clone(),
            high,
            low,
        };
        self.emit(line, render_ci(&rec));
        self.results.push((line, Value::Ci(Box::new(rec))));
        Ok(())
    }

    fn exec_model(&mut self, line: usize, name: &str, formula: &Formula, data: &str) -> Exec<()> {
        let table_name = self.table_name(data)?;
        let table = &self.tables[&table_name].table;
        let col = |c: &str| table.column(c).ok_or_else(|| no_column(&table_name, c));
        let y = col(&formula.response)?;
        let predictors = formula
            .predictors
            .iter()
            .map(|p| col(p).map(|c| (p.as_str(), c)))
            .collect::<Exec<Vec<_>>>()?;
        let fit = ols_fit(y, &predictors, true).map_err(|e| format!("model {name}: {e}"))?;
        let rec = ModelRecord {
            name: name.to_owned(),
            line,
            formula: formula.clone(),
            data: data.to_owned(),
            fit,
        };
        for text in render_model(&rec) {
            self.emit(line, text);
        }
        self.fits.push(rec.clone());
        self.env
            .insert(name.to_owned(), Value::Model(Box::new(rec.clone())));
        self.results.push((line, Value::Model(Box::new(rec))));
        Ok(())
    }

    /// Resolves a table name through the environment (so `let` aliases work).
    fn table_name(&self, ident: &str) -> Exec<String> {
        match self.env.get(ident) {
            Some(Value::TableRef(t)) => Ok(t.clone()),
            Some(other) => Err(format!("`{ident}` is a {}, not a table", other.type_name())),
            None => Err(format!("unknown identifier `{ident}`")),
        }
    }

    fn column(&self, c: &ColumnRef) -> Exec<&MaskedVec<f64>> {
        let t = self.table_name(&c.table)?;
        self.tables[&t]
            .table
            .column(&c.column)
            .ok_or_else(|| no_column(&t, &c.column))
    }

    fn eval(&mut self, line: usize, e: &Expr) -> Exec<Value> {
        match e {
            Expr::Number(v) => Ok(Value::Scalar(*v)),
            Expr::Str(s) => Ok(Value::Text(s.clone())),
            Expr::Ident(name) => self
                .env
                .get(name)
                .cloned()
                .ok_or_else(|| format!("unknown identifier `{name}`")),
            Expr::Column(c) => Ok(Value::Vector(self.column(c)?.clone())),
            Expr::Formula(_) => {
                Err("a formula may only appear inside lm(...) in a model statement".into())
            }
            Expr::Call { name, args } => {
                let args = args
                    .iter()
                    .map(|a| self.eval(line, a))
                    .collect::<Exec<Vec<_>>>()?;
                self.call(line, name, &args)
            }
        }
    }

    fn call(&mut self, line: usize, name: &str, args: &[Value]) -> Exec<Value> {
        let arity = |lo: usize, hi: usize| {
            if (lo..=hi).contains(&args.len()) {
                Ok(())
            } else {
                let expected = if lo == hi {
                    lo.to_string()
                } else {
                    format!("{lo} to {hi}")
                };
                Err(format!(
                    "wrong number of arguments to `{name}`: expected {expected}, got {}",
                    args.len()
                ))
            }
        };
        let stats = |e: crate::stats::StatsError| format!("{name}: {e}");
        match name {
            "ranges" => {
                arity(1, 1)?;
                Ok(Value::Ranges(
                    column_ranges(self.table_arg(name, &args[0])?).map_err(stats)?,
                ))
            }
            "nrow" | "ncol" => {
                arity(1, 1)?;
                let t = self.table_arg(name, &args[0])?;
                Ok(Value::Scalar(
                    if name == "nrow" { t.nrow() } else { t.ncol() } as f64,
                ))
            }
            "mean" | "sd" | "median" | "min" | "max" | "n" | "n_missing" => {
                arity(1, 1)?;
                let v = vector_arg(name, &args[0])?;
                let x = match name {
                    "mean" => mean_sd(v).map_err(stats)?.mean,
                    "sd" => mean_sd(v)
                        .map_err(stats)?
                        .sd
                        .ok_or_else(|| format!("{name}: need at least 2 values"))?,
                    "median" => median(v).map_err(stats)?,
                    "min" => v
                        .present()
                        .reduce(f64::min)
                        .ok_or_else(|| format!("{name}: no non-missing values"))?,
                    "max" => v
                        .present()
                        .reduce(f64::max)
                        .ok_or_else(|| format!("{name}: no non-missing values"))?,
                    "n" => v.count_present() as f64,
                    _ => v.count_missing() as f64,
                };
                Ok(Value::Scalar(x))
            }
            "mad_scores" => {
                arity(1, 1)?;
                Ok(Value::Vector(
                    mad_outlier_scores(vector_arg(name, &args[0])?).map_err(stats)?,
                ))
            }
            "coef_audit" => {
                arity(1, 4)?;
                let Value::Model(m) = &args[0] else {
                    return Err(type_error(name, 1, "model", &args[0]));
                };
                let mut cfg = CoefAuditConfig::default();
                for (i, slot) in [
                    &mut cfg.level,
                    &mut cfg.practical_threshold,
                    &mut cfg.practical_delta,
                ]
                .into_iter()
                .enumerate()
                {
                    if let Some(a) = args.get(i + 1) {
                        *slot = scalar_arg(name, i + 2, a)?;
                    }
                }
                let rows = coef_audit(&m.fit, &cfg).map_err(stats)?;
                self.correction_lines.push(line);
                Ok(Value::Audit(rows))
            }
            "t_quantile" | "t_cdf" => {
                arity(2, 2)?;
                let (a, df) = (
                    scalar_arg(name, 1, &args[0])?,
                    scalar_arg(name, 2, &args[1])?,
                );
                let f = if name == "t_cdf" {
                    t_cdf(a, df)
                } else {
                    t_quantile(a, df)
                };
                Ok(Value::Scalar(f.map_err(stats)?))
            }
            _ => Err(format!("unknown function `{name}`")),
        }
    }

    fn table_arg(&self, func: &str, v: &Value) -> Exec<&Table> {
        match v {
            Value::TableRef(t) => self
                .table(t)
                .ok_or_else(|| format!("table `{t}` is not loaded")),
            other => Err(type_error(func, 1, "table", other)),
        }
    }
}

fn vector_arg<'a>(func: &str, v: &'a Value) -> Exec<&'a MaskedVec<f64>> {
    match v {
        Value::Vector(m) => Ok(m),
        other => Err(type_error(func, 1, "column", other)),
    }
}

fn scalar_arg(func: &str, pos: usize, v: &Value) -> Exec<f64> {
    match v {
        Value::Scalar(x) => Ok(*x),
        other => Err(type_error(func, pos, "number", other)),
    }
}

fn type_error(func: &str, pos: usize, expected: &str, got: &Value) -> String {
    format!(
        "argument {pos} of `{func}` must be a {expected}, got a {}",
        got.type_name()
    )
}

fn no_column(table: &str, column: &str) -> String {
    format!("table {table} has no column {column:?}")
}

/// CSV errors named by the script's relative path, so messages do not
/// depend on where the session's directory lives.
fn csv_message(path: &str, e: CsvError) -> String {
    match e {
        CsvError::Io { source, .. } => format!("cannot read {path:?}: {source}"),
        CsvError::Malformed { message, .. } => format!("{path:?}: malformed CSV: {message}"),
        CsvError::NoHeader { .. } => format!("{path:?}: missing header row"),
        CsvError::NonNumeric {
            row, column, value, ..
        } => {
            format!("{path:?}: row {row}, column {column:?}: non-numeric value {value:?}")
        }
        CsvError::Shape { source, .. } => format!("{path:?}: {source}"),
    }
}
