//! Pinned text formats. Everything a session prints goes through here so
//! replayed logs stay byte-identical.

use super::value::{CiRecord, ModelRecord, Value};
use crate::audit::render_audit_table;
use crate::stats::RangeTable;
use crate::table::{MaskedVec, Table};

const SIG_DIGITS: i32 = 10;

/// Ten significant digits, trailing zeros dropped. Plain notation for
/// decimal exponents in [-5, 15), scientific (`1.5e-07`) otherwise.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_owned();
    }
    if x.is_infinite() {
        return if x > 0.0 { "Inf" } else { "-Inf" }.to_owned();
    }
    if x == 0.0 {
        return "0".to_owned();
    }
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        // place the decimal point inside the already-rounded digits
        let (sign, mantissa) = mantissa
            .strip_prefix('-')
            .map_or(("", mantissa), |m| ("-", m));
        let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
        let plain = if exp < 0 {
            format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
        } else {
            let int_len = (exp + 1) as usize;
            if int_len >= digits.len() {
                format!("{digits}{}", "0".repeat(int_len - digits.len()))
            } else {
                format!("{}.{}", &digits[..int_len], &digits[int_len..])
            }
        };
        format!("{sign}{}", trim_fraction(plain))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_fraction(mantissa.to_owned()),
            exp.abs()
        )
    }
}

fn trim_fraction(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

pub(crate) fn render_ci(rec: &CiRecord) -> String {
    let ci = &rec.result;
    let pct = format_number(ci.level_nominal * 100.0);
    let adj = if ci.k_comparisons > 1 {
        format!(" (Bonferroni, k = {})", ci.k_comparisons)
    } else {
        String::new()
    };
    format!(
        "{}: estimate {} ({} {} - {}), {pct}% CI{adj} [{}, {}], df {}, n {}/{}",
        ci.label,
        format_number(ci.estimate),
        rec.group_column,
        format_number(rec.high),
        format_number(rec.low),
        format_number(ci.lower),
        format_number(ci.upper),
        format_number(ci.df),
        ci.n1,
        ci.n2
    )
}

pub(crate) fn render_model(m: &ModelRecord) -> Vec<String> {
    let f = &m.fit;
    let mut out = vec![format!(
        "model {}: lm({}) on {}: n {} ({} dropped), residual df {}",
        m.name,
        m.formula,
        m.data,
        f.n,
        f.n_dropped,
        format_number(f.df_resid)
    )];
    let rows: Vec<(String, Vec<String>)> = (0..f.p)
        .map(|i| {
            let cells = [f.est[i], f.se[i], f.t_stats[i], f.p_values[i]]
                .map(format_number)
                .to_vec();
            (f.coef_names[i].clone(), cells)
        })
        .collect();
    out.extend(aligned(&["estimate", "std.error", "t", "p"], &rows));
    out.push(format!(
        "residual standard error {}",
        format_number(f.residual_se)
    ));
    out
}

pub(crate) fn render_ranges(r: &RangeTable) -> Vec<String> {
    let header: Vec<&str> = r.rows.iter().map(|row| row.column.as_str()).collect();
    let rows = vec![
        (
            "min".to_owned(),
            r.rows.iter().map(|row| format_number(row.min)).collect(),
        ),
        (
            "max".to_owned(),
            r.rows.iter().map(|row| format_number(row.max)).collect(),
        ),
    ];
    aligned(&header, &rows)
}

pub(crate) fn render_vector(v: &MaskedVec<f64>) -> String {
    let cells: Vec<String> = v
        .iter()
        .map(|c| c.map_or_else(|| "NA".to_owned(), format_number))
        .collect();
    format!("[{}] {}", v.len(), cells.join(" "))
        .trim_end()
        .to_owned()
}

pub(crate) fn render_table(t: &Table) -> String {
    let names: Vec<&str> = t.columns().iter().map(|c| c.name.as_str()).collect();
    format!(
        "table {}: {} rows, {} columns ({})",
        t.name,
        t.nrow(),
        t.ncol(),
        names.join(", ")
    )
}

/// Lines for a value; tables are looked up by the caller.
pub(crate) fn render_value(v: &Value, table: Option<&Table>) -> Vec<String> {
    match v {
        Value::Scalar(x) => vec![format_number(*x)],
        Value::Vector(m) => vec![render_vector(m)],
        Value::Text(s) => s.lines().map(str::to_owned).collect(),
        Value::TableRef(name) => match table {
            Some(t) => vec![render_table(t)],
            None => vec![format!("table {name}")],
        },
        Value::Model(m) => render_model(m),
        Value::Ci(c) => vec![render_ci(c)],
        Value::Ranges(r) => render_ranges(r),
        Value::Audit(rows) => render_audit_table(rows)
            .lines()
            .map(str::to_owned)
            .collect(),
    }
}

/// Left-aligned row labels, right-aligned cells, single-space gaps.
fn aligned(header: &[&str], rows: &[(String, Vec<String>)]) -> Vec<String> {
    let label_w = rows
        .iter()
        .map(|(l, _)| l.chars().count())
        .max()
        .unwrap_or(0);
    let widths: Vec<usize> = header
        .iter()
        .enumerate()
        .map(|(j, h)| {
            rows.iter()
                .map(|(_, c)| c[j].chars().count())
                .chain([h.chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |label: &str, cells: &mut dyn Iterator<Item = &str>| {
        let mut s = format!("{label:<label_w$}");
        for (cell, &w) in cells.zip(&widths) {
            s.push(' ');
            s.push_str(&format!("{cell:>w$}"));
        }
        s.trim_end().to_owned()
    };
    let mut out = vec![line("", &mut header.iter().copied())];
    for (label, cells) in rows {
        out.push(line(label, &mut cells.iter().map(String::as_str)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::RangeRow;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(768.0), "768");
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(1.0 / 3.0), "0.3333333333");
        assert_eq!(format_number(-2.0 / 3.0), "-0.6666666667");
        assert_eq!(format_number(123456.789012345), "123456.789");
        assert_eq!(format_number(9.99999999999), "10");
        assert_eq!(format_number(1.5e-7), "1.5e-07");
        assert_eq!(format_number(0.00001234), "0.00001234");
        assert_eq!(format_number(1e15), "1e+15");
        assert_eq!(format_number(123456789012345.0), "123456789000000");
        assert_eq!(format_number(f64::NAN), "NaN");
        assert_eq!(format_number(f64::NEG_INFINITY), "-Inf");
    }

    #[test]
    fn number_format_reparses_close() {
        for &x in &[std::f64::consts::PI, 2.0e-3, -7.25e8, 1.0e-9, 6.02214076e23] {
            let back: f64 = format_number(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-9, "{x}");
        }
    }

    #[test]
    fn range_table_alignment() {
        let r = RangeTable {
            table: "t".into(),
            rows: vec![
                RangeRow {
                    column: "a".into(),
                    min: 0.0,
                    max: 199.0,
                },
                RangeRow {
                    column: "Insul".into(),
                    min: 14.0,
                    max: 846.0,
                },
            ],
        };
        assert_eq!(
            render_ranges(&r),
            vec!["      a Insul", "min   0    14", "max 199   846"]
        );
    }

    #[test]
    fn vector_with_missing() {
        let v = MaskedVec::from_options([Some(1.5), None, Some(-2.0)]);
        assert_eq!(render_vector(&v), "[3] 1.5 NA -2");
    }
}
