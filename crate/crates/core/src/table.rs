//! Columnar numeric tables with explicit missingness.

use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::num::Real;

/// A numeric vector with a parallel missing-value mask.
///
/// The stored value of a missing cell is never read.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MaskedVec<T> {
    values: Vec<T>,
    missing: Vec<bool>,
}

impl<T: Real> MaskedVec<T> {
    /// A vector with no missing cells.
    pub fn from_values(values: Vec<T>) -> Self {
        let missing = vec![false; values.len()];
        Self { values, missing }
    }

    /// `None` entries become missing cells.
    pub fn from_options<I: IntoIterator<Item = Option<T>>>(cells: I) -> Self {
        let mut values = Vec::new();
        let mut missing = Vec::new();
        for cell in cells {
            missing.push(cell.is_none());
            values.push(cell.unwrap_or_else(T::zero));
        }
        Self { values, missing }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<T> {
        if self.missing[i] {
            None
        } else {
            Some(self.values[i])
        }
    }

    pub fn is_missing(&self, i: usize) -> bool {
        self.missing[i]
    }

    /// Iterates over all cells, `None` for missing ones.
    pub fn iter(&self) -> impl Iterator<Item = Option<T>> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Iterates over the non-missing values in order.
    pub fn present(&self) -> impl Iterator<Item = T> + '_ {
        self.values
            .iter()
            .zip(&self.missing)
            .filter(|(_, &m)| !m)
            .map(|(&v, _)| v)
    }

    pub fn count_present(&self) -> usize {
        self.missing.iter().filter(|&&m| !m).count()
    }

    pub fn count_missing(&self) -> usize {
        self.len() - self.count_present()
    }

    pub fn set_missing(&mut self, i: usize) {
        self.missing[i] = true;
    }

    /// Marks every present cell equal to `sentinel` as missing; returns how many changed.
    pub fn mask_value(&mut self, sentinel: T) -> usize {
        let mut changed = 0;
        for (v, m) in self.values.iter().zip(self.missing.iter_mut()) {
            if !*m && *v == sentinel {
                *m = true;
                changed += 1;
            }
        }
        changed
    }
}

impl<T: Real> FromIterator<Option<T>> for MaskedVec<T> {
    fn from_iter<I: IntoIterator<Item = Option<T>>>(iter: I) -> Self {
        Self::from_options(iter)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: MaskedVec<f64>,
}

/// A named table of equal-length numeric columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    columns: Vec<Column>,
    nrow: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum TableError {
    #[error("column {column:?} has {got} rows, expected {expected}")]
    RaggedColumn {
        column: String,
        got: usize,
        expected: usize,
    },
    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<Column>) -> Result<Self, TableError> {
        let nrow = columns.first().map_or(0, |c| c.data.len());
        for (i, c) in columns.iter().enumerate() {
            if c.data.len() != nrow {
                return Err(TableError::RaggedColumn {
                    column: c.name.clone(),
                    got: c.data.len(),
                    expected: nrow,
                });
            }
            if columns[..i].iter().any(|o| o.name == c.name) {
                return Err(TableError::DuplicateColumn(c.name.clone()));
            }
        }
        Ok(Self {
            name: name.into(),
            columns,
            nrow,
        })
    }

    pub fn nrow(&self) -> usize {
        self.nrow
    }

    pub fn ncol(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&MaskedVec<f64>> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.data)
    }

    pub fn column_mut(&mut self, name: &str) -> Option<&mut MaskedVec<f64>> {
        self.columns
            .iter_mut()
            .find(|c| c.name == name)
            .map(|c| &mut c.data)
    }
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed CSV: {message}")]
    Malformed { path: PathBuf, message: String },
    #[error("{path}: missing header row")]
    NoHeader { path: PathBuf },
    #[error("{path}: row {row}, column {column:?}: non-numeric value {value:?}")]
    NonNumeric {
        path: PathBuf,
        row: usize,
        column: String,
        value: String,
    },
    #[error("{path}: {source}")]
    Shape {
        path: PathBuf,
        #[source]
        source: TableError,
    },
}

/// Token that marks a missing cell. Case-sensitive.
pub const MISSING_TOKEN: &str = "NA";

/// Reads a headed numeric CSV file into a table named `name`.
///
/// Every cell must parse as a decimal number or be exactly `NA`. Rows are
/// numbered from 1 for the first data row.
pub fn load_csv(path: &Path, name: &str) -> Result<Table, CsvError> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| CsvError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    parse_csv(&text, path, name)
}

pub(crate) fn parse_csv(text: &str, path: &Path, name: &str) -> Result<Table, CsvError> {
    let malformed = |e: csv::Error| CsvError::Malformed {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(malformed)?
        .iter()
        .map(str::to_owned)
        .collect();
    if headers.is_empty() || headers.iter().all(String::is_empty) {
        return Err(CsvError::NoHeader {
            path: path.to_path_buf(),
        });
    }
    let mut cells: Vec<Vec<Option<f64>>> = vec![Vec::new(); headers.len()];
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(malformed)?;
        for (j, field) in record.iter().enumerate() {
            let cell = if field == MISSING_TOKEN {
                None
            } else {
                match field.parse::<f64>() {
                    Ok(v) if v.is_finite() => Some(v),
                    _ => {
                        return Err(CsvError::NonNumeric {
                            path: path.to_path_buf(),
                            row: i + 1,
                            column: headers[j].clone(),
                            value: field.to_owned(),
                        })
                    }
                }
            };
            cells[j].push(cell);
        }
    }
    let columns = headers
        .into_iter()
        .zip(cells)
        .map(|(name, col)| Column {
            name,
            data: MaskedVec::from_options(col),
        })
        .collect();
    Table::new(name, columns).map_err(|source| CsvError::Shape {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Table, CsvError> {
        parse_csv(text, Path::new("t.csv"), "t")
    }

    #[test]
    fn small_table_with_missing() {
        let t = parse("a,b\n1,2\n3,NA\n").unwrap();
        assert_eq!(t.nrow(), 2);
        assert_eq!(t.ncol(), 2);
        assert_eq!(t.column("b").unwrap().count_missing(), 1);
        assert_eq!(t.column("a").unwrap().get(1), Some(3.0));
    }

    #[test]
    fn text_cell_names_row_and_column() {
        let err = parse("a,b\n1,2\n3,abc\n").unwrap_err();
        match err {
            CsvError::NonNumeric {
                row, column, value, ..
            } => {
                assert_eq!(row, 2);
                assert_eq!(column, "b");
                assert_eq!(value, "abc");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn na_is_case_sensitive() {
        assert!(parse("a\nna\n").is_err());
        assert!(parse("a\n\n").is_ok());
    }

    #[test]
    fn empty_field_is_not_missing() {
        assert!(matches!(
            parse("a,b\n1,\n"),
            Err(CsvError::NonNumeric { .. })
        ));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(matches!(
            parse("a,b\n1,2\n3\n"),
            Err(CsvError::Malformed { .. })
        ));
    }

    #[test]
    fn header_only_gives_zero_rows() {
        let t = parse("x,y\n").unwrap();
        assert_eq!(t.nrow(), 0);
        assert_eq!(t.ncol(), 2);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_csv(Path::new("/definitely/not/here.csv"), "t").unwrap_err();
        assert!(matches!(err, CsvError::Io { .. }));
    }

    #[test]
    fn mask_value_counts_changes() {
        let mut v = MaskedVec::from_options([Some(0.0), Some(5.0), None, Some(0.0)]);
        assert_eq!(v.mask_value(0.0), 2);
        assert_eq!(v.count_missing(), 3);
        assert_eq!(v.mask_value(0.0), 0);
        assert_eq!(v.present().collect::<Vec<_>>(), vec![5.0]);
    }

    #[test]
    fn duplicate_columns_rejected() {
        let c = Column {
            name: "a".into(),
            data: MaskedVec::from_values(vec![1.0]),
        };
        assert!(Table::new("t", vec![c.clone(), c]).is_err());
    }
}
