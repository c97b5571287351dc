use crate::audit::CoefAuditRow;
use crate::dsl::Formula;
use crate::stats::{CiResult, OlsFit, RangeTable};
use crate::table::MaskedVec;

/// Anything an expression can evaluate to or a statement can record.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(f64),
    Vector(MaskedVec<f64>),
    Text(String),
    /// Name of a loaded table; tables themselves live in the session.
    TableRef(String),
    Model(Box<ModelRecord>),
    Ci(Box<CiRecord>),
    Ranges(RangeTable),
    Audit(Vec<CoefAuditRow<f64>>),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Vector(_) => "vector",
            Value::Text(_) => "string",
            Value::TableRef(_) => "table",
            Value::Model(_) => "model",
            Value::Ci(_) => "interval",
            Value::Ranges(_) => "range table",
            Value::Audit(_) => "audit table",
        }
    }
}

/// A fitted model together with the statement that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelRecord {
    pub name: String,
    pub line: usize,
    pub formula: Formula,
    pub data: String,
    pub fit: OlsFit<f64>,
}

/// A difference-of-means interval plus which group was subtracted from which.
#[derive(Debug, Clone, PartialEq)]
pub struct CiRecord {
    pub result: CiResult<f64>,
    pub group_column: String,
    pub high: f64,
    pub low: f64,
}
