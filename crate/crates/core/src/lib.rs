//! Core of the reproducible-analysis workbench: the RVL script language,
//! a replaying interpreter, the statistics kernel, audit rules and the
//! branch store.
//!
//! Numerics are generic over [`num::Real`]; the aliases below fix the
//! scalar type for the common cases.

pub mod audit;
pub mod dsl;
pub mod engine;
pub mod num;
pub mod stats;
pub mod store;
pub mod table;

pub type CiResultF64 = stats::CiResult<f64>;
pub type CiResultF32 = stats::CiResult<f32>;
pub type OlsFitF64 = stats::OlsFit<f64>;
pub type OlsFitF32 = stats::OlsFit<f32>;
pub type CoefAuditRowF64 = audit::CoefAuditRow<f64>;
pub type CoefAuditRowF32 = audit::CoefAuditRow<f32>;
pub type CoefAuditConfigF64 = audit::CoefAuditConfig<f64>;
pub type MaskedVecF64 = table::MaskedVec<f64>;
