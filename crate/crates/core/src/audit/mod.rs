//! Statistical audit: the coefficient table and session-level advisories.

mod coef;
mod rules;

pub use coef::{coef_audit, render_audit_table, CoefAuditConfig, CoefAuditRow, RowFlags};
pub use rules::{audit_session, render_advisories, Advisory, AdvisoryCode, AuditConfig};
