use std::fmt;

use super::coef::{coef_audit, CoefAuditConfig};
use crate::engine::{format_number, SessionState};
use crate::stats::mad_outlier_scores;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdvisoryCode {
    W1SmallEffect,
    W2Underpowered,
    W3MultipleInference,
    W4Outliers,
    W5Overfit,
}

impl AdvisoryCode {
    pub fn as_str(self) -> &'static str {
        match self {
            AdvisoryCode::W1SmallEffect => "W1_SMALL_EFFECT",
            AdvisoryCode::W2Underpowered => "W2_UNDERPOWERED",
            AdvisoryCode::W3MultipleInference => "W3_MULTIPLE_INFERENCE",
            AdvisoryCode::W4Outliers => "W4_OUTLIERS",
            AdvisoryCode::W5Overfit => "W5_OVERFIT",
        }
    }
}

impl fmt::Display for AdvisoryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Advisory {
    pub code: AdvisoryCode,
    pub message: String,
    pub line: usize,
    /// What the advisory is about, e.g. `m: age` or `pima.Insul`.
    pub subject: String,
}

impl fmt::Display for Advisory {
    /// `WARN <code>: <message> (line <n>)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "WARN {}: {} (line {})",
            self.code, self.message, self.line
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditConfig {
    /// Uncorrected intervals needed before W3 fires.
    pub w3_min: usize,
    /// Robust z-score above which a column is flagged (W4).
    pub w4_cutoff: f64,
    /// Minimum observations per coefficient (W5).
    pub w5_min_ratio: f64,
    /// Settings for the per-fit coefficient audit behind W1/W2.
    pub coef: CoefAuditConfig<f64>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            w3_min: 2,
            w4_cutoff: 3.5,
            w5_min_ratio: 10.0,
            coef: CoefAuditConfig::default(),
        }
    }
}

/// Advisories for a session, in a fixed order: per-fit W1/W2, then W3,
/// W4 by table and column, then W5 by fit.
pub fn audit_session(s: &SessionState, cfg: &AuditConfig) -> Vec<Advisory> {
    let mut out = Vec::new();

    for m in s.fits() {
        // A fit that cannot be audited (degenerate df) simply yields nothing.
        let Ok(rows) = coef_audit(&m.fit, &cfg.coef) else {
            continue;
        };
        for r in rows {
            let subject = format!("{}: {}", m.name, r.name);
            if r.flags.small_effect {
                out.push(Advisory {
                    code: AdvisoryCode::W1SmallEffect,
                    message: format!(
                        "`{}` in model {} is significant (adjusted p = {}) but its standardized effect {} is below {}; \
                         check whether an effect this size matters on the response's scale",
                        r.name,
                        m.name,
                        format_number(r.p_adj),
                        format_number(r.standardized_effect),
                        format_number(cfg.coef.practical_threshold)
                    ),
                    line: m.line,
                    subject: subject.clone(),
                });
            }
            if r.flags.underpowered {
                out.push(Advisory {
                    code: AdvisoryCode::W2Underpowered,
                    message: format!(
                        "`{}` in model {} is not significant, yet its interval [{}, {}] reaches past the practical \
                         margin on both sides; absence of evidence here is not evidence of no effect",
                        r.name,
                        m.name,
                        format_number(r.left),
                        format_number(r.right)
                    ),
                    line: m.line,
                    subject,
                });
            }
        }
    }

    let uncorrected = s.inference_count();
    if uncorrected >= cfg.w3_min && s.correction_lines().is_empty() {
        out.push(Advisory {
            code: AdvisoryCode::W3MultipleInference,
            message: format!(
                "{uncorrected} confidence intervals were formed with no multiple-inference correction; \
                 their joint coverage is below the nominal level, consider Bonferroni (`ci_bonf ... k {uncorrected}`)"
            ),
            line: *s.inference_lines().last().expect("count >= w3_min >= 1"),
            subject: "session".to_owned(),
        });
    }

    for (name, entry) in s.tables() {
        for col in entry.table.columns() {
            let Ok(scores) = mad_outlier_scores(&col.data) else {
                continue;
            };
            let Some(worst) = scores.present().reduce(f64::max) else {
                continue;
            };
            if worst > cfg.w4_cutoff {
                out.push(Advisory {
                    code: AdvisoryCode::W4Outliers,
                    message: format!(
                        "column {name}.{} has a value {} robust SDs from its median (cutoff {}); check it, or use \
                         a robust method, e.g. quantile regression",
                        col.name,
                        format_number(worst),
                        format_number(cfg.w4_cutoff)
                    ),
                    line: entry.load_line,
                    subject: format!("{name}.{}", col.name),
                });
            }
        }
    }

    for m in s.fits() {
        let ratio = m.fit.n as f64 / m.fit.p as f64;
        if ratio < cfg.w5_min_ratio {
            out.push(Advisory {
                code: AdvisoryCode::W5Overfit,
                message: format!(
                    "model {} uses {} rows for {} coefficients (n/p = {} < {}); the fit may be overfitted",
                    m.name,
                    m.fit.n,
                    m.fit.p,
                    format_number(ratio),
                    format_number(cfg.w5_min_ratio)
                ),
                line: m.line,
                subject: m.name.clone(),
            });
        }
    }
    out
}

/// One `WARN ...` line per advisory, newline-terminated.
pub fn render_advisories(advisories: &[Advisory]) -> String {
    advisories.iter().map(|a| format!("{a}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_script;
    use std::fmt::Write as _;

    fn session_on(csv: &str, text: &str) -> (tempfile::TempDir, SessionState) {
        let d = tempfile::tempdir().unwrap();
        std::fs::write(d.path().join("d.csv"), csv).unwrap();
        let mut s = SessionState::with_base_dir(parse_script(text, "t").unwrap(), d.path());
        s.continue_run().unwrap();
        (d, s)
    }

    fn codes(s: &SessionState) -> Vec<AdvisoryCode> {
        audit_session(s, &AuditConfig::default())
            .into_iter()
            .map(|a| a.code)
            .collect()
    }

    fn line_csv(n: usize, p: usize) -> String {
        let mut csv = String::from("y");
        for j in 1..p {
            write!(csv, ",x{j}").unwrap();
        }
        csv.push('\n');
        for i in 0..n {
            let fi = i as f64;
            write!(csv, "{}", (fi * 1.3).sin() + fi * 0.1).unwrap();
            for j in 1..p {
                write!(csv, ",{}", (fi * (j as f64) * 0.7).cos() + fi).unwrap();
            }
            csv.push('\n');
        }
        csv
    }

    #[test]
    fn w5_boundary() {
        let (_d, s) = session_on(
            &line_csv(15, 2),
            "load d = csv(\"d.csv\")\nmodel m = lm(y ~ x1) on d",
        );
        let adv = audit_session(&s, &AuditConfig::default());
        let w5: Vec<_> = adv
            .iter()
            .filter(|a| a.code == AdvisoryCode::W5Overfit)
            .collect();
        assert_eq!(w5.len(), 1);
        assert_eq!(w5[0].line, 2);
        assert!(w5[0].message.contains("n/p = 7.5"));

        let (_d, s) = session_on(
            &line_csv(20, 2),
            "load d = csv(\"d.csv\")\nmodel m = lm(y ~ x1) on d",
        );
        assert!(!codes(&s).contains(&AdvisoryCode::W5Overfit));
    }

    #[test]
    fn w3_needs_two_uncorrected() {
        let csv = "y,g\n1,0\n2,0\n3,0\n4,1\n6,1\n5,1\n";
        let one = "load d = csv(\"d.csv\")\nci diff_means(d.y by d.g) level 0.95";
        let (_d, s) = session_on(csv, one);
        assert!(!codes(&s).contains(&AdvisoryCode::W3MultipleInference));
        let two = format!("{one}\nci diff_means(d.y by d.g) level 0.9");
        let (_d, s) = session_on(csv, &two);
        let adv = audit_session(&s, &AuditConfig::default());
        let w3 = adv
            .iter()
            .find(|a| a.code == AdvisoryCode::W3MultipleInference)
            .unwrap();
        assert_eq!(w3.line, 3);
        assert_eq!(w3.to_string().lines().count(), 1);
        assert!(w3
            .to_string()
            .starts_with("WARN W3_MULTIPLE_INFERENCE: 2 confidence intervals"));
        let bonf = format!("{two}\nci_bonf diff_means(d.y by d.g) level 0.95 k 2");
        let (_d, s) = session_on(csv, &bonf);
        assert!(!codes(&s).contains(&AdvisoryCode::W3MultipleInference));
    }

    #[test]
    fn w4_flags_far_point_and_skips_constant_columns() {
        let mut csv = String::from("a,c\n");
        for i in 0..30 {
            let v = if i == 7 { 100.0 } else { (i % 5) as f64 };
            writeln!(csv, "{v},1").unwrap();
        }
        let (_d, s) = session_on(&csv, "# data\nload d = csv(\"d.csv\")");
        let adv = audit_session(&s, &AuditConfig::default());
        assert_eq!(adv.len(), 1);
        assert_eq!(adv[0].code, AdvisoryCode::W4Outliers);
        assert_eq!(adv[0].subject, "d.a");
        assert_eq!(adv[0].line, 2);
        assert!(adv[0]
            .message
            .contains("a robust method, e.g. quantile regression"));
    }

    #[test]
    fn pure_function_of_state() {
        let (_d, s) = session_on(
            &line_csv(12, 3),
            "load d = csv(\"d.csv\")\nmodel m = lm(y ~ x1 + x2) on d",
        );
        let cfg = AuditConfig::default();
        assert_eq!(audit_session(&s, &cfg), audit_session(&s.clone(), &cfg));
    }

    #[test]
    fn render_lines() {
        let a = Advisory {
            code: AdvisoryCode::W5Overfit,
            message: "m".into(),
            line: 4,
            subject: "m".into(),
        };
        assert_eq!(
            render_advisories(&[a.clone(), a]),
            "WARN W5_OVERFIT: m (line 4)\nWARN W5_OVERFIT: m (line 4)\n"
        );
    }
}
