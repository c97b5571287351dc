use crate::num::Real;
use crate::stats::{t_quantile, OlsFit, StatsError};

/// Flags attached to one coefficient row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RowFlags {
    /// Significant after adjustment, but the standardized effect is below
    /// the practical threshold.
    pub small_effect: bool,
    /// Not significant, and the interval reaches past both −δ and +δ.
    pub underpowered: bool,
}

/// One row of the coefficient audit table.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefAuditRow<T> {
    pub name: String,
    pub est: T,
    pub left: T,
    pub right: T,
    pub p_adj: T,
    pub p_unadjusted: T,
    /// |est| · sd_x / sd_y; NaN when scales are unknown.
    pub standardized_effect: T,
    pub flags: RowFlags,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefAuditConfig<T> {
    pub level: T,
    /// Standardized-effect cutoff below which a significant row is flagged.
    pub practical_threshold: T,
    /// Half-width of the "practically zero" band, in units of sd_y. Zero
    /// disables the underpowered check.
    pub practical_delta: T,
    /// Bonferroni family size; defaults to the number of coefficient rows.
    pub comparisons: Option<usize>,
}

impl<T: Real> Default for CoefAuditConfig<T> {
    fn default() -> Self {
        Self {
            level: T::lit(0.95),
            practical_threshold: T::lit(0.05),
            practical_delta: T::zero(),
            comparisons: None,
        }
    }
}

/// Bonferroni-adjusted intervals and p-values for every coefficient of a fit.
///
/// With `k` rows, each interval uses `t(1 − (1 − level)/(2k), df_resid)` and
/// each p-value becomes `min(1, k·p)`.
pub fn coef_audit<T: Real>(
    fit: &OlsFit<T>,
    cfg: &CoefAuditConfig<T>,
) -> Result<Vec<CoefAuditRow<T>>, StatsError> {
    let level = cfg.level;
    if !(level > T::zero() && level < T::one()) {
        return Err(StatsError::Domain(format!(
            "audit level must lie in (0, 1), got {level}"
        )));
    }
    let k = cfg.comparisons.unwrap_or(fit.p);
    if k == 0 {
        return Err(StatsError::Domain(
            "number of comparisons must be at least 1".into(),
        ));
    }
    let kf = T::from_count(k);
    let alpha = T::one() - level;
    let q = t_quantile(T::one() - alpha / (T::lit(2.0) * kf), fit.df_resid)?;
    let delta = cfg.practical_delta * fit.sd_y;

    let rows = (0..fit.p)
        .map(|i| {
            let est = fit.est[i];
            let half = q * fit.se[i];
            let (left, right) = (est - half, est + half);
            let p_unadjusted = fit.p_values[i];
            let p_adj = (kf * p_unadjusted).min(T::one());
            let standardized_effect = est.abs() * fit.sd_x[i] / fit.sd_y;
            let significant = p_adj < alpha;
            let small_effect = significant
                && !fit.is_intercept(i)
                && standardized_effect < cfg.practical_threshold;
            let underpowered =
                !significant && cfg.practical_delta > T::zero() && left < -delta && right > delta;
            CoefAuditRow {
                name: fit.coef_names[i].clone(),
                est,
                left,
                right,
                p_adj,
                p_unadjusted,
                standardized_effect,
                flags: RowFlags {
                    small_effect,
                    underpowered,
                },
            }
        })
        .collect();
    Ok(rows)
}

/// Fixed-width table with columns `est. left right p-val warning`.
///
/// Estimates print with 10 decimals, bounds with 9 and p-values with 8; an
/// `X` in the warning column marks a small-effect row.
pub fn render_audit_table<T: Real>(rows: &[CoefAuditRow<T>]) -> String {
    let header = ["est.", "left", "right", "p-val", "warning"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                fixed(r.est, 10),
                fixed(r.left, 9),
                fixed(r.right, 9),
                fixed(r.p_adj, 8),
                if r.flags.small_effect {
                    "X".to_owned()
                } else {
                    String::new()
                },
            ]
        })
        .collect();
    let name_width = rows
        .iter()
        .map(|r| r.name.chars().count())
        .max()
        .unwrap_or(0);
    let widths: Vec<usize> = (0..header.len())
        .map(|j| {
            cells
                .iter()
                .map(|c| c[j].chars().count())
                .chain([header[j].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();

    let mut out = String::new();
    let mut push_line = |label: &str, fields: &[&str]| {
        let mut line = format!("{label:<name_width$}");
        for (field, &w) in fields.iter().zip(&widths) {
            line.push(' ');
            line.push_str(&format!("{field:>w$}"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    };
    push_line("", &header);
    for (r, c) in rows.iter().zip(&cells) {
        let fields: Vec<&str> = c.iter().map(String::as_str).collect();
        push_line(&r.name, &fields);
    }
    out
}

fn fixed<T: Real>(x: T, decimals: usize) -> String {
    let v = x.to_f64_lossy();
    if v.is_nan() {
        "NaN".to_owned()
    } else {
        // avoid "-0.000…" for values that round to zero
        let s = format!("{v:.decimals$}");
        if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
            s[1..].to_owned()
        } else {
            s
        }
    }
}
