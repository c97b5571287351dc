use super::{mean_sd, t_quantile, StatsError};
use crate::num::Real;
use crate::table::MaskedVec;

/// Two-sample confidence interval for a difference of means.
#[derive(Debug, Clone, PartialEq)]
pub struct CiResult<T> {
    pub label: String,
    pub estimate: T,
    pub lower: T,
    pub upper: T,
    pub level_nominal: T,
    /// Bonferroni family size; 1 means unadjusted.
    pub k_comparisons: usize,
    pub n1: usize,
    pub n2: usize,
    /// Welch–Satterthwaite degrees of freedom.
    pub df: T,
    pub se: T,
}

impl<T: Real> CiResult<T> {
    pub fn half_width(&self) -> T {
        (self.upper - self.lower) / T::lit(2.0)
    }

    /// Coverage level actually used for each interval, 1 − (1 − level)/k.
    pub fn per_interval_level(&self) -> T {
        T::one() - (T::one() - self.level_nominal) / T::from_count(self.k_comparisons)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Welch interval for mean(x) − mean(y), Bonferroni-adjusted for `k` intervals.
///
/// The half-width is `t(1 − (1 − level)/(2k), df) · se`, so `k = 1` is the
/// ordinary unadjusted interval.
pub fn welch_ci<T: Real>(
    x: &MaskedVec<T>,
    y: &MaskedVec<T>,
    level: T,
    k: usize,
) -> Result<CiResult<T>, StatsError> {
    if !(level > T::zero() && level < T::one()) {
        return Err(StatsError::Domain(format!(
            "confidence level must lie in (0, 1), got {level}"
        )));
    }
    if k == 0 {
        return Err(StatsError::Domain(
            "number of comparisons must be at least 1".into(),
        ));
    }
    let gx = mean_sd(x).map_err(|_| StatsError::Degenerate("first group is empty".into()))?;
    let gy = mean_sd(y).map_err(|_| StatsError::Degenerate("second group is empty".into()))?;
    let (sx, sy) = match (gx.sd, gy.sd) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(StatsError::Degenerate(format!(
                "each group needs at least 2 values (got {} and {})",
                gx.n, gy.n
            )))
        }
    };
    let vx = sx * sx / T::from_count(gx.n);
    let vy = sy * sy / T::from_count(gy.n);
    let var = vx + vy;
    if var == T::zero() {
        return Err(StatsError::Degenerate(
            "both groups have zero variance".into(),
        ));
    }
    let se = var.sqrt();
    let df = var * var / (vx * vx / T::from_count(gx.n - 1) + vy * vy / T::from_count(gy.n - 1));
    let alpha_each = (T::one() - level) / T::from_count(k);
    let q = t_quantile(T::one() - alpha_each / T::lit(2.0), df)?;
    let estimate = gx.mean - gy.mean;
    let half = q * se;
    Ok(CiResult {
        label: String::new(),
        estimate,
        lower: estimate - half,
        upper: estimate + half,
        level_nominal: level,
        k_comparisons: k,
        n1: gx.n,
        n2: gy.n,
        df,
        se,
    })
}
