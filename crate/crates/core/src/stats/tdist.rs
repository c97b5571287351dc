//! Student's t distribution: density, CDF and quantile.

use super::special::{inc_beta_pair, ln_beta};
use super::StatsError;
use crate::num::Real;

fn check_df<T: Real>(df: T) -> Result<(), StatsError> {
    if df.is_finite() && df > T::zero() {
        Ok(())
    } else {
        Err(StatsError::Domain(format!(
            "degrees of freedom must be positive, got {df}"
        )))
    }
}

/// Density of the t distribution with `df` degrees of freedom.
pub fn t_pdf<T: Real>(x: T, df: T) -> Result<T, StatsError> {
    check_df(df)?;
    let half = T::lit(0.5);
    let log_norm = -ln_beta(df * half, half) - half * df.ln();
    Ok((log_norm - (df + T::one()) * half * (x * x / df).ln_1p()).exp())
}

/// Lower-tail probability P(T ≤ -|x|) without going through `1 − cdf`.
fn lower_tail<T: Real>(abs_x: T, df: T) -> T {
    let half = T::lit(0.5);
    let t2 = abs_x * abs_x;
    if t2.is_infinite() {
        return T::zero();
    }
    let denom = df + t2;
    let (ix, _) = inc_beta_pair(df * half, half, df / denom, t2 / denom);
    half * ix
}

/// P(T_df ≤ x), via the regularized incomplete beta function.
pub fn t_cdf<T: Real>(x: T, df: T) -> Result<T, StatsError> {
    check_df(df)?;
    if x.is_nan() {
        return Err(StatsError::Domain("t_cdf of NaN".into()));
    }
    if x == T::zero() {
        return Ok(T::lit(0.5));
    }
    let tail = lower_tail(x.abs(), df);
    Ok(if x < T::zero() { tail } else { T::one() - tail })
}

/// Two-sided p-value 2·P(T_df ≥ |t|), computed from the lower tail directly.
pub fn two_sided_p<T: Real>(t: T, df: T) -> Result<T, StatsError> {
    check_df(df)?;
    if t.is_nan() {
        return Err(StatsError::Domain("p-value of NaN statistic".into()));
    }
    if t == T::zero() {
        return Ok(T::one());
    }
    Ok((T::lit(2.0) * lower_tail(t.abs(), df)).min(T::one()))
}

const MAX_QUANTILE_ITER: usize = 400;

/// Inverse CDF of the t distribution.
///
/// Bracketed bisection with Newton refinement on the lower tail; upper-tail
/// probabilities are mapped through the symmetry `q(p) = −q(1 − p)`.
pub fn t_quantile<T: Real>(p: T, df: T) -> Result<T, StatsError> {
    check_df(df)?;
    if !(p > T::zero() && p < T::one()) {
        return Err(StatsError::Domain(format!(
            "probability must lie in (0, 1), got {p}"
        )));
    }
    let half = T::lit(0.5);
    if p == half {
        return Ok(T::zero());
    }
    if p > half {
        return Ok(-lower_quantile(T::one() - p, df));
    }
    Ok(lower_quantile(p, df))
}

/// Solves P(T ≤ x) = p for p < 0.5, so x < 0.
fn lower_quantile<T: Real>(p: T, df: T) -> T {
    let two = T::lit(2.0);
    let mut lo = -T::one();
    let mut hi = T::zero();
    while lower_tail(-lo, df) > p {
        hi = lo;
        lo = lo * two;
        if lo.is_infinite() {
            return lo;
        }
    }
    let mut x = (lo + hi) * T::lit(0.5);
    for _ in 0..MAX_QUANTILE_ITER {
        let f = lower_tail(-x, df) - p;
        if (f / p).abs() <= T::epsilon() {
            return x;
        }
        if f > T::zero() {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= T::lit(4.0) * T::epsilon() * x.abs() {
            return x;
        }
        let density = t_pdf(x, df).unwrap_or_else(|_| T::zero());
        let newton = x - f / density;
        x = if newton.is_finite() && newton >= lo && newton <= hi && newton != x {
            newton
        } else {
            (lo + hi) * T::lit(0.5)
        };
    }
    x
}
