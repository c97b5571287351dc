use super::{mean_sd, two_sided_p, StatsError};
use crate::num::{compensated_sum, Real};
use crate::table::MaskedVec;

pub const INTERCEPT_NAME: &str = "(Intercept)";

/// Ordinary least squares fit with classical standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit<T> {
    pub coef_names: Vec<String>,
    pub est: Vec<T>,
    pub se: Vec<T>,
    pub t_stats: Vec<T>,
    /// Unadjusted two-sided p-values.
    pub p_values: Vec<T>,
    pub df_resid: T,
    /// Complete rows used in the fit.
    pub n: usize,
    /// Rows dropped because a value was missing.
    pub n_dropped: usize,
    /// Number of coefficients, intercept included.
    pub p: usize,
    /// Sample sd of each predictor; 0 for the intercept, NaN when unknown.
    pub sd_x: Vec<T>,
    /// Sample sd of the response; NaN when unknown.
    pub sd_y: T,
    pub residual_se: T,
}

impl<T: Real> OlsFit<T> {
    /// Rebuilds a fit from a printed coefficient summary (estimates and
    /// standard errors). Predictor/response scales are unknown unless given.
    pub fn from_summary(
        coef_names: Vec<String>,
        est: Vec<T>,
        se: Vec<T>,
        df_resid: T,
        scales: Option<(Vec<T>, T)>,
    ) -> Result<Self, StatsError> {
        let p = est.len();
        if se.len() != p || coef_names.len() != p || p == 0 {
            return Err(StatsError::Shape(
                "names, estimates and standard errors must have equal nonzero length".into(),
            ));
        }
        if df_resid.is_nan() || df_resid <= T::zero() {
            return Err(StatsError::Domain(
                "residual degrees of freedom must be positive".into(),
            ));
        }
        let (sd_x, sd_y) = match scales {
            Some((sx, sy)) if sx.len() == p => (sx, sy),
            Some(_) => {
                return Err(StatsError::Shape(
                    "one predictor sd per coefficient required".into(),
                ))
            }
            None => (vec![T::nan(); p], T::nan()),
        };
        let (t_stats, p_values) = inference(&est, &se, df_resid)?;
        let n = (df_resid + T::from_count(p))
            .round()
            .to_usize()
            .unwrap_or(0);
        Ok(Self {
            coef_names,
            est,
            se,
            t_stats,
            p_values,
            df_resid,
            n,
            n_dropped: 0,
            p,
            sd_x,
            sd_y,
            residual_se: T::nan(),
        })
    }

    pub fn has_intercept(&self) -> bool {
        self.coef_names.first().map(String::as_str) == Some(INTERCEPT_NAME)
    }

    pub fn is_intercept(&self, i: usize) -> bool {
        i == 0 && self.has_intercept()
    }
}

fn inference<T: Real>(est: &[T], se: &[T], df: T) -> Result<(Vec<T>, Vec<T>), StatsError> {
    let mut t_stats = Vec::with_capacity(est.len());
    let mut p_values = Vec::with_capacity(est.len());
    for (&b, &s) in est.iter().zip(se) {
        let t = b / s;
        let p = if t.is_nan() {
            T::one()
        } else {
            two_sided_p(t, df)?
        };
        t_stats.push(t);
        p_values.push(p);
    }
    Ok((t_stats, p_values))
}

/// Least squares of `y` on the named predictor columns.
///
/// Rows with any missing value are dropped first (complete-case analysis).
/// Solved through a Householder QR factorization; a column whose diagonal
/// in R collapses relative to its norm is reported as collinear.
pub fn ols_fit<T: Real>(
    y: &MaskedVec<T>,
    predictors: &[(&str, &MaskedVec<T>)],
    intercept: bool,
) -> Result<OlsFit<T>, StatsError> {
    let nrow = y.len();
    if let Some((name, _)) = predictors.iter().find(|(_, c)| c.len() != nrow) {
        return Err(StatsError::Shape(format!(
            "predictor {name:?} length differs from response"
        )));
    }
    let rows: Vec<usize> = (0..nrow)
        .filter(|&i| !y.is_missing(i) && predictors.iter().all(|(_, c)| !c.is_missing(i)))
        .collect();
    let n = rows.len();
    let p = predictors.len() + usize::from(intercept);
    if p == 0 {
        return Err(StatsError::Shape("model has no coefficients".into()));
    }
    if n <= p {
        return Err(StatsError::NotEnoughRows { n, p });
    }

    let mut names = Vec::with_capacity(p);
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(p);
    if intercept {
        names.push(INTERCEPT_NAME.to_owned());
        cols.push(vec![T::one(); n]);
    }
    for (name, c) in predictors {
        names.push((*name).to_owned());
        cols.push(
            rows.iter()
                .map(|&i| c.get(i).expect("complete row"))
                .collect(),
        );
    }
    let yv: Vec<T> = rows
        .iter()
        .map(|&i| y.get(i).expect("complete row"))
        .collect();

    let qr = householder_qr(&cols, &names)?;
    let beta = qr.solve(&yv);
    let resid: Vec<T> = (0..n)
        .map(|i| yv[i] - compensated_sum(cols.iter().zip(&beta).map(|(c, &b)| c[i] * b)))
        .collect();
    let df_resid = T::from_count(n - p);
    let sigma2 = compensated_sum(resid.iter().map(|&r| r * r)) / df_resid;
    let rinv_diag = qr.inverse_gram_diagonal();
    let se: Vec<T> = rinv_diag.iter().map(|&d| (sigma2 * d).sqrt()).collect();
    let (t_stats, p_values) = inference(&beta, &se, df_resid)?;

    let sd_of = |v: &[T]| {
        mean_sd(&MaskedVec::from_values(v.to_vec()))
            .ok()
            .and_then(|m| m.sd)
            .unwrap_or_else(T::zero)
    };
    let sd_x = names
        .iter()
        .zip(&cols)
        .map(|(name, c)| {
            if name == INTERCEPT_NAME && intercept {
                T::zero()
            } else {
                sd_of(c)
            }
        })
        .collect();

    Ok(OlsFit {
        coef_names: names,
        est: beta,
        se,
        t_stats,
        p_values,
        df_resid,
        n,
        n_dropped: nrow - n,
        p,
        sd_x,
        sd_y: sd_of(&yv),
        residual_se: sigma2.sqrt(),
    })
}

/// Compact Householder QR of an n×p column-major matrix.
struct Qr<T> {
    /// Householder vectors below the diagonal, R on and above it (column-major).
    a: Vec<Vec<T>>,
    r_diag: Vec<T>,
}

#[allow(clippy::needless_range_loop)]
fn householder_qr<T: Real>(cols: &[Vec<T>], names: &[String]) -> Result<Qr<T>, StatsError> {
    let p = cols.len();
    let n = cols[0].len();
    let mut a = cols.to_vec();
    let mut r_diag = vec![T::zero(); p];
    let tol = T::epsilon().sqrt() * T::lit(1e-2);
    for j in 0..p {
        let col_norm = norm(&cols[j]);
        let norm_j = norm(&a[j][j..]);
        if col_norm == T::zero() || norm_j <= tol * col_norm {
            return Err(StatsError::RankDeficient(names[j].clone()));
        }
        let alpha = if a[j][j] > T::zero() { -norm_j } else { norm_j };
        // v = x − alpha·e1 overwrites the column in place
        a[j][j] = a[j][j] - alpha;
        let vnorm2 = compensated_sum(a[j][j..].iter().map(|&v| v * v));
        for k in (j + 1)..p {
            let dot = compensated_sum((j..n).map(|i| a[j][i] * a[k][i]));
            let f = T::lit(2.0) * dot / vnorm2;
            for i in j..n {
                let vi = a[j][i];
                a[k][i] = a[k][i] - f * vi;
            }
        }
        r_diag[j] = alpha;
    }
    Ok(Qr { a, r_diag })
}

fn norm<T: Real>(v: &[T]) -> T {
    let scale = v.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    scale * compensated_sum(v.iter().map(|&x| (x / scale) * (x / scale))).sqrt()
}

impl<T: Real> Qr<T> {
    fn r(&self, i: usize, j: usize) -> T {
        if i == j {
            self.r_diag[j]
        } else {
            self.a[j][i]
        }
    }

    fn solve(&self, y: &[T]) -> Vec<T> {
        let p = self.r_diag.len();
        let n = y.len();
        let mut qty = y.to_vec();
        for j in 0..p {
            let v = &self.a[j];
            let vnorm2 = compensated_sum(v[j..].iter().map(|&x| x * x));
            let dot = compensated_sum((j..n).map(|i| v[i] * qty[i]));
            let f = T::lit(2.0) * dot / vnorm2;
            for i in j..n {
                qty[i] = qty[i] - f * v[i];
            }
        }
        let mut beta = vec![T::zero(); p];
        for i in (0..p).rev() {
            let s = compensated_sum(((i + 1)..p).map(|k| self.r(i, k) * beta[k]));
            beta[i] = (qty[i] - s) / self.r(i, i);
        }
        beta
    }

    /// diag((RᵀR)⁻¹) = row sums of squares of R⁻¹.
    #[allow(clippy::needless_range_loop)]
    fn inverse_gram_diagonal(&self) -> Vec<T> {
        let p = self.r_diag.len();
        let mut rinv = vec![vec![T::zero(); p]; p];
        for col in 0..p {
            for i in (0..=col).rev() {
                let rhs = if i == col { T::one() } else { T::zero() };
                let s = compensated_sum(((i + 1)..=col).map(|k| self.r(i, k) * rinv[k][col]));
                rinv[i][col] = (rhs - s) / self.r(i, i);
            }
        }
        rinv.iter()
            .map(|row| compensated_sum(row.iter().map(|&x| x * x)))
            .collect()
    }
}
