//! Numerics kernel: moments, the t distribution, Welch intervals with
//! Bonferroni adjustment, least squares, column ranges and robust outlier
//! scores. Everything here is generic over [`Real`](crate::num::Real).

mod describe;
mod interval;
mod ols;
pub mod special;
mod tdist;

pub use describe::{
    column_ranges, mad_outlier_scores, mean_sd, median, MeanSd, RangeRow, RangeTable,
};
pub use interval::{welch_ci, CiResult};
pub use ols::{ols_fit, OlsFit};
pub use tdist::{t_cdf, t_pdf, t_quantile, two_sided_p};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no non-missing values")]
    AllMissing,
    #[error("need at least {needed} non-missing values, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("zero spread")]
    ZeroSpread,
    #[error("degenerate groups: {0}")]
    Degenerate(String),
    #[error("column {0:?} has no non-missing values")]
    EmptyColumn(String),
    #[error("predictor {0:?} is collinear with earlier columns")]
    RankDeficient(String),
    #[error("not enough complete rows: n = {n}, p = {p}")]
    NotEnoughRows { n: usize, p: usize },
    #[error("{0}")]
    Shape(String),
}
