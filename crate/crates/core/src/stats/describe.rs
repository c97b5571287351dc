use super::StatsError;
use crate::num::{compensated_sum, Real};
use crate::table::{MaskedVec, Table};

/// Mean, sample standard deviation and non-missing count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSd<T> {
    pub mean: T,
    /// `None` when fewer than two values are present.
    pub sd: Option<T>,
    pub n: usize,
}

/// Missing-aware mean and sample sd (divisor n − 1).
pub fn mean_sd<T: Real>(v: &MaskedVec<T>) -> Result<MeanSd<T>, StatsError> {
    let n = v.count_present();
    if n == 0 {
        return Err(StatsError::AllMissing);
    }
    let nf = T::from_count(n);
    let rough = compensated_sum(v.present()) / nf;
    // second pass removes the rounding left in `rough`
    let mean = rough + compensated_sum(v.present().map(|x| x - rough)) / nf;
    let sd = (n >= 2).then(|| {
        let ss = compensated_sum(v.present().map(|x| (x - mean) * (x - mean)));
        (ss / T::from_count(n - 1)).sqrt()
    });
    Ok(MeanSd { mean, sd, n })
}

/// Median of the present values.
pub fn median<T: Real>(v: &MaskedVec<T>) -> Result<T, StatsError> {
    let mut xs: Vec<T> = v.present().collect();
    median_in_place(&mut xs).ok_or(StatsError::AllMissing)
}

fn median_in_place<T: Real>(xs: &mut [T]) -> Option<T> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let mid = xs.len() / 2;
    Some(if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / T::lit(2.0)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeRow {
    pub column: String,
    pub min: f64,
    pub max: f64,
}

/// Per-column (min, max) over non-missing cells, in column order.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeTable {
    pub table: String,
    pub rows: Vec<RangeRow>,
}

impl RangeTable {
    pub fn get(&self, column: &str) -> Option<&RangeRow> {
        self.rows.iter().find(|r| r.column == column)
    }
}

pub fn column_ranges(t: &Table) -> Result<RangeTable, StatsError> {
    let rows = t
        .columns()
        .iter()
        .map(|c| {
            let mut it = c.data.present();
            let first = it
                .next()
                .ok_or_else(|| StatsError::EmptyColumn(c.name.clone()))?;
            let (min, max) = it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x)));
            Ok(RangeRow {
                column: c.name.clone(),
                min,
                max,
            })
        })
        .collect::<Result<_, StatsError>>()?;
    Ok(RangeTable {
        table: t.name.clone(),
        rows,
    })
}

/// MAD consistency factor for normal data.
const MAD_SCALE: f64 = 1.4826;

/// Robust z-scores |v − median| / (1.4826 · MAD). Missing cells stay missing.
pub fn mad_outlier_scores<T: Real>(v: &MaskedVec<T>) -> Result<MaskedVec<T>, StatsError> {
    let n = v.count_present();
    if n < 3 {
        return Err(StatsError::TooFew { needed: 3, got: n });
    }
    let med = median(v)?;
    let mut dev: Vec<T> = v.present().map(|x| (x - med).abs()).collect();
    let mad = median_in_place(&mut dev).expect("n >= 3");
    if mad == T::zero() {
        return Err(StatsError::ZeroSpread);
    }
    let scale = T::lit(MAD_SCALE) * mad;
    Ok(v.iter()
        .map(|c| c.map(|x| (x - med).abs() / scale))
        .collect())
}
