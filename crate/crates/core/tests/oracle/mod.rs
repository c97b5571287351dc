//! Reference implementations for tests. Nothing here calls into rv-core's
//! numerics: densities, integrals and linear algebra are computed from
//! their textbook definitions.
#![allow(dead_code, clippy::too_many_arguments, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// ln Γ(x) for x > 0: shift up past 30, then the Stirling series.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0);
    // Γ(x) = Γ(x + m) / (x (x+1) … (x+m-1)); the product stays far from overflow
    let mut prod = 1.0;
    let mut z = x;
    while z < 30.0 {
        prod *= z;
        z += 1.0;
    }
    let shift = prod.ln();
    let z2 = z * z;
    // Bernoulli terms B_{2k} / (2k(2k-1) z^{2k-1})
    let series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z * z2 * z2)
        - 1.0 / (1680.0 * z * z2 * z2 * z2)
        + 1.0 / (1188.0 * z * z2 * z2 * z2 * z2);
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

/// Student-t density from its definition.
pub fn t_density(t: f64, df: f64) -> f64 {
    let ln_c =
        ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0) - 0.5 * (df * std::f64::consts::PI).ln();
    (ln_c - (df + 1.0) / 2.0 * (t * t / df).ln_1p()).exp()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson quadrature of `f` over [a, b].
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(f, a, b, fa, fm, fb, whole, tol, 60)
}

/// P(T ≤ x) by integrating the density from 0 (unit-width panels keep
/// each adaptive run well-conditioned).
pub fn t_cdf(x: f64, df: f64) -> f64 {
    let f = |t: f64| t_density(t, df);
    let ax = x.abs();
    let mut area = 0.0;
    let mut lo = 0.0;
    while lo < ax {
        let hi = (lo + 1.0).min(ax);
        area += integrate(&f, lo, hi, 1e-15);
        lo = hi;
    }
    if x >= 0.0 {
        0.5 + area
    } else {
        0.5 - area
    }
}

/// Quantile by bisection on the quadrature CDF.
pub fn t_quantile(p: f64, df: f64) -> f64 {
    assert!(p > 0.5 && p < 1.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    while t_cdf(hi, df) < p {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if t_cdf(mid, df) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Textbook Welch interval for mean(x) − mean(y).
pub fn welch(x: &[f64], y: &[f64], level: f64) -> (f64, f64, f64, f64) {
    let stats = |v: &[f64]| {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|a| (a - m) * (a - m)).sum::<f64>() / (n - 1.0);
        (n, m, var)
    };
    let (nx, mx, vx) = stats(x);
    let (ny, my, vy) = stats(y);
    let (ax, ay) = (vx / nx, vy / ny);
    let se = (ax + ay).sqrt();
    let df = (ax + ay).powi(2) / (ax * ax / (nx - 1.0) + ay * ay / (ny - 1.0));
    let q = t_quantile(1.0 - (1.0 - level) / 2.0, df);
    let est = mx - my;
    (est, est - q * se, est + q * se, df)
}

pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Exact mean of f64 values.
pub fn exact_mean(v: &[f64]) -> f64 {
    let sum = v
        .iter()
        .fold(BigRational::zero(), |acc, &x| acc + rational(x));
    (sum / BigRational::from_integer(BigInt::from(v.len())))
        .to_f64()
        .expect("finite")
}

/// OLS solved exactly: normal equations over the rationals.
pub struct ExactOls {
    pub est: Vec<f64>,
    pub se: Vec<f64>,
}

/// `cols` excludes the intercept; one is added when `intercept`.
pub fn exact_ols(y: &[f64], cols: &[Vec<f64>], intercept: bool) -> ExactOls {
    let n = y.len();
    let mut x: Vec<Vec<BigRational>> = Vec::new();
    if intercept {
        x.push(vec![BigRational::one(); n]);
    }
    for c in cols {
        x.push(c.iter().map(|&v| rational(v)).collect());
    }
    let p = x.len();
    let yr: Vec<BigRational> = y.iter().map(|&v| rational(v)).collect();
    let dot = |a: &[BigRational], b: &[BigRational]| {
        a.iter()
            .zip(b)
            .fold(BigRational::zero(), |s, (u, v)| s + u * v)
    };

    // augmented [XᵀX | Xᵀy | I]
    let width = p + 1 + p;
    let mut m: Vec<Vec<BigRational>> = (0..p)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..p).map(|j| dot(&x[i], &x[j])).collect();
            row.push(dot(&x[i], &yr));
            row.extend((0..p).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..p {
        let piv = (col..p).find(|&r| !m[r][col].is_zero()).expect("full rank");
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for k in 0..width {
            m[col][k] = &m[col][k] * &inv;
        }
        for r in 0..p {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in 0..width {
                    let v = &m[col][k] * &f;
                    m[r][k] = &m[r][k] - v;
                }
            }
        }
    }
    let beta: Vec<BigRational> = (0..p).map(|i| m[i][p].clone()).collect();
    let rss = (0..n).fold(BigRational::zero(), |s, i| {
        let fit = (0..p).fold(BigRational::zero(), |a, j| a + &x[j][i] * &beta[j]);
        let r = &yr[i] - fit;
        s + &r * &r
    });
    let sigma2 = rss / BigRational::from_integer(BigInt::from(n - p));
    let se = (0..p)
        .map(|j| {
            let v = &sigma2 * &m[j][p + 1 + j];
            assert!(!v.is_negative());
            v.to_f64().expect("finite").sqrt()
        })
        .collect();
    ExactOls {
        est: beta.iter().map(|b| b.to_f64().expect("finite")).collect(),
        se,
    }
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn ln_gamma_known() {
        assert!((ln_gamma(1.0)).abs() < 1e-13);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
        assert!((ln_gamma(10.0) - 362880f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn cauchy_cdf() {
        for &x in &[-3.0, 0.5, 2.0] {
            let exact = 0.5 + f64::atan(x) / std::f64::consts::PI;
            assert!((t_cdf(x, 1.0) - exact).abs() < 1e-13);
        }
    }
}
