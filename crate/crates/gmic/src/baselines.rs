//! Reference statistics the grid family is compared against: squared
//! Pearson correlation and the empirical distance correlation.

use crate::error::Result;
use crate::sample::check_finite;
use crate::Error;

fn validate_pair(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            x: xs.len(),
            y: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewPoints {
            n: xs.len(),
            min: 2,
        });
    }
    check_finite(xs, "x")?;
    check_finite(ys, "y")
}

/// Squared Pearson correlation coefficient. Returns 0 when either variable
/// has zero variance.
pub fn pearson_r2(xs: &[f64], ys: &[f64]) -> Result<f64> {
    validate_pair(xs, ys)?;
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(0.0);
    }
    Ok(((sxy * sxy) / (sxx * syy)).min(1.0))
}

/// Pieces of the empirical distance correlation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DcorComponents {
    /// Square root of the empirical distance covariance.
    pub dcov: f64,
    /// Distance standard deviation of x.
    pub dvar_x: f64,
    /// Distance standard deviation of y.
    pub dvar_y: f64,
    /// `dcov / sqrt(dvar_x * dvar_y)`, or 0 when either variance vanishes.
    pub dcor: f64,
}

/// Empirical distance correlation of two univariate samples.
///
/// Pairwise absolute differences are double-centered (row mean and column
/// mean subtracted, grand mean added back) and the products averaged:
/// `dcov^2 = (1/n^2) sum A_kl B_kl`. Row means are precomputed so the n x n
/// matrices never materialize; the accumulation order is fixed so results do
/// not depend on chunking. A slightly negative `dcov^2` from rounding is
/// clamped to zero.
pub fn distance_correlation(xs: &[f64], ys: &[f64]) -> Result<DcorComponents> {
    validate_pair(xs, ys)?;
    let n = xs.len();
    let nf = n as f64;
    let row_means = |vals: &[f64]| -> (Vec<f64>, f64) {
        let mut means = vec![0.0f64; n];
        for k in 0..n {
            let mut s = 0.0;
            for l in 0..n {
                s += (vals[k] - vals[l]).abs();
            }
            means[k] = s / nf;
        }
        let grand = means.iter().sum::<f64>() / nf;
        (means, grand)
    };
    let (ax, gx) = row_means(xs);
    let (ay, gy) = row_means(ys);

    let mut sab = 0.0f64;
    let mut saa = 0.0f64;
    let mut sbb = 0.0f64;
    for k in 0..n {
        for l in 0..n {
            let a = (xs[k] - xs[l]).abs() - ax[k] - ax[l] + gx;
            let b = (ys[k] - ys[l]).abs() - ay[k] - ay[l] + gy;
            sab += a * b;
            saa += a * a;
            sbb += b * b;
        }
    }
    let dcov2 = (sab / (nf * nf)).max(0.0);
    let dcov = dcov2.sqrt();
    let dvar_x = (saa / (nf * nf)).sqrt();
    let dvar_y = (sbb / (nf * nf)).sqrt();
    let dcor = if dvar_x > 0.0 && dvar_y > 0.0 {
        (dcov / (dvar_x * dvar_y).sqrt()).min(1.0)
    } else {
        0.0
    };
    Ok(DcorComponents {
        dcov,
        dvar_x,
        dvar_y,
        dcor,
    })
}
