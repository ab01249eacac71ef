//! Statistics derived from the characteristic matrix.
//!
//! `mic` takes the best score over all shapes; `gmic` replaces that maximum
//! by a generalized (power) mean of the running-maximum matrix, trading some
//! of MIC's equitability for power at small p. `minic` is the most
//! conservative member of the family and `mcn` reports how complex a grid is
//! needed to get within a factor of the maximum.

use crate::charmat::CharacteristicMatrix;
use crate::error::{Error, Result};

/// Running-maximum form of a characteristic matrix.
///
/// Entry (i, j) holds the best score among all shapes of area at most
/// `i * j`, so entries are nondecreasing in the area and every generalized
/// mean of them is monotone in p.
#[derive(Clone, Debug, PartialEq)]
pub struct MaximalCharacteristicMatrix {
    inner: CharacteristicMatrix,
}

/// Replaces every entry by the maximum over all shapes of no larger area.
pub fn maximal_char_matrix(matrix: &CharacteristicMatrix) -> MaximalCharacteristicMatrix {
    let shapes = matrix.shapes().to_vec();
    let scores = matrix.scores();
    let mut out = vec![0.0f64; scores.len()];
    let mut running = 0.0f64;
    let mut start = 0usize;
    while start < shapes.len() {
        let area = shapes[start].0 * shapes[start].1;
        let mut end = start;
        while end < shapes.len() && shapes[end].0 * shapes[end].1 == area {
            end += 1;
        }
        for &s in &scores[start..end] {
            if s > running {
                running = s;
            }
        }
        for slot in &mut out[start..end] {
            *slot = running;
        }
        start = end;
    }
    MaximalCharacteristicMatrix {
        inner: CharacteristicMatrix::from_parts(matrix.n(), matrix.bound(), shapes, out),
    }
}

impl MaximalCharacteristicMatrix {
    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn bound(&self) -> usize {
        self.inner.bound()
    }

    pub fn num_shapes(&self) -> usize {
        self.inner.num_shapes()
    }

    pub fn shapes(&self) -> &[(usize, usize)] {
        self.inner.shapes()
    }

    pub fn scores(&self) -> &[f64] {
        self.inner.scores()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.inner.get(i, j)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.inner.entries()
    }
}

/// Exponent of the generalized mean, an extended real in [-inf, +inf].
///
/// NaN is rejected at construction. `p = +inf` recovers the maximum (MIC),
/// `p = -inf` the minimum (MinIC), `p = 0` the geometric mean.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct GmicP(f64);

impl GmicP {
    pub const NEG_INFINITY: GmicP = GmicP(f64::NEG_INFINITY);
    pub const INFINITY: GmicP = GmicP(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() {
            return Err(Error::InvalidParam {
                name: "p",
                reason: "must not be NaN".into(),
            });
        }
        Ok(Self(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for GmicP {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0 == f64::INFINITY {
            write!(f, "inf")
        } else if self.0 == f64::NEG_INFINITY {
            write!(f, "-inf")
        } else if self.0 == self.0.trunc() && self.0.abs() < 1e15 {
            write!(f, "{}", self.0 as i64)
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

impl std::str::FromStr for GmicP {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let p = match t {
            "inf" | "+inf" => f64::INFINITY,
            "-inf" => f64::NEG_INFINITY,
            _ => t.parse::<f64>().map_err(|_| Error::InvalidParam {
                name: "p",
                reason: format!("cannot parse `{s}` as an exponent"),
            })?,
        };
        GmicP::new(p)
    }
}

/// Generalized mean information coefficient: the p-th power mean of the
/// maximal characteristic matrix.
///
/// `((1/Z) * sum C*_{ij}^p)^(1/p)` over the Z admissible shapes, with the
/// convention that a zero entry forces the result to zero for every p <= 0
/// (the limit value of the power mean). The mean is evaluated with the
/// extreme entry factored out so large |p| cannot overflow.
pub fn gmic(matrix: &MaximalCharacteristicMatrix, p: GmicP) -> f64 {
    let scores = matrix.scores();
    debug_assert!(!scores.is_empty());
    let p = p.value();
    let z = scores.len() as f64;
    if p == f64::INFINITY {
        return scores.iter().cloned().fold(0.0f64, f64::max);
    }
    let min = scores.iter().cloned().fold(f64::INFINITY, f64::min);
    if p == f64::NEG_INFINITY {
        return min;
    }
    let max = scores.iter().cloned().fold(0.0f64, f64::max);
    // the mean lies in [min, max]; clamping strips the last-ulp rounding
    // drift so the ordering against minic and mic is exact
    if p <= 0.0 {
        if min == 0.0 {
            return 0.0;
        }
        if p == 0.0 {
            let mean_log = scores.iter().map(|s| s.log2()).sum::<f64>() / z;
            return mean_log.exp2().clamp(min, max);
        }
        // factor out the minimum: (s/min)^p <= 1 for p < 0
        let mean = scores.iter().map(|s| (s / min).powf(p)).sum::<f64>() / z;
        (min * mean.powf(1.0 / p)).clamp(min, max)
    } else {
        if max == 0.0 {
            return 0.0;
        }
        let mean = scores.iter().map(|s| (s / max).powf(p)).sum::<f64>() / z;
        (max * mean.powf(1.0 / p)).clamp(min, max)
    }
}

/// The maximal information coefficient: best score over all shapes.
/// Identical to `gmic` at `p = +inf`.
pub fn mic(matrix: &CharacteristicMatrix) -> f64 {
    matrix.scores().iter().cloned().fold(0.0f64, f64::max)
}

/// The minimum information coefficient: the 2 x 2 entry of the maximal
/// matrix, which is also its smallest entry. Identical to `gmic` at
/// `p = -inf`.
pub fn minic(matrix: &MaximalCharacteristicMatrix) -> f64 {
    matrix.get(2, 2).expect("2 x 2 shape always admissible")
}

/// Minimum cell number: `log2(i * j)` of the coarsest grid whose score is
/// within a factor `1 - delta` of the maximum.
pub fn mcn(matrix: &CharacteristicMatrix, delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) || delta.is_nan() {
        return Err(Error::InvalidParam {
            name: "delta",
            reason: format!("must be in [0, 1], got {delta}"),
        });
    }
    let threshold = (1.0 - delta) * mic(matrix);
    let best_area = matrix
        .entries()
        .filter(|&(_, s)| s >= threshold)
        .map(|((i, j), _)| i * j)
        .min()
        .expect("threshold is attained by the argmax entry");
    Ok((best_area as f64).log2())
}

/// Default tolerance for [`mcn`].
pub const MCN_DEFAULT_DELTA: f64 = 0.05;
