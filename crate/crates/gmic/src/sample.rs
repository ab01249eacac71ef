//! Paired samples and the rank transform.
//!
//! Every grid statistic in this crate works on ranks, not raw values, so a
//! strictly monotone transform of either axis leaves all of them unchanged.
//! [`rank_transform`] produces the rank representation once; the grid search
//! then only ever touches integers.

use crate::error::{Error, Result};

/// A paired sample of two real-valued variables.
///
/// Construction validates that both vectors have equal length, contain at
/// least two points and are free of NaN and infinities.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Sample {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
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
        check_finite(&xs, "x")?;
        check_finite(&ys, "y")?;
        Ok(Self { xs, ys })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// Rank representation of this sample. Shorthand for [`rank_transform`].
    pub fn ranked(&self) -> RankedSample {
        rank_transform(self)
    }
}

pub(crate) fn check_finite(values: &[f64], axis: &'static str) -> Result<()> {
    for (index, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite { axis, index });
        }
    }
    Ok(())
}

/// Rank representation of a [`Sample`].
///
/// Ranks on each axis are a bijection onto `0..n`, assigned by a stable
/// ascending sort: ties keep their original input order and occupy
/// consecutive ranks. The tie structure is kept as the list of rank
/// positions where a new tie group starts; those positions are exactly the
/// cut positions a grid may use without splitting a tie group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedSample {
    n: usize,
    x_ranks: Vec<usize>,
    y_ranks: Vec<usize>,
    x_order: Vec<usize>,
    y_order: Vec<usize>,
    x_tie_starts: Vec<usize>,
    y_tie_starts: Vec<usize>,
}

/// Replaces both axes of a sample by their ranks.
pub fn rank_transform(sample: &Sample) -> RankedSample {
    let (x_ranks, x_order, x_tie_starts) = rank_axis(sample.xs());
    let (y_ranks, y_order, y_tie_starts) = rank_axis(sample.ys());
    RankedSample {
        n: sample.len(),
        x_ranks,
        y_ranks,
        x_order,
        y_order,
        x_tie_starts,
        y_tie_starts,
    }
}

fn rank_axis(values: &[f64]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![0usize; n];
    for (rank, &idx) in order.iter().enumerate() {
        ranks[idx] = rank;
    }
    let mut tie_starts = Vec::new();
    for rank in 1..n {
        if values[order[rank]] != values[order[rank - 1]] {
            tie_starts.push(rank);
        }
    }
    (ranks, order, tie_starts)
}

impl RankedSample {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of each point on the x axis, indexed by original position.
    pub fn x_ranks(&self) -> &[usize] {
        &self.x_ranks
    }

    pub fn y_ranks(&self) -> &[usize] {
        &self.y_ranks
    }

    /// Original index of the point holding each x rank.
    pub fn x_order(&self) -> &[usize] {
        &self.x_order
    }

    pub fn y_order(&self) -> &[usize] {
        &self.y_order
    }

    /// Rank positions where a new x tie group starts (excluding 0).
    /// These are the legal column cut positions.
    pub fn x_tie_starts(&self) -> &[usize] {
        &self.x_tie_starts
    }

    /// Rank positions where a new y tie group starts (excluding 0).
    pub fn y_tie_starts(&self) -> &[usize] {
        &self.y_tie_starts
    }

    /// Number of distinct x levels.
    pub fn x_groups(&self) -> usize {
        self.x_tie_starts.len() + 1
    }

    /// Number of distinct y levels.
    pub fn y_groups(&self) -> usize {
        self.y_tie_starts.len() + 1
    }

    /// The same sample with the axes exchanged.
    pub fn swapped(&self) -> RankedSample {
        RankedSample {
            n: self.n,
            x_ranks: self.y_ranks.clone(),
            y_ranks: self.x_ranks.clone(),
            x_order: self.y_order.clone(),
            y_order: self.x_order.clone(),
            x_tie_starts: self.y_tie_starts.clone(),
            y_tie_starts: self.x_tie_starts.clone(),
        }
    }
}
