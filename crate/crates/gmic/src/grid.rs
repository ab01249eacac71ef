//! Grids over rank space, contingency counts and plug-in mutual information.
//!
//! A grid is described entirely by integer cut positions in rank space, so
//! everything downstream is exact given the ranks. Cuts produced here never
//! split a tie group.

use crate::error::{Error, Result};
use crate::sample::RankedSample;

/// Axis selector for operations that work on one margin of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }
}

/// Cut positions of a two-way grid in rank space.
///
/// `col_cuts` hold strictly increasing x-rank thresholds in `1..n`; a point
/// with x rank `r` falls in column `#{cuts <= r}`. Rows mirror this on y.
/// A grid with `k - 1` cuts on an axis therefore has exactly `k` bins, some
/// of which may be empty only if two cuts were chosen adjacent, which the
/// constructor rules out by requiring strict increase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPartition {
    col_cuts: Vec<usize>,
    row_cuts: Vec<usize>,
    n: usize,
}

impl GridPartition {
    pub fn new(col_cuts: Vec<usize>, row_cuts: Vec<usize>, n: usize) -> Result<Self> {
        validate_cuts(&col_cuts, n, "column")?;
        validate_cuts(&row_cuts, n, "row")?;
        Ok(Self {
            col_cuts,
            row_cuts,
            n,
        })
    }

    pub fn col_cuts(&self) -> &[usize] {
        &self.col_cuts
    }

    pub fn row_cuts(&self) -> &[usize] {
        &self.row_cuts
    }

    /// Grid shape as (columns, rows).
    pub fn shape(&self) -> (usize, usize) {
        (self.col_cuts.len() + 1, self.row_cuts.len() + 1)
    }
}

pub(crate) fn validate_cuts(cuts: &[usize], n: usize, which: &'static str) -> Result<()> {
    let mut prev = 0usize;
    for &c in cuts {
        if c <= prev {
            return Err(Error::InvalidCuts {
                reason: format!("{which} cuts must be strictly increasing and nonzero"),
            });
        }
        if c >= n {
            return Err(Error::InvalidCuts {
                reason: format!("{which} cut {c} is out of range for n = {n}"),
            });
        }
        prev = c;
    }
    Ok(())
}

/// Two-way table of point counts, column-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<usize>,
    cols: usize,
    rows: usize,
}

impl ContingencyTable {
    /// Builds a table directly from per-cell counts given column-major.
    pub fn from_counts(counts: Vec<usize>, cols: usize, rows: usize) -> Result<Self> {
        if cols == 0 || rows == 0 || counts.len() != cols * rows {
            return Err(Error::InvalidParam {
                name: "counts",
                reason: format!(
                    "expected {cols} x {rows} = {} cells, got {}",
                    cols * rows,
                    counts.len()
                ),
            });
        }
        Ok(Self { counts, cols, rows })
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn count(&self, col: usize, row: usize) -> usize {
        self.counts[col * self.rows + row]
    }

    pub fn col_totals(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|c| self.counts[c * self.rows..(c + 1) * self.rows].iter().sum())
            .collect()
    }

    pub fn row_totals(&self) -> Vec<usize> {
        let mut totals = vec![0usize; self.rows];
        for c in 0..self.cols {
            for r in 0..self.rows {
                totals[r] += self.count(c, r);
            }
        }
        totals
    }
}

/// Splits units of the given sizes into `k` contiguous bins, closing the
/// current bin as soon as it reaches `remaining points / remaining bins`.
/// Units are never split. A bin also closes early when the units not yet
/// placed are only just enough to seed every bin still empty, so the walk
/// succeeds whenever `sizes.len() >= k`. Returns the unit indices after
/// which each cut falls.
pub(crate) fn greedy_unit_cuts(sizes: &[usize], k: usize) -> Option<Vec<usize>> {
    debug_assert!(k >= 2);
    let groups = sizes.len();
    if groups < k {
        return None;
    }
    let total: usize = sizes.iter().sum();
    let mut cuts = Vec::with_capacity(k - 1);
    let mut remaining_points = total;
    let mut remaining_bins = k;
    let mut in_bin = 0usize;
    for (unit, &size) in sizes.iter().enumerate() {
        if in_bin > 0 && groups - unit == remaining_bins - 1 {
            remaining_points -= in_bin;
            remaining_bins -= 1;
            in_bin = 0;
            cuts.push(unit);
            if cuts.len() == k - 1 {
                return Some(cuts);
            }
        }
        in_bin += size;
        let target = remaining_points as f64 / remaining_bins as f64;
        if in_bin as f64 >= target && unit + 1 < groups {
            remaining_points -= in_bin;
            remaining_bins -= 1;
            in_bin = 0;
            cuts.push(unit + 1);
            if cuts.len() == k - 1 {
                return Some(cuts);
            }
        }
    }
    None
}

/// Splits one axis into `k` bins of near-equal point counts without breaking
/// tie groups. Returns the rank cut positions.
pub fn equipartition_axis(ranked: &RankedSample, axis: Axis, k: usize) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::InvalidParam {
            name: "k",
            reason: format!("need at least 2 bins, got {k}"),
        });
    }
    let tie_starts = match axis {
        Axis::X => ranked.x_tie_starts(),
        Axis::Y => ranked.y_tie_starts(),
    };
    let n = ranked.n();
    let groups = tie_starts.len() + 1;
    let degenerate = || Error::DegenerateAxis {
        axis: axis.name(),
        requested: k,
        groups,
    };
    if groups < k {
        return Err(degenerate());
    }
    // sizes of the tie groups in rank order
    let mut sizes = Vec::with_capacity(groups);
    let mut prev = 0usize;
    for &start in tie_starts {
        sizes.push(start - prev);
        prev = start;
    }
    sizes.push(n - prev);

    let unit_cuts = greedy_unit_cuts(&sizes, k).ok_or_else(degenerate)?;
    // map unit indices back to rank positions
    let boundary = |u: usize| if u == sizes.len() { n } else { rank_of_group(tie_starts, u) };
    Ok(unit_cuts.into_iter().map(boundary).collect())
}

fn rank_of_group(tie_starts: &[usize], group: usize) -> usize {
    // group g starts at rank 0 for g = 0, else tie_starts[g - 1]
    if group == 0 {
        0
    } else {
        tie_starts[group - 1]
    }
}

/// Counts points of a ranked sample in each cell of a grid.
pub fn contingency(ranked: &RankedSample, grid: &GridPartition) -> ContingencyTable {
    let (cols, rows) = grid.shape();
    let mut counts = vec![0usize; cols * rows];
    for i in 0..ranked.n() {
        let c = bin_of(grid.col_cuts(), ranked.x_ranks()[i]);
        let r = bin_of(grid.row_cuts(), ranked.y_ranks()[i]);
        counts[c * rows + r] += 1;
    }
    ContingencyTable { counts, cols, rows }
}

fn bin_of(cuts: &[usize], rank: usize) -> usize {
    cuts.partition_point(|&c| c <= rank)
}

/// Shannon entropy in bits of a count vector, with 0 log 0 = 0.
pub(crate) fn entropy_bits(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / n;
            h -= p * p.log2();
        }
    }
    h
}

/// Plug-in mutual information of a contingency table in bits:
/// `H(columns) + H(rows) - H(joint)`.
pub fn mutual_information(table: &ContingencyTable) -> f64 {
    let total = table.total();
    let h_cols = entropy_bits(&table.col_totals(), total);
    let h_rows = entropy_bits(&table.row_totals(), total);
    let h_joint = entropy_bits(&table.counts, total);
    let mi = h_cols + h_rows - h_joint;
    // plug-in MI is non-negative; clip rounding residue
    mi.max(0.0)
}
