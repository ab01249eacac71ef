//! The characteristic matrix: largest normalized mutual information per grid
//! shape.
//!
//! Entry (i, j) is the maximum plug-in mutual information achievable by an
//! i-column, j-row grid over the ranked sample, divided by `log2(min(i, j))`
//! so that every entry lies in [0, 1]. Shapes range over `i, j >= 2` with
//! `i * j <= B(n)`, where `B(n) = max(4, floor(n^alpha))`.
//!
//! [`approx_char_matrix`] searches grids the way large samples make
//! necessary: one axis is fixed by an equipartition, the other is optimized
//! by a dynamic program over clumps (maximal runs of consecutive points
//! sharing a row). Both orientations are tried and the better result kept,
//! which also makes the matrix symmetric under swapping the axes. The DP
//! yields lower bounds on the exhaustive maximum; [`exact_char_matrix`]
//! computes that maximum by brute force for small inputs and serves as the
//! test oracle.

use crate::error::{Error, Result};
use crate::grid::{
    contingency, equipartition_axis, greedy_unit_cuts, mutual_information, validate_cuts, Axis,
    GridPartition,
};
use crate::sample::RankedSample;
use itertools::Itertools;

/// Tuning parameters of the approximate grid search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MineParams {
    /// Exponent of the grid budget `B(n) = max(4, floor(n^alpha))`.
    /// Must lie in (0, 1].
    pub alpha: f64,
    /// Clump budget multiplier: the axis being optimized is reduced to at
    /// most `clump_factor * i` superclumps before the DP runs. Must be >= 1.
    pub clump_factor: usize,
}

impl Default for MineParams {
    fn default() -> Self {
        Self {
            alpha: 0.6,
            clump_factor: 15,
        }
    }
}

impl MineParams {
    pub fn new(alpha: f64, clump_factor: usize) -> Result<Self> {
        let p = Self {
            alpha,
            clump_factor,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParam {
                name: "alpha",
                reason: format!("must be in (0, 1], got {}", self.alpha),
            });
        }
        if self.clump_factor < 1 {
            return Err(Error::InvalidParam {
                name: "clump_factor",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Grid budget `B(n) = max(4, floor(n^alpha))`.
///
/// The lower clamp keeps the 2 x 2 shape available for any sample size.
pub fn max_grid_bound(n: usize, alpha: f64) -> usize {
    ((n as f64).powf(alpha).floor() as usize).max(4)
}

/// Normalized maximal-information scores indexed by grid shape.
///
/// Shapes are stored sorted by area `i * j` (then by `i`), which both fixes
/// the serialization order and makes the running-maximum construction of the
/// maximal matrix a single scan.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicMatrix {
    n: usize,
    bound: usize,
    shapes: Vec<(usize, usize)>,
    scores: Vec<f64>,
}

impl CharacteristicMatrix {
    /// All shapes (i, j) with `i, j >= 2` and `i * j <= bound`, sorted by
    /// area then by column count.
    pub fn domain(bound: usize) -> Vec<(usize, usize)> {
        let mut shapes = Vec::new();
        for i in 2..=bound / 2 {
            for j in 2..=bound / i {
                shapes.push((i, j));
            }
        }
        shapes.sort_by_key(|&(i, j)| (i * j, i));
        shapes
    }

    pub(crate) fn from_raw_bits(n: usize, bound: usize, shapes: Vec<(usize, usize)>, raw: Vec<f64>) -> Self {
        let scores = shapes
            .iter()
            .zip(&raw)
            .map(|(&(i, j), &bits)| {
                let norm = (i.min(j) as f64).log2();
                (bits / norm).clamp(0.0, 1.0)
            })
            .collect();
        Self {
            n,
            bound,
            shapes,
            scores,
        }
    }

    pub(crate) fn from_parts(n: usize, bound: usize, shapes: Vec<(usize, usize)>, scores: Vec<f64>) -> Self {
        Self {
            n,
            bound,
            shapes,
            scores,
        }
    }

    /// Sample size the matrix was computed from.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid budget `B` that bounds the shape area.
    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Number of shapes in the domain.
    pub fn num_shapes(&self) -> usize {
        self.shapes.len()
    }

    pub fn shapes(&self) -> &[(usize, usize)] {
        &self.shapes
    }

    /// Scores aligned with [`shapes`](Self::shapes).
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.shapes
            .binary_search_by_key(&(i * j, i), |&(a, b)| (a * b, a))
            .ok()
            .map(|idx| self.scores[idx])
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.shapes.iter().copied().zip(self.scores.iter().copied())
    }
}

// --- clump structures for the axis DP ---

/// Row histogram of one clump, sparse: (row, count) sorted by row.
type SparseHist = Vec<(usize, usize)>;

fn hist_size(h: &SparseHist) -> usize {
    h.iter().map(|&(_, c)| c).sum()
}

/// Groups the points into clumps: maximal runs of consecutive x-ordered
/// points lying in the same row, where an x tie group is never split. A tie
/// group spanning several rows forms a clump on its own.
fn form_clumps(ranked: &RankedSample, row_cuts: &[usize]) -> Vec<SparseHist> {
    let n = ranked.n();
    let x_starts = ranked.x_tie_starts();
    let groups = x_starts.len() + 1;
    let mut clumps: Vec<SparseHist> = Vec::new();
    let mut last_pure: Option<usize> = None;
    for g in 0..groups {
        let lo = if g == 0 { 0 } else { x_starts[g - 1] };
        let hi = if g == groups - 1 { n } else { x_starts[g] };
        let mut hist: SparseHist = Vec::new();
        for rank in lo..hi {
            let idx = ranked.x_order()[rank];
            let row = row_cuts.partition_point(|&c| c <= ranked.y_ranks()[idx]);
            match hist.binary_search_by_key(&row, |&(r, _)| r) {
                Ok(pos) => hist[pos].1 += 1,
                Err(pos) => hist.insert(pos, (row, 1)),
            }
        }
        let pure = if hist.len() == 1 { Some(hist[0].0) } else { None };
        if pure.is_some() && pure == last_pure {
            let last = clumps.last_mut().expect("pure run has a predecessor");
            last[0].1 += hi - lo;
        } else {
            clumps.push(hist);
            last_pure = pure;
        }
    }
    clumps
}

/// Merges adjacent clumps into at most `limit` superclumps of near-equal
/// point counts. Falls back to smaller counts, then to no merging, when the
/// greedy walk cannot fill every bin.
fn merge_superclumps(clumps: Vec<SparseHist>, limit: usize) -> Vec<SparseHist> {
    let sizes: Vec<usize> = clumps.iter().map(hist_size).collect();
    let mut k = limit.max(2);
    while k >= 2 {
        if let Some(cuts) = greedy_unit_cuts(&sizes, k) {
            let mut merged = Vec::with_capacity(k);
            let mut start = 0usize;
            for end in cuts.iter().copied().chain(std::iter::once(clumps.len())) {
                let mut hist: SparseHist = Vec::new();
                for clump in &clumps[start..end] {
                    for &(row, c) in clump {
                        match hist.binary_search_by_key(&row, |&(r, _)| r) {
                            Ok(pos) => hist[pos].1 += c,
                            Err(pos) => hist.insert(pos, (row, c)),
                        }
                    }
                }
                merged.push(hist);
                start = end;
            }
            return merged;
        }
        k -= 1;
    }
    clumps
}

/// Suffix row-count accumulator with an incrementally maintained
/// `sum(c * log2 c)` term, so entropies cost O(nonzero rows added).
struct EntropyAcc {
    counts: Vec<usize>,
    total: usize,
    c_log_c: f64,
}

impl EntropyAcc {
    fn new(rows: usize) -> Self {
        Self {
            counts: vec![0; rows],
            total: 0,
            c_log_c: 0.0,
        }
    }

    fn add(&mut self, hist: &SparseHist) {
        for &(row, c) in hist {
            let old = self.counts[row];
            if old > 0 {
                self.c_log_c -= (old as f64) * (old as f64).log2();
            }
            let new = old + c;
            self.counts[row] = new;
            self.c_log_c += (new as f64) * (new as f64).log2();
            self.total += c;
        }
    }

    /// H = log2(total) - sum(c log2 c) / total, in bits.
    fn entropy(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let t = self.total as f64;
        (t.log2() - self.c_log_c / t).max(0.0)
    }
}

/// Core DP. Returns the maximal mutual information in bits for each column
/// count `2..=min(max_cols, #clumps)` against the fixed row partition, plus
/// padding: counts beyond the clump total but within the number of distinct
/// x levels reuse the all-clumps optimum (splitting a clump refines the
/// partition without lowering mutual information), and counts beyond the
/// distinct x levels score zero since no such grid exists.
fn optimize_axis_bits(
    ranked: &RankedSample,
    row_cuts: &[usize],
    max_cols: usize,
    clump_factor: usize,
) -> Vec<f64> {
    let rows = row_cuts.len() + 1;
    let mut out = vec![0.0; max_cols - 1];
    let mut clumps = form_clumps(ranked, row_cuts);
    if clumps.len() < 2 {
        return out;
    }
    let limit = clump_factor.saturating_mul(max_cols);
    if clumps.len() > limit {
        clumps = merge_superclumps(clumps, limit);
    }
    let t = clumps.len();
    let l_cap = max_cols.min(t);

    // prefix point counts and prefix entropies over clumps
    let mut np = vec![0usize; t + 1];
    let mut h_prefix = vec![0.0f64; t + 1];
    {
        let mut acc = EntropyAcc::new(rows);
        for (idx, clump) in clumps.iter().enumerate() {
            acc.add(clump);
            np[idx + 1] = acc.total;
            h_prefix[idx + 1] = acc.entropy();
        }
    }
    let h_q = h_prefix[t];

    // base case: best single cut, F(t', 2) = max_s  -( n_s/n_t H(1..s) + (n_t-n_s)/n_t H(s+1..t) )
    let mut prev = vec![f64::NEG_INFINITY; t + 1];
    for tt in 2..=t {
        let ntt = np[tt] as f64;
        let mut acc = EntropyAcc::new(rows);
        let mut best = f64::NEG_INFINITY;
        for s in (1..tt).rev() {
            acc.add(&clumps[s]);
            let ns = np[s] as f64;
            let v = -(ns / ntt * h_prefix[s] + (ntt - ns) / ntt * acc.entropy());
            if v > best {
                best = v;
            }
        }
        prev[tt] = best;
    }
    out[0] = (h_q + prev[t]).max(0.0);

    // F(t', l) = max_s  n_s/n_t F(s, l-1) - (n_t-n_s)/n_t H(s+1..t)
    let mut cur = vec![f64::NEG_INFINITY; t + 1];
    for l in 3..=l_cap {
        for tt in l..=t {
            let ntt = np[tt] as f64;
            let mut acc = EntropyAcc::new(rows);
            let mut best = f64::NEG_INFINITY;
            for s in ((l - 1)..tt).rev() {
                acc.add(&clumps[s]);
                let v = np[s] as f64 / ntt * prev[s] - (ntt - np[s] as f64) / ntt * acc.entropy();
                if v > best {
                    best = v;
                }
            }
            cur[tt] = best;
        }
        out[l - 2] = (h_q + cur[t]).max(0.0);
        std::mem::swap(&mut prev, &mut cur);
    }

    // padding for column counts the clump walk cannot reach
    let pad = out[l_cap - 2];
    let x_groups = ranked.x_groups();
    for l in (l_cap + 1)..=max_cols {
        out[l - 2] = if l <= x_groups { pad } else { 0.0 };
    }
    out
}

/// Maximal mutual information in bits for every column count `2..=max_cols`
/// against a fixed row partition, searching cuts at clump boundaries.
///
/// `row_cuts` are y-rank thresholds as produced by [`equipartition_axis`];
/// any valid strictly increasing cut vector is accepted. Values are lower
/// bounds on the exhaustive fixed-rows maximum and equal it whenever
/// `clump_factor * l` reaches the clump count. With fewer than two clumps
/// there is no column structure at all and every count scores zero.
pub fn optimize_x_axis(
    ranked: &RankedSample,
    row_cuts: &[usize],
    max_cols: usize,
    clump_factor: usize,
) -> Result<Vec<f64>> {
    validate_cuts(row_cuts, ranked.n(), "row")?;
    if max_cols < 2 {
        return Err(Error::InvalidParam {
            name: "max_cols",
            reason: format!("need at least 2 columns, got {max_cols}"),
        });
    }
    if clump_factor < 1 {
        return Err(Error::InvalidParam {
            name: "clump_factor",
            reason: "must be at least 1".into(),
        });
    }
    Ok(optimize_axis_bits(ranked, row_cuts, max_cols, clump_factor))
}

/// Approximate characteristic matrix of a ranked sample.
///
/// For every admissible shape the better of two searches is kept: rows fixed
/// by a y equipartition with columns optimized, and the transposed
/// counterpart. Shapes whose axis cannot be split into the required number
/// of bins score zero, so samples with a constant axis yield an all-zero
/// matrix rather than an error.
pub fn approx_char_matrix(
    ranked: &RankedSample,
    params: &MineParams,
) -> Result<CharacteristicMatrix> {
    params.validate()?;
    let n = ranked.n();
    if n < 4 {
        return Err(Error::TooFewPoints { n, min: 4 });
    }
    let bound = max_grid_bound(n, params.alpha);
    let shapes = CharacteristicMatrix::domain(bound);
    let mut raw = vec![0.0f64; shapes.len()];
    let index_of = |i: usize, j: usize| {
        shapes
            .binary_search_by_key(&(i * j, i), |&(a, b)| (a * b, a))
            .expect("shape in domain")
    };

    let swapped = ranked.swapped();
    for (view, is_swapped) in [(ranked, false), (&swapped, true)] {
        for k in 2..=bound / 2 {
            if view.y_groups() < k {
                break;
            }
            let row_cuts = match equipartition_axis(view, Axis::Y, k) {
                Ok(cuts) => cuts,
                Err(Error::DegenerateAxis { .. }) => continue,
                Err(e) => return Err(e),
            };
            let bits = optimize_axis_bits(view, &row_cuts, bound / k, params.clump_factor);
            for (off, &v) in bits.iter().enumerate() {
                let l = off + 2;
                let (i, j) = if is_swapped { (k, l) } else { (l, k) };
                let slot = &mut raw[index_of(i, j)];
                if v > *slot {
                    *slot = v;
                }
            }
        }
    }
    Ok(CharacteristicMatrix::from_raw_bits(n, bound, shapes, raw))
}

/// Exhaustive characteristic matrix for small samples.
///
/// Enumerates every placement of `i - 1` column cuts and `j - 1` row cuts at
/// tie-group boundaries and keeps the best mutual information per shape.
/// This searches a strict superset of the grids the approximate path can
/// reach, so its entries dominate them. The search space grows so fast that
/// `n` is capped at 12 and `bound` at 16.
pub fn exact_char_matrix(ranked: &RankedSample, bound: usize) -> Result<CharacteristicMatrix> {
    const MAX_N: usize = 12;
    const MAX_BOUND: usize = 16;
    let n = ranked.n();
    if n > MAX_N {
        return Err(Error::SizeLimit {
            what: "n",
            value: n,
            max: MAX_N,
        });
    }
    if bound > MAX_BOUND {
        return Err(Error::SizeLimit {
            what: "bound",
            value: bound,
            max: MAX_BOUND,
        });
    }
    if bound < 4 {
        return Err(Error::InvalidParam {
            name: "bound",
            reason: format!("must be at least 4, got {bound}"),
        });
    }
    let shapes = CharacteristicMatrix::domain(bound);
    let mut raw = vec![0.0f64; shapes.len()];
    for (slot, &(i, j)) in raw.iter_mut().zip(&shapes) {
        if i > ranked.x_groups() || j > ranked.y_groups() {
            continue;
        }
        let mut best = 0.0f64;
        for col_cuts in ranked.x_tie_starts().iter().copied().combinations(i - 1) {
            for row_cuts in ranked.y_tie_starts().iter().copied().combinations(j - 1) {
                let grid = GridPartition::new(col_cuts.clone(), row_cuts, n)?;
                let mi = mutual_information(&contingency(ranked, &grid));
                if mi > best {
                    best = mi;
                }
            }
        }
        *slot = best;
    }
    Ok(CharacteristicMatrix::from_raw_bits(n, bound, shapes, raw))
}
