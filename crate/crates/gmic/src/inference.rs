//! Permutation-style independence testing.
//!
//! The null model draws both coordinates as fresh independent uniforms, so a
//! single table per (statistic, sample size, seed) serves any data set of
//! that size. For the rank statistics this is exactly the permutation null;
//! for the value-based baselines it is the stated approximation. All
//! statistics share the same draws, which keeps their null tables comparable
//! draw for draw.

use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::baselines::{distance_correlation, pearson_r2};
use crate::charmat::{approx_char_matrix, MineParams};
use crate::error::{Error, Result};
use crate::measures::{gmic, maximal_char_matrix, mcn, mic, minic, GmicP};
use crate::rng::{stream_rng, PURPOSE_NULL};
use crate::sample::Sample;
use rand::Rng;

/// Which statistic to compute.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StatKind {
    Mic,
    Minic,
    Gmic(GmicP),
    /// Minimum cell number at the given tolerance delta.
    Mcn(f64),
    PearsonR2,
    Dcor,
}

/// A fully specified statistic: the kind plus the grid-search parameters
/// used by the grid-based kinds.
#[derive(Clone, Copy, Debug)]
pub struct StatisticSpec {
    pub kind: StatKind,
    pub params: MineParams,
}

impl StatisticSpec {
    pub fn mic() -> Self {
        Self::of(StatKind::Mic)
    }

    pub fn minic() -> Self {
        Self::of(StatKind::Minic)
    }

    pub fn gmic(p: GmicP) -> Self {
        Self::of(StatKind::Gmic(p))
    }

    pub fn mcn(delta: f64) -> Self {
        Self::of(StatKind::Mcn(delta))
    }

    pub fn pearson_r2() -> Self {
        Self::of(StatKind::PearsonR2)
    }

    pub fn dcor() -> Self {
        Self::of(StatKind::Dcor)
    }

    fn of(kind: StatKind) -> Self {
        Self {
            kind,
            params: MineParams::default(),
        }
    }

    pub fn with_params(mut self, params: MineParams) -> Self {
        self.params = params;
        self
    }

    /// Whether this statistic is computed from the characteristic matrix.
    pub fn is_grid_based(&self) -> bool {
        matches!(
            self.kind,
            StatKind::Mic | StatKind::Minic | StatKind::Gmic(_) | StatKind::Mcn(_)
        )
    }

    /// Smallest sample size the statistic accepts.
    pub fn min_points(&self) -> usize {
        if self.is_grid_based() {
            4
        } else {
            2
        }
    }

    /// Short name, e.g. `gmic(-1)` or `dcor`.
    pub fn label(&self) -> String {
        match self.kind {
            StatKind::Mic => "mic".into(),
            StatKind::Minic => "minic".into(),
            StatKind::Gmic(p) => format!("gmic({p})"),
            StatKind::Mcn(delta) => format!("mcn({delta:?})"),
            StatKind::PearsonR2 => "r2".into(),
            StatKind::Dcor => "dcor".into(),
        }
    }

    /// Name plus every parameter that affects the value; two specs agree
    /// exactly when their id strings do.
    pub fn id_string(&self) -> String {
        if self.is_grid_based() {
            format!(
                "{} alpha={:?} clump_factor={}",
                self.label(),
                self.params.alpha,
                self.params.clump_factor
            )
        } else {
            self.label()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let StatKind::Mcn(delta) = self.kind {
            if !(0.0..=1.0).contains(&delta) || delta.is_nan() {
                return Err(Error::InvalidParam {
                    name: "delta",
                    reason: format!("must be in [0, 1], got {delta}"),
                });
            }
        }
        if self.is_grid_based() {
            self.params.validate()?;
        }
        Ok(())
    }

    /// Computes the statistic on a sample.
    pub fn evaluate(&self, sample: &Sample) -> Result<f64> {
        Ok(evaluate_statistics(std::slice::from_ref(self), sample)?[0])
    }
}

impl PartialEq for StatisticSpec {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && (!self.is_grid_based() || self.params == other.params)
    }
}

impl std::fmt::Display for StatisticSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

impl std::str::FromStr for StatisticSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let parse_arg = |t: &str, name: &str| -> Option<String> {
            t.strip_prefix(name)
                .and_then(|rest| rest.strip_prefix('('))
                .and_then(|rest| rest.strip_suffix(')'))
                .map(|inner| inner.to_string())
        };
        if t == "mic" {
            return Ok(Self::mic());
        }
        if t == "minic" {
            return Ok(Self::minic());
        }
        if t == "r2" || t == "pearson_r2" {
            return Ok(Self::pearson_r2());
        }
        if t == "dcor" {
            return Ok(Self::dcor());
        }
        if let Some(arg) = parse_arg(t, "gmic") {
            return Ok(Self::gmic(arg.parse::<GmicP>()?));
        }
        if let Some(arg) = parse_arg(t, "mcn") {
            let delta = arg.parse::<f64>().map_err(|_| Error::InvalidParam {
                name: "delta",
                reason: format!("cannot parse `{arg}`"),
            })?;
            let spec = Self::mcn(delta);
            spec.validate()?;
            return Ok(spec);
        }
        Err(Error::InvalidParam {
            name: "statistic",
            reason: format!(
                "unknown statistic `{t}`; expected one of mic, minic, gmic(p), mcn(delta), r2, dcor"
            ),
        })
    }
}

/// Evaluates several statistics on one sample, computing each distinct
/// characteristic matrix only once.
pub fn evaluate_statistics(specs: &[StatisticSpec], sample: &Sample) -> Result<Vec<f64>> {
    for spec in specs {
        spec.validate()?;
        if sample.len() < spec.min_points() {
            return Err(Error::TooFewPoints {
                n: sample.len(),
                min: spec.min_points(),
            });
        }
    }
    let mut out = vec![0.0f64; specs.len()];

    // group the grid-based specs by search parameters
    let mut groups: Vec<(MineParams, Vec<usize>)> = Vec::new();
    for (idx, spec) in specs.iter().enumerate() {
        if !spec.is_grid_based() {
            continue;
        }
        match groups.iter_mut().find(|(p, _)| *p == spec.params) {
            Some((_, members)) => members.push(idx),
            None => groups.push((spec.params, vec![idx])),
        }
    }

    if !groups.is_empty() {
        let ranked = sample.ranked();
        for (params, members) in &groups {
            let matrix = approx_char_matrix(&ranked, params)?;
            let needs_maximal = members.iter().any(|&idx| {
                matches!(specs[idx].kind, StatKind::Minic | StatKind::Gmic(_))
            });
            let maximal = needs_maximal.then(|| maximal_char_matrix(&matrix));
            for &idx in members {
                out[idx] = match specs[idx].kind {
                    StatKind::Mic => mic(&matrix),
                    StatKind::Minic => minic(maximal.as_ref().expect("computed")),
                    StatKind::Gmic(p) => gmic(maximal.as_ref().expect("computed"), p),
                    StatKind::Mcn(delta) => mcn(&matrix, delta)?,
                    _ => unreachable!("grid-based group"),
                };
            }
        }
    }

    for (idx, spec) in specs.iter().enumerate() {
        match spec.kind {
            StatKind::PearsonR2 => out[idx] = pearson_r2(sample.xs(), sample.ys())?,
            StatKind::Dcor => out[idx] = distance_correlation(sample.xs(), sample.ys())?.dcor,
            _ => {}
        }
    }
    Ok(out)
}

/// Sorted null draws of one statistic at one sample size.
#[derive(Clone, Debug, PartialEq)]
pub struct NullTable {
    spec: StatisticSpec,
    n: usize,
    seed: u64,
    draws: Vec<f64>,
}

impl NullTable {
    /// Fewest draws a table may hold; below this, tail quantiles are junk.
    pub const MIN_REPS: usize = 100;

    pub fn spec(&self) -> &StatisticSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn reps(&self) -> usize {
        self.draws.len()
    }

    /// Draws in ascending order.
    pub fn draws(&self) -> &[f64] {
        &self.draws
    }

    /// Writes the table in the versioned text format.
    pub fn write_to(&self, w: &mut dyn Write) -> Result<()> {
        writeln!(w, "{FORMAT_HEADER}")?;
        writeln!(w, "statistic: {}", self.spec.label())?;
        writeln!(w, "alpha: {:?}", self.spec.params.alpha)?;
        writeln!(w, "clump_factor: {}", self.spec.params.clump_factor)?;
        writeln!(w, "n: {}", self.n)?;
        writeln!(w, "reps: {}", self.reps())?;
        writeln!(w, "seed: {}", self.seed)?;
        writeln!(w, "draws:")?;
        for d in &self.draws {
            writeln!(w, "{d:?}")?;
        }
        Ok(())
    }

    pub fn write_to_path(&self, path: &Path) -> Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut file)
    }

    /// Reads a table produced by [`write_to`](Self::write_to), rejecting
    /// unknown versions and draws out of order.
    pub fn read_from(r: &mut dyn BufRead) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let mut next_line = |expect: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((idx, line)) => Ok((idx + 1, line?)),
                None => Err(Error::Format(format!(
                    "unexpected end of table file, expected {expect}"
                ))),
            }
        };
        let (_, version) = next_line("version header")?;
        if version.trim() != FORMAT_HEADER {
            return Err(Error::Format(format!(
                "unsupported table version `{}` (expected `{FORMAT_HEADER}`)",
                version.trim()
            )));
        }
        let mut statistic: Option<String> = None;
        let mut alpha: Option<f64> = None;
        let mut clump_factor: Option<usize> = None;
        let mut n: Option<usize> = None;
        let mut reps: Option<usize> = None;
        let mut seed: Option<u64> = None;
        loop {
            let (line_no, line) = next_line("header field or `draws:`")?;
            let line = line.trim();
            if line == "draws:" {
                break;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected `key: value`, got `{line}`"),
            })?;
            let value = value.trim();
            let bad = |what: &str| Error::Parse {
                line: line_no,
                message: format!("cannot parse {what} from `{value}`"),
            };
            match key.trim() {
                "statistic" => statistic = Some(value.to_string()),
                "alpha" => alpha = Some(value.parse().map_err(|_| bad("alpha"))?),
                "clump_factor" => {
                    clump_factor = Some(value.parse().map_err(|_| bad("clump_factor"))?)
                }
                "n" => n = Some(value.parse().map_err(|_| bad("n"))?),
                "reps" => reps = Some(value.parse().map_err(|_| bad("reps"))?),
                "seed" => seed = Some(value.parse().map_err(|_| bad("seed"))?),
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unknown header field `{other}`"),
                    })
                }
            }
        }
        let missing = |what: &str| Error::Format(format!("table header is missing `{what}`"));
        let label = statistic.ok_or_else(|| missing("statistic"))?;
        let mut spec: StatisticSpec = label.parse()?;
        if spec.is_grid_based() {
            spec.params = MineParams::new(
                alpha.ok_or_else(|| missing("alpha"))?,
                clump_factor.ok_or_else(|| missing("clump_factor"))?,
            )?;
        }
        let n = n.ok_or_else(|| missing("n"))?;
        let reps = reps.ok_or_else(|| missing("reps"))?;
        let seed = seed.ok_or_else(|| missing("seed"))?;
        let mut draws = Vec::with_capacity(reps);
        for _ in 0..reps {
            let (line_no, line) = next_line("a draw")?;
            let d: f64 = line.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("cannot parse draw `{}`", line.trim()),
            })?;
            draws.push(d);
        }
        if draws.len() < Self::MIN_REPS {
            return Err(Error::Format(format!(
                "table holds {} draws, need at least {}",
                draws.len(),
                Self::MIN_REPS
            )));
        }
        if draws.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Format("table draws are not sorted".into()));
        }
        Ok(Self {
            spec,
            n,
            seed,
            draws,
        })
    }

    pub fn read_from_path(path: &Path) -> Result<Self> {
        let mut file = std::io::BufReader::new(std::fs::File::open(path)?);
        Self::read_from(&mut file)
    }
}

const FORMAT_HEADER: &str = "gmic nulltable v1";

/// Null distribution of one statistic under independence.
pub fn null_distribution(
    spec: &StatisticSpec,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<NullTable> {
    Ok(null_distributions(std::slice::from_ref(spec), n, reps, seed)?.remove(0))
}

/// Null distributions of several statistics over shared draws.
///
/// Draw `d` regenerates the same independent-uniform sample regardless of
/// which statistics are requested, so tables built separately but with the
/// same `(n, reps, seed)` remain draw-for-draw comparable. Draws run in
/// parallel; each has its own RNG stream, making the result independent of
/// thread count.
pub fn null_distributions(
    specs: &[StatisticSpec],
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<Vec<NullTable>> {
    if reps < NullTable::MIN_REPS {
        return Err(Error::InvalidParam {
            name: "reps",
            reason: format!("need at least {}, got {reps}", NullTable::MIN_REPS),
        });
    }
    if specs.is_empty() {
        return Err(Error::InvalidParam {
            name: "specs",
            reason: "need at least one statistic".into(),
        });
    }
    let per_draw: Vec<Vec<f64>> = (0..reps)
        .into_par_iter()
        .map(|draw| {
            let mut rng = stream_rng(seed, PURPOSE_NULL, 0, 0, draw as u32);
            let xs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let ys: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let sample = Sample::new(xs, ys)?;
            evaluate_statistics(specs, &sample)
        })
        .collect::<Result<_>>()?;

    Ok(specs
        .iter()
        .enumerate()
        .map(|(idx, spec)| {
            let mut draws: Vec<f64> = per_draw.iter().map(|row| row[idx]).collect();
            draws.sort_by(f64::total_cmp);
            NullTable {
                spec: *spec,
                n,
                seed,
                draws,
            }
        })
        .collect())
}

/// Critical value at the given level: the `ceil((1 - level) * R)`-th
/// smallest draw.
pub fn critical_value(table: &NullTable, level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParam {
            name: "level",
            reason: format!("must be in (0, 1), got {level}"),
        });
    }
    let r = table.draws.len();
    // the tiny offset keeps a mathematically integral product from rounding
    // up and shifting the order statistic by one
    let k = (((1.0 - level) * r as f64) - 1e-9).ceil().max(1.0) as usize;
    Ok(table.draws[k.min(r) - 1])
}

/// Outcome of an independence test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestResult {
    /// Observed value of the statistic.
    pub statistic: f64,
    /// Rejection threshold from the null table.
    pub critical_value: f64,
    /// Add-one permutation p-value `(1 + #{draws >= observed}) / (R + 1)`.
    pub p_value: f64,
    /// Whether the observed value strictly exceeds the critical value.
    pub reject: bool,
    pub level: f64,
}

/// Tests the hypothesis that the two coordinates are independent.
pub fn test_independence(
    sample: &Sample,
    spec: &StatisticSpec,
    table: &NullTable,
    level: f64,
) -> Result<TestResult> {
    if table.n != sample.len() {
        return Err(Error::TableSampleMismatch {
            table: table.n,
            sample: sample.len(),
        });
    }
    if table.spec != *spec {
        return Err(Error::TableStatMismatch {
            table: table.spec.id_string(),
            requested: spec.id_string(),
        });
    }
    let observed = spec.evaluate(sample)?;
    let cv = critical_value(table, level)?;
    let r = table.draws.len();
    let count_ge = r - table.draws.partition_point(|d| *d < observed);
    let p_value = (1 + count_ge) as f64 / (r + 1) as f64;
    Ok(TestResult {
        statistic: observed,
        critical_value: cv,
        p_value,
        reject: observed > cv,
        level,
    })
}
