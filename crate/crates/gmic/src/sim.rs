//! Monte Carlo study harness: benchmark relationships, power studies and
//! sample-mean studies.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::charmat::MineParams;
use crate::error::{Error, Result};
use crate::inference::{
    critical_value, evaluate_statistics, null_distributions, StatisticSpec,
};
use crate::measures::GmicP;
use crate::rng::{stream_rng, PURPOSE_MEANS, PURPOSE_POWER};
use crate::sample::Sample;

/// One of the eight benchmark relationships between X ~ Uniform(0,1) and Y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relationship {
    /// Y = X + e
    Linear,
    /// Y = 4(X - 1/2)^2 + e
    Quadratic,
    /// Y = 80(X - 1/3)^3 - 12(X - 1/3) + 10e
    Cubic,
    /// Y = sin(4 pi X) + 2e, period one half
    SineHalf,
    /// Y = sin(16 pi X) + e, period one eighth
    SineEighth,
    /// Y = X^(1/4) + e
    FourthRoot,
    /// Y = (2W - 1) sqrt(1 - (2X - 1)^2) + e/4 with W ~ Bernoulli(1/2)
    Circle,
    /// Y = 1(X > 1/2) + 5e
    Step,
}

impl Relationship {
    pub const ALL: [Relationship; 8] = [
        Relationship::Linear,
        Relationship::Quadratic,
        Relationship::Cubic,
        Relationship::SineHalf,
        Relationship::SineEighth,
        Relationship::FourthRoot,
        Relationship::Circle,
        Relationship::Step,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relationship::Linear => "linear",
            Relationship::Quadratic => "quadratic",
            Relationship::Cubic => "cubic",
            Relationship::SineHalf => "sine_half",
            Relationship::SineEighth => "sine_eighth",
            Relationship::FourthRoot => "fourth_root",
            Relationship::Circle => "circle",
            Relationship::Step => "step",
        }
    }

    /// Stable index used to derive per-relationship RNG streams; does not
    /// depend on which relationships a study selects.
    pub(crate) fn stream_index(self) -> u16 {
        Relationship::ALL
            .iter()
            .position(|r| *r == self)
            .expect("listed in ALL") as u16
    }

    /// Y given x, the noise deviate z and the coin w, at noise level sigma.
    fn response(self, x: f64, sigma: f64, z: f64, w: bool) -> f64 {
        let e = sigma * z;
        match self {
            Relationship::Linear => x + e,
            Relationship::Quadratic => 4.0 * (x - 0.5).powi(2) + e,
            Relationship::Cubic => {
                let c = x - 1.0 / 3.0;
                80.0 * c.powi(3) - 12.0 * c + 10.0 * e
            }
            Relationship::SineHalf => (4.0 * std::f64::consts::PI * x).sin() + 2.0 * e,
            Relationship::SineEighth => (16.0 * std::f64::consts::PI * x).sin() + e,
            Relationship::FourthRoot => x.powf(0.25) + e,
            Relationship::Circle => {
                let sign = if w { 1.0 } else { -1.0 };
                sign * (1.0 - (2.0 * x - 1.0).powi(2)).sqrt() + e / 4.0
            }
            Relationship::Step => f64::from(x > 0.5) + 5.0 * e,
        }
    }

    /// Draws a sample of size `n` at noise level `sigma`.
    pub fn generate(self, n: usize, sigma: f64, rng: &mut ChaCha8Rng) -> Result<Sample> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParam {
                name: "sigma",
                reason: format!("must be finite and >= 0, got {sigma}"),
            });
        }
        let mut xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        for _ in 0..n {
            let x: f64 = rng.gen();
            let z: f64 = StandardNormal.sample(rng);
            let w = matches!(self, Relationship::Circle) && rng.gen::<bool>();
            xs.push(x);
            ys.push(self.response(x, sigma, z, w));
        }
        Sample::new(xs, ys)
    }
}

impl std::fmt::Display for Relationship {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Relationship {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Relationship::ALL
            .iter()
            .copied()
            .find(|r| r.name() == t)
            .ok_or_else(|| Error::InvalidParam {
                name: "relationship",
                reason: format!(
                    "unknown relationship `{t}`; expected one of {}",
                    Relationship::ALL.map(|r| r.name()).join(", ")
                ),
            })
    }
}

/// Noise levels 0.05, 0.10, ..., 3.00.
pub fn default_noise_grid() -> Vec<f64> {
    (1..=60).map(|k| k as f64 * 0.05).collect()
}

/// Noise levels for mean studies: zero plus the first ten of the default
/// grid.
pub fn means_noise_grid() -> Vec<f64> {
    std::iter::once(0.0)
        .chain((1..=10).map(|k| k as f64 * 0.05))
        .collect()
}

/// Seven evenly indexed levels of the default grid, for compact power
/// curves.
pub fn seven_level_noise_grid() -> Vec<f64> {
    let grid = default_noise_grid();
    (0..7).map(|i| grid[i * (grid.len() - 1) / 6]).collect()
}

/// The 400-exponent sweep: integers -100..-1 and 1..100, hundredths
/// -0.99..-0.01 and 0.01..0.99, plus both infinities.
pub fn default_p_sweep() -> Vec<GmicP> {
    let mut ps = vec![f64::NEG_INFINITY];
    ps.extend((-100..=-1).map(|k| k as f64));
    ps.extend((-99..=-1).map(|k| k as f64 / 100.0));
    ps.extend((1..=99).map(|k| k as f64 / 100.0));
    ps.extend((1..=100).map(|k| k as f64));
    ps.push(f64::INFINITY);
    ps.into_iter()
        .map(|p| GmicP::new(p).expect("finite or infinite"))
        .collect()
}

/// Parameters of a Monte Carlo study.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    /// Points per generated sample.
    pub n: usize,
    /// Alternative draws per (relationship, noise) cell.
    pub reps: usize,
    /// Null draws behind each critical value.
    pub null_reps: usize,
    /// Test level for power studies.
    pub level: f64,
    pub seed: u64,
    pub noise_grid: Vec<f64>,
    /// Extra exponents, each adding a gmic statistic to the study.
    pub p_grid: Vec<GmicP>,
    pub relationships: Vec<Relationship>,
    pub statistics: Vec<StatisticSpec>,
    /// Grid-search parameters applied to every grid-based statistic.
    pub params: MineParams,
}

impl SimConfig {
    /// Desk-scale power-study defaults.
    pub fn power_defaults() -> Self {
        Self {
            n: 320,
            reps: 500,
            null_reps: 1000,
            level: 0.05,
            seed: 0,
            noise_grid: default_noise_grid(),
            p_grid: Vec::new(),
            relationships: Relationship::ALL.to_vec(),
            statistics: default_statistics(),
            params: MineParams::default(),
        }
    }

    /// Desk-scale mean-study defaults; only the noise grid differs.
    pub fn means_defaults() -> Self {
        Self {
            noise_grid: means_noise_grid(),
            ..Self::power_defaults()
        }
    }

    /// The statistic list with the parameter set applied and the exponent
    /// grid appended, duplicates removed.
    pub fn effective_statistics(&self) -> Vec<StatisticSpec> {
        let mut specs: Vec<StatisticSpec> = Vec::new();
        let all = self
            .statistics
            .iter()
            .copied()
            .chain(self.p_grid.iter().map(|&p| StatisticSpec::gmic(p)));
        for mut spec in all {
            if spec.is_grid_based() {
                spec = spec.with_params(self.params);
            }
            if !specs.contains(&spec) {
                specs.push(spec);
            }
        }
        specs
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, reason: String| Err(Error::InvalidParam { name, reason });
        if self.reps < 10 {
            return bad("reps", format!("need at least 10, got {}", self.reps));
        }
        if self.null_reps < 100 {
            return bad(
                "null_reps",
                format!("need at least 100, got {}", self.null_reps),
            );
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return bad("level", format!("must be in (0, 1), got {}", self.level));
        }
        if self.noise_grid.is_empty() {
            return bad("noise_grid", "must not be empty".into());
        }
        if self.noise_grid.len() > u16::MAX as usize {
            return bad("noise_grid", "too many noise levels".into());
        }
        if let Some(s) = self
            .noise_grid
            .iter()
            .find(|s| !(**s >= 0.0 && s.is_finite()))
        {
            return bad("noise_grid", format!("levels must be >= 0, got {s}"));
        }
        if self.relationships.is_empty() {
            return bad("relationships", "must not be empty".into());
        }
        let specs = self.effective_statistics();
        if specs.is_empty() {
            return bad("statistics", "must not be empty".into());
        }
        self.params.validate()?;
        for spec in &specs {
            spec.validate()?;
            if self.n < spec.min_points() {
                return Err(Error::TooFewPoints {
                    n: self.n,
                    min: spec.min_points(),
                });
            }
        }
        Ok(())
    }
}

/// Statistics a study compares by default.
pub fn default_statistics() -> Vec<StatisticSpec> {
    vec![
        StatisticSpec::mic(),
        StatisticSpec::gmic(GmicP::new(-1.0).expect("finite")),
        StatisticSpec::minic(),
        StatisticSpec::pearson_r2(),
        StatisticSpec::dcor(),
    ]
}

/// One (relationship, statistic, noise) cell of a power study.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerCell {
    pub relationship: Relationship,
    pub statistic: String,
    pub noise: f64,
    pub reps: usize,
    /// Rejection proportion; absent when the cell failed.
    pub power: Option<f64>,
    /// Binomial standard error sqrt(power (1 - power) / reps).
    pub se: Option<f64>,
    /// Critical value the cell tested against.
    pub cutoff: f64,
    pub error: Option<String>,
}

/// One cell of a sample-mean study.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanCell {
    pub relationship: Relationship,
    pub statistic: String,
    pub noise: f64,
    pub reps: usize,
    pub mean: Option<f64>,
    /// Standard error of the mean, sample sd / sqrt(reps).
    pub se: Option<f64>,
    pub error: Option<String>,
}

/// Power study output: one cell per (relationship, statistic, noise).
#[derive(Clone, Debug, PartialEq)]
pub struct PowerResult {
    pub config: SimConfig,
    /// Critical values per statistic, in `effective_statistics` order.
    pub cutoffs: Vec<(String, f64)>,
    pub cells: Vec<PowerCell>,
}

/// Mean study output: one cell per (relationship, statistic, noise).
#[derive(Clone, Debug, PartialEq)]
pub struct MeansResult {
    pub config: SimConfig,
    pub cells: Vec<MeanCell>,
}

impl PowerResult {
    /// Looks up a cell by coordinates.
    pub fn cell(&self, rel: Relationship, statistic: &str, noise: f64) -> Option<&PowerCell> {
        self.cells
            .iter()
            .find(|c| c.relationship == rel && c.statistic == statistic && c.noise == noise)
    }

    pub fn failed_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }
}

impl MeansResult {
    pub fn cell(&self, rel: Relationship, statistic: &str, noise: f64) -> Option<&MeanCell> {
        self.cells
            .iter()
            .find(|c| c.relationship == rel && c.statistic == statistic && c.noise == noise)
    }

    pub fn failed_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }
}

/// Per-rep statistic values for one (relationship, noise) pair; outer error
/// means generation itself failed.
type RepValues = std::result::Result<Vec<std::result::Result<f64, String>>, String>;

fn run_reps(
    config: &SimConfig,
    specs: &[StatisticSpec],
    purpose: u8,
    rel: Relationship,
    noise_idx: usize,
) -> Vec<RepValues> {
    let sigma = config.noise_grid[noise_idx];
    (0..config.reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream_rng(
                config.seed,
                purpose,
                rel.stream_index(),
                noise_idx as u16,
                rep as u32,
            );
            let sample = rel
                .generate(config.n, sigma, &mut rng)
                .map_err(|e| e.to_string())?;
            match evaluate_statistics(specs, &sample) {
                Ok(values) => Ok(values.into_iter().map(Ok).collect()),
                // fall back to one-at-a-time so only the failing
                // statistic's cell is marked bad
                Err(_) => Ok(specs
                    .iter()
                    .map(|s| s.evaluate(&sample).map_err(|e| e.to_string()))
                    .collect()),
            }
        })
        .collect()
}

/// Summarizes one statistic's rep values for one (relationship, noise)
/// pair; any failed rep yields its error string instead.
fn summarize_stat(
    reps: &[RepValues],
    stat_idx: usize,
    summarize: impl Fn(&[f64]) -> (f64, f64),
) -> std::result::Result<(f64, f64), String> {
    let mut values = Vec::with_capacity(reps.len());
    for rep in reps {
        match rep {
            Ok(row) => match &row[stat_idx] {
                Ok(v) => values.push(*v),
                Err(e) => return Err(e.clone()),
            },
            Err(e) => return Err(e.clone()),
        }
    }
    Ok(summarize(&values))
}

/// Runs every (relationship, noise) pair in parallel; `raw[r * S + s]`
/// holds the rep values for relationship index r and noise index s.
fn run_all_cells(config: &SimConfig, specs: &[StatisticSpec], purpose: u8) -> Vec<Vec<RepValues>> {
    let coords: Vec<(usize, usize)> = (0..config.relationships.len())
        .flat_map(|r| (0..config.noise_grid.len()).map(move |s| (r, s)))
        .collect();
    coords
        .par_iter()
        .map(|&(r, s)| run_reps(config, specs, purpose, config.relationships[r], s))
        .collect()
}

/// Estimates rejection power per cell against shared null tables.
///
/// Identical configurations produce identical results at any thread count;
/// every rep draws from its own RNG stream keyed by (seed, relationship,
/// noise index, rep).
pub fn power_study(config: &SimConfig) -> Result<PowerResult> {
    config.validate()?;
    let specs = config.effective_statistics();
    let tables = null_distributions(&specs, config.n, config.null_reps, config.seed)?;
    let cutoffs: Vec<f64> = tables
        .iter()
        .map(|t| critical_value(t, config.level))
        .collect::<Result<_>>()?;

    let raw = run_all_cells(config, &specs, PURPOSE_POWER);
    let stride = config.noise_grid.len();
    let mut cells = Vec::with_capacity(raw.len() * specs.len());
    for (r, &rel) in config.relationships.iter().enumerate() {
        for (stat_idx, spec) in specs.iter().enumerate() {
            let cutoff = cutoffs[stat_idx];
            for (s, &noise) in config.noise_grid.iter().enumerate() {
                let reps = &raw[r * stride + s];
                let summary = summarize_stat(reps, stat_idx, |values| {
                    let rejections = values.iter().filter(|v| **v > cutoff).count();
                    let p = rejections as f64 / values.len() as f64;
                    (p, (p * (1.0 - p) / values.len() as f64).sqrt())
                });
                let (power, se, error) = match summary {
                    Ok((p, se)) => (Some(p), Some(se), None),
                    Err(e) => (None, None, Some(e)),
                };
                cells.push(PowerCell {
                    relationship: rel,
                    statistic: spec.label(),
                    noise,
                    reps: config.reps,
                    power,
                    se,
                    cutoff,
                    error,
                });
            }
        }
    }
    Ok(PowerResult {
        config: config.clone(),
        cutoffs: specs
            .iter()
            .zip(&cutoffs)
            .map(|(s, c)| (s.label(), *c))
            .collect(),
        cells,
    })
}

/// Estimates the mean raw statistic value per cell.
pub fn sample_mean_study(config: &SimConfig) -> Result<MeansResult> {
    config.validate()?;
    let specs = config.effective_statistics();
    let raw = run_all_cells(config, &specs, PURPOSE_MEANS);
    let stride = config.noise_grid.len();
    let mut cells = Vec::with_capacity(raw.len() * specs.len());
    for (r, &rel) in config.relationships.iter().enumerate() {
        for (stat_idx, spec) in specs.iter().enumerate() {
            for (s, &noise) in config.noise_grid.iter().enumerate() {
                let reps = &raw[r * stride + s];
                let summary = summarize_stat(reps, stat_idx, |values| {
                    let m = values.iter().sum::<f64>() / values.len() as f64;
                    let var = if values.len() > 1 {
                        values.iter().map(|v| (v - m).powi(2)).sum::<f64>()
                            / (values.len() - 1) as f64
                    } else {
                        0.0
                    };
                    (m, (var / values.len() as f64).sqrt())
                });
                let (mean, se, error) = match summary {
                    Ok((m, se)) => (Some(m), Some(se), None),
                    Err(e) => (None, None, Some(e)),
                };
                cells.push(MeanCell {
                    relationship: rel,
                    statistic: spec.label(),
                    noise,
                    reps: config.reps,
                    mean,
                    se,
                    error,
                });
            }
        }
    }
    Ok(MeansResult {
        config: config.clone(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SimConfig {
        SimConfig {
            n: 40,
            reps: 20,
            null_reps: 100,
            level: 0.05,
            seed: 42,
            noise_grid: vec![0.1, 1.0],
            p_grid: Vec::new(),
            relationships: vec![Relationship::Linear, Relationship::Step],
            statistics: vec![
                StatisticSpec::mic(),
                StatisticSpec::gmic(GmicP::new(-1.0).unwrap()),
                StatisticSpec::minic(),
                StatisticSpec::pearson_r2(),
            ],
            params: MineParams::default(),
        }
    }

    #[test]
    fn relationship_names_roundtrip() {
        for rel in Relationship::ALL {
            assert_eq!(rel.name().parse::<Relationship>().unwrap(), rel);
        }
        let err = "spiral".parse::<Relationship>().unwrap_err().to_string();
        assert!(err.contains("sine_eighth"), "{err}");
    }

    #[test]
    fn noiseless_formulas_hold_pointwise() {
        let mut rng = stream_rng(7, PURPOSE_POWER, 0, 0, 0);
        let s = Relationship::Linear.generate(50, 0.0, &mut rng).unwrap();
        assert_eq!(s.xs(), s.ys());

        let s = Relationship::Quadratic.generate(50, 0.0, &mut rng).unwrap();
        for (x, y) in s.xs().iter().zip(s.ys()) {
            assert_eq!(*y, 4.0 * (x - 0.5).powi(2));
        }

        let s = Relationship::Step.generate(50, 0.0, &mut rng).unwrap();
        for (x, y) in s.xs().iter().zip(s.ys()) {
            assert_eq!(*y, f64::from(*x > 0.5));
        }

        let s = Relationship::Circle.generate(200, 0.0, &mut rng).unwrap();
        let mut seen_upper = false;
        let mut seen_lower = false;
        for (x, y) in s.xs().iter().zip(s.ys()) {
            let r2 = (2.0 * x - 1.0).powi(2) + y * y;
            assert!((r2 - 1.0).abs() < 1e-12, "off the circle: {r2}");
            seen_upper |= *y > 0.0;
            seen_lower |= *y < 0.0;
        }
        assert!(seen_upper && seen_lower);
    }

    #[test]
    fn generation_is_stream_deterministic() {
        let mut a = stream_rng(3, PURPOSE_POWER, 2, 5, 9);
        let mut b = stream_rng(3, PURPOSE_POWER, 2, 5, 9);
        let sa = Relationship::Cubic.generate(30, 0.5, &mut a).unwrap();
        let sb = Relationship::Cubic.generate(30, 0.5, &mut b).unwrap();
        assert_eq!(sa.xs(), sb.xs());
        assert_eq!(sa.ys(), sb.ys());

        let mut c = stream_rng(3, PURPOSE_POWER, 2, 5, 10);
        let sc = Relationship::Cubic.generate(30, 0.5, &mut c).unwrap();
        assert_ne!(sa.xs(), sc.xs());
    }

    #[test]
    fn negative_noise_is_rejected() {
        let mut rng = stream_rng(0, PURPOSE_POWER, 0, 0, 0);
        assert!(Relationship::Linear.generate(10, -0.1, &mut rng).is_err());
    }

    #[test]
    fn config_validation_catches_bad_fields() {
        let mut c = small_config();
        c.reps = 5;
        assert!(c.validate().is_err());
        let mut c = small_config();
        c.null_reps = 50;
        assert!(c.validate().is_err());
        let mut c = small_config();
        c.level = 1.0;
        assert!(c.validate().is_err());
        let mut c = small_config();
        c.noise_grid = vec![-0.5];
        assert!(c.validate().is_err());
        let mut c = small_config();
        c.relationships.clear();
        assert!(c.validate().is_err());
        let mut c = small_config();
        c.n = 3;
        assert!(c.validate().is_err());
        assert!(small_config().validate().is_ok());
    }

    #[test]
    fn effective_statistics_apply_params_and_dedupe() {
        let mut c = small_config();
        c.p_grid = vec![GmicP::new(-1.0).unwrap(), GmicP::new(2.0).unwrap()];
        c.params = MineParams::new(0.5, 10).unwrap();
        let specs = c.effective_statistics();
        let labels: Vec<String> = specs.iter().map(|s| s.label()).collect();
        assert_eq!(labels, ["mic", "gmic(-1)", "minic", "r2", "gmic(2)"]);
        for spec in &specs {
            if spec.is_grid_based() {
                assert_eq!(spec.params, c.params);
            }
        }
    }

    #[test]
    fn default_p_sweep_is_the_400_point_grid() {
        let ps = default_p_sweep();
        assert_eq!(ps.len(), 400);
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(ps[0], GmicP::NEG_INFINITY);
        assert_eq!(ps[399], GmicP::INFINITY);
        assert!(ps.contains(&GmicP::new(-0.01).unwrap()));
        assert!(!ps.contains(&GmicP::new(0.0).unwrap()));
    }

    #[test]
    fn noise_grids_have_documented_shapes() {
        let d = default_noise_grid();
        assert_eq!(d.len(), 60);
        assert_eq!(d[0], 0.05);
        assert_eq!(d[59], 3.0);
        let m = means_noise_grid();
        assert_eq!(m.len(), 11);
        assert_eq!(m[0], 0.0);
        assert_eq!(m[10], 0.5);
        let s = seven_level_noise_grid();
        assert_eq!(s.len(), 7);
        assert_eq!(s[0], 0.05);
        assert_eq!(s[6], 3.0);
    }

    #[test]
    fn power_study_is_deterministic_and_complete() {
        let config = small_config();
        let a = power_study(&config).unwrap();
        let b = power_study(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 2 * 4 * 2);
        assert_eq!(a.failed_cells(), 0);
        for cell in &a.cells {
            let p = cell.power.unwrap();
            assert!((0.0..=1.0).contains(&p));
            assert!(cell.se.unwrap() >= 0.0);
        }
        // cells are nested relationship -> statistic -> noise
        assert_eq!(a.cells[0].relationship, Relationship::Linear);
        assert_eq!(a.cells[0].statistic, "mic");
        assert_eq!(a.cells[0].noise, 0.1);
        assert_eq!(a.cells[1].noise, 1.0);
        assert_eq!(a.cells[2].statistic, "gmic(-1)");

        // a mild-noise line is easy for every statistic at n = 40
        assert!(a.cell(Relationship::Linear, "mic", 0.1).unwrap().power.unwrap() > 0.8);
    }

    #[test]
    fn noiseless_linear_power_is_one() {
        let mut config = small_config();
        config.reps = 10;
        config.noise_grid = vec![0.0];
        config.relationships = vec![Relationship::Linear];
        config.statistics = default_statistics();
        let result = power_study(&config).unwrap();
        for cell in &result.cells {
            assert_eq!(cell.power.unwrap(), 1.0, "{}", cell.statistic);
        }
    }

    #[test]
    fn mean_study_respects_the_exponent_ordering() {
        let mut config = small_config();
        config.statistics = vec![
            StatisticSpec::minic(),
            StatisticSpec::gmic(GmicP::new(-1.0).unwrap()),
            StatisticSpec::mic(),
        ];
        let result = sample_mean_study(&config).unwrap();
        assert_eq!(result.failed_cells(), 0);
        for rel in &config.relationships {
            for &noise in &config.noise_grid {
                let lo = result.cell(*rel, "minic", noise).unwrap().mean.unwrap();
                let mid = result.cell(*rel, "gmic(-1)", noise).unwrap().mean.unwrap();
                let hi = result.cell(*rel, "mic", noise).unwrap().mean.unwrap();
                assert!(lo <= mid && mid <= hi, "{rel} at {noise}: {lo} {mid} {hi}");
            }
        }
        let again = sample_mean_study(&config).unwrap();
        assert_eq!(result, again);
    }
}
