//! Command-line surface behind the `gmic` binary.
//!
//! Exit codes: 0 success, 1 usage or validation problem, 2 data error,
//! 3 study completed with failed cells, 4 rejection (only with
//! `--exit-code-on-reject`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::charmat::{max_grid_bound, MineParams};
use crate::error::{Error, Result};
use crate::inference::{
    critical_value, evaluate_statistics, null_distribution, test_independence, NullTable,
    StatisticSpec,
};
use crate::report::{
    means_csv, means_json, parse_config_str, power_csv, power_json, RunManifest,
};
use crate::sample::Sample;
use crate::sim::{power_study, sample_mean_study, SimConfig};

/// Environment variable naming the default null-table directory.
pub const TABLE_DIR_ENV: &str = "GMIC_TABLE_DIR";

const DEFAULT_COMPUTE_STATS: &str =
    "mic,gmic(-inf),gmic(-1),gmic(0.1),gmic(inf),mcn(0.05),r2,dcor";

#[derive(Parser)]
#[command(
    name = "gmic",
    version,
    about = "Grid-based dependence statistics, independence tests and Monte Carlo studies"
)]
struct Cli {
    /// Cap on worker threads (default: all cores). Results do not depend
    /// on this setting.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute dependence statistics for a two-column CSV file.
    Compute(ComputeArgs),
    /// Build a null distribution table and save it to disk.
    Nulltable(NulltableArgs),
    /// Test a CSV file for independence against a saved null table.
    Test(TestArgs),
    /// Run a Monte Carlo power study.
    Power(StudyArgs),
    /// Run a Monte Carlo sample-mean study.
    Means(StudyArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// CSV file with two numeric columns and an optional `x,y` header.
    input: PathBuf,

    /// Comma-separated statistics to compute.
    #[arg(long, default_value = DEFAULT_COMPUTE_STATS)]
    stats: String,

    /// Grid budget exponent for the grid-based statistics.
    #[arg(long)]
    alpha: Option<f64>,

    /// Clump budget multiplier for the grid-based statistics.
    #[arg(long)]
    clump_factor: Option<usize>,
}

#[derive(Args)]
struct NulltableArgs {
    /// Statistic name: mic, minic, gmic, mcn(delta), r2 or dcor.
    #[arg(long)]
    stat: String,

    /// Exponent for `--stat gmic`.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,

    /// Sample size the table is built for.
    #[arg(long)]
    n: usize,

    /// Number of null draws.
    #[arg(long, default_value_t = 1000)]
    reps: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output file; defaults to a generated name in $GMIC_TABLE_DIR or the
    /// working directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Overwrite an existing file.
    #[arg(long)]
    force: bool,

    /// Grid budget exponent for the grid-based statistics.
    #[arg(long)]
    alpha: Option<f64>,

    /// Clump budget multiplier for the grid-based statistics.
    #[arg(long)]
    clump_factor: Option<usize>,
}

#[derive(Args)]
struct TestArgs {
    /// CSV file with two numeric columns and an optional `x,y` header.
    input: PathBuf,

    /// Null table file, as written by `nulltable`.
    #[arg(long)]
    table: PathBuf,

    #[arg(long, default_value_t = 0.05)]
    level: f64,

    /// Exit with code 4 instead of 0 when the test rejects.
    #[arg(long)]
    exit_code_on_reject: bool,
}

#[derive(Args)]
struct StudyArgs {
    /// Study configuration file of `key = value` lines; defaults apply for
    /// missing keys.
    #[arg(long, conflicts_with = "from_manifest")]
    config: Option<PathBuf>,

    /// Re-run the configuration recorded in a manifest; the data outputs
    /// are reproduced byte for byte.
    #[arg(long)]
    from_manifest: Option<PathBuf>,

    /// Output prefix; writes <prefix>.csv, <prefix>.json and
    /// <prefix>.manifest.json.
    #[arg(long)]
    out: Option<String>,
}

/// Runs the CLI on explicit arguments (first element is the program name)
/// and returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let command = cli.command;
    let run = move || dispatch(command);
    let outcome = match cli.threads {
        None => run(),
        Some(0) => Err(Error::InvalidParam {
            name: "threads",
            reason: "must be at least 1".into(),
        }),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(Error::Format(format!("cannot build thread pool: {e}"))),
        },
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Compute(args) => cmd_compute(args),
        Command::Nulltable(args) => cmd_nulltable(args),
        Command::Test(args) => cmd_test(args),
        Command::Power(args) => cmd_study(StudyKind::Power, args),
        Command::Means(args) => cmd_study(StudyKind::Means, args),
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidParam { .. } | Error::InvalidCuts { .. } | Error::SizeLimit { .. } => 1,
        _ => 2,
    }
}

/// Reads a two-column CSV with an optional `x,y` header.
fn read_xy_csv(path: &Path) -> Result<Sample> {
    let text = std::fs::read_to_string(path)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut saw_data = false;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        if !saw_data {
            let lower = line.to_ascii_lowercase().replace(' ', "");
            if lower == "x,y" {
                saw_data = true;
                continue;
            }
        }
        saw_data = true;
        let mut fields = line.split(',');
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a.trim(), b.trim()),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected exactly two comma-separated values".into(),
                })
            }
        };
        let parse = |v: &str| -> Result<f64> {
            v.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("cannot parse `{v}` as a number"),
            })
        };
        xs.push(parse(a)?);
        ys.push(parse(b)?);
    }
    Sample::new(xs, ys)
}

/// Splits a comma-separated statistic list, dropping duplicates.
fn parse_stat_list(list: &str, params: MineParams) -> Result<Vec<StatisticSpec>> {
    let mut specs: Vec<StatisticSpec> = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let mut spec: StatisticSpec = part.parse()?;
        if spec.is_grid_based() {
            spec = spec.with_params(params);
        }
        if !specs.contains(&spec) {
            specs.push(spec);
        }
    }
    if specs.is_empty() {
        return Err(Error::InvalidParam {
            name: "stats",
            reason: "need at least one statistic".into(),
        });
    }
    Ok(specs)
}

fn mine_params(alpha: Option<f64>, clump_factor: Option<usize>) -> Result<MineParams> {
    let d = MineParams::default();
    MineParams::new(alpha.unwrap_or(d.alpha), clump_factor.unwrap_or(d.clump_factor))
}

#[derive(Serialize)]
struct ComputeOut {
    schema: &'static str,
    input: String,
    n: usize,
    /// Grid budget B(n): shapes satisfy i * j <= bound.
    bound: usize,
    alpha: f64,
    clump_factor: usize,
    scores: BTreeMap<String, f64>,
}

fn cmd_compute(args: ComputeArgs) -> Result<i32> {
    let params = mine_params(args.alpha, args.clump_factor)?;
    let specs = parse_stat_list(&args.stats, params)?;
    let sample = read_xy_csv(&args.input)?;
    let values = evaluate_statistics(&specs, &sample)?;
    let out = ComputeOut {
        schema: "gmic.compute.v1",
        input: args.input.display().to_string(),
        n: sample.len(),
        bound: max_grid_bound(sample.len(), params.alpha),
        alpha: params.alpha,
        clump_factor: params.clump_factor,
        scores: specs
            .iter()
            .map(|s| s.label())
            .zip(values.iter().copied())
            .collect(),
    };
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    Ok(0)
}

/// Builds the statistic spec for `nulltable` from `--stat` and `--p`.
fn nulltable_spec(stat: &str, p: Option<&str>, params: MineParams) -> Result<StatisticSpec> {
    let label = match p {
        Some(p) => {
            if stat != "gmic" {
                return Err(Error::InvalidParam {
                    name: "p",
                    reason: format!("--p only applies to --stat gmic, not `{stat}`"),
                });
            }
            format!("gmic({p})")
        }
        None if stat == "gmic" => {
            return Err(Error::InvalidParam {
                name: "p",
                reason: "--stat gmic needs --p or the gmic(p) form".into(),
            })
        }
        None => stat.to_string(),
    };
    let mut spec: StatisticSpec = label.parse()?;
    if spec.is_grid_based() {
        spec = spec.with_params(params);
    }
    Ok(spec)
}

/// Generated table file name, safe for ordinary file systems.
fn table_file_name(spec: &StatisticSpec, n: usize, reps: usize, seed: u64) -> String {
    let label: String = spec
        .label()
        .chars()
        .map(|c| match c {
            '(' => '_',
            ')' => '_',
            c => c,
        })
        .collect();
    format!("{}_n{n}_r{reps}_s{seed}.nulltable", label.trim_end_matches('_'))
}

fn cmd_nulltable(args: NulltableArgs) -> Result<i32> {
    let params = mine_params(args.alpha, args.clump_factor)?;
    let spec = nulltable_spec(&args.stat, args.p.as_deref(), params)?;
    let out = args.out.unwrap_or_else(|| {
        let dir = std::env::var_os(TABLE_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from);
        dir.join(table_file_name(&spec, args.n, args.reps, args.seed))
    });
    if out.exists() && !args.force {
        return Err(Error::InvalidParam {
            name: "out",
            reason: format!("{} exists; pass --force to overwrite", out.display()),
        });
    }
    let table = null_distribution(&spec, args.n, args.reps, args.seed)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    table.write_to_path(&out)?;
    println!("wrote {}", out.display());
    for q in [0.90, 0.95, 0.99] {
        println!("quantile {q:.2}: {:?}", critical_value(&table, 1.0 - q)?);
    }
    Ok(0)
}

#[derive(Serialize)]
struct TestOut {
    schema: &'static str,
    input: String,
    table: String,
    statistic: String,
    n: usize,
    observed: f64,
    critical_value: f64,
    p_value: f64,
    reject: bool,
    level: f64,
}

fn cmd_test(args: TestArgs) -> Result<i32> {
    let table = NullTable::read_from_path(&args.table)?;
    let sample = read_xy_csv(&args.input)?;
    let spec = *table.spec();
    let result = test_independence(&sample, &spec, &table, args.level)?;
    let out = TestOut {
        schema: "gmic.test.v1",
        input: args.input.display().to_string(),
        table: args.table.display().to_string(),
        statistic: spec.label(),
        n: sample.len(),
        observed: result.statistic,
        critical_value: result.critical_value,
        p_value: result.p_value,
        reject: result.reject,
        level: result.level,
    };
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    Ok(if args.exit_code_on_reject && result.reject {
        4
    } else {
        0
    })
}

#[derive(Clone, Copy)]
enum StudyKind {
    Power,
    Means,
}

impl StudyKind {
    fn name(self) -> &'static str {
        match self {
            StudyKind::Power => "power",
            StudyKind::Means => "means",
        }
    }

    fn defaults(self) -> SimConfig {
        match self {
            StudyKind::Power => SimConfig::power_defaults(),
            StudyKind::Means => SimConfig::means_defaults(),
        }
    }
}

fn cmd_study(kind: StudyKind, args: StudyArgs) -> Result<i32> {
    let config = match (&args.from_manifest, &args.config) {
        (Some(path), _) => {
            let manifest = RunManifest::read_from_path(path)?;
            if manifest.command != kind.name() {
                return Err(Error::InvalidParam {
                    name: "from_manifest",
                    reason: format!(
                        "manifest records a `{}` run; use the `{}` subcommand",
                        manifest.command, manifest.command
                    ),
                });
            }
            manifest.sim_config()?
        }
        (None, Some(path)) => parse_config_str(&std::fs::read_to_string(path)?, kind.defaults())?,
        (None, None) => kind.defaults(),
    };

    let prefix = args.out.unwrap_or_else(|| kind.name().to_string());
    let csv_path = PathBuf::from(format!("{prefix}.csv"));
    let json_path = PathBuf::from(format!("{prefix}.json"));
    let manifest_path = PathBuf::from(format!("{prefix}.manifest.json"));
    if let Some(parent) = csv_path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }

    let (csv, json, failed) = match kind {
        StudyKind::Power => {
            let result = power_study(&config)?;
            (power_csv(&result), power_json(&result), result.failed_cells())
        }
        StudyKind::Means => {
            let result = sample_mean_study(&config)?;
            (means_csv(&result), means_json(&result), result.failed_cells())
        }
    };
    std::fs::write(&csv_path, csv)?;
    std::fs::write(&json_path, json)?;
    let manifest = RunManifest::new(
        kind.name(),
        &config,
        vec![
            csv_path.display().to_string(),
            json_path.display().to_string(),
        ],
    );
    manifest.write_to_path(&manifest_path)?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());
    println!("wrote {}", manifest_path.display());
    if failed > 0 {
        eprintln!("{failed} cells failed; see the error column");
        return Ok(3);
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_csv(dir: &Path, name: &str, content: &str) -> PathBuf {
        let path = dir.join(name);
        std::fs::write(&path, content).unwrap();
        path
    }

    #[test]
    fn csv_reader_accepts_header_and_reports_lines() {
        let dir = tempfile::tempdir().unwrap();
        let ok = write_csv(dir.path(), "ok.csv", "x,y\n1,2\n3,4\n\n5,6\n");
        let sample = read_xy_csv(&ok).unwrap();
        assert_eq!(sample.xs(), [1.0, 3.0, 5.0]);
        assert_eq!(sample.ys(), [2.0, 4.0, 6.0]);

        let bad = write_csv(dir.path(), "bad.csv", "x,y\n1,2\n3,oops\n");
        let err = read_xy_csv(&bad).unwrap_err().to_string();
        assert!(err.starts_with("line 3"), "{err}");

        let wide = write_csv(dir.path(), "wide.csv", "1,2,3\n");
        let err = read_xy_csv(&wide).unwrap_err().to_string();
        assert!(err.contains("two comma-separated"), "{err}");
    }

    #[test]
    fn stat_lists_parse_and_dedupe() {
        let specs = parse_stat_list("mic, gmic(-1), mic", MineParams::default()).unwrap();
        assert_eq!(specs.len(), 2);
        assert!(parse_stat_list("", MineParams::default()).is_err());
        assert!(parse_stat_list("unknown", MineParams::default()).is_err());
    }

    #[test]
    fn nulltable_spec_combines_stat_and_p() {
        let params = MineParams::default();
        let spec = nulltable_spec("gmic", Some("-1"), params).unwrap();
        assert_eq!(spec.label(), "gmic(-1)");
        let spec = nulltable_spec("gmic(-1)", None, params).unwrap();
        assert_eq!(spec.label(), "gmic(-1)");
        assert!(nulltable_spec("gmic", None, params).is_err());
        assert!(nulltable_spec("mic", Some("-1"), params).is_err());
        assert_eq!(
            table_file_name(&spec, 320, 1000, 0),
            "gmic_-1_n320_r1000_s0.nulltable"
        );
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_from(["gmic", "frobnicate"]), 1);
        assert_eq!(run_from(["gmic", "nulltable", "--stat", "mic"]), 1);
        assert_eq!(run_from(["gmic", "--help"]), 0);
    }

    #[test]
    fn missing_input_exits_two() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.csv").display().to_string();
        assert_eq!(run_from(["gmic", "compute", &missing]), 2);
    }
}
