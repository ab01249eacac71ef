//! End-to-end tests of the `gmic` binary: argument handling, file formats,
//! exit codes and byte-level reproducibility of study outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gmic() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gmic"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_file(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn quadratic_csv(n: usize) -> String {
    let mut text = String::from("x,y\n");
    for i in 0..n {
        let x = (i as f64 + 0.5) / n as f64;
        let y = 4.0 * (x - 0.5) * (x - 0.5);
        text.push_str(&format!("{x},{y}\n"));
    }
    text
}

fn line_csv(n: usize) -> String {
    (0..n).map(|i| format!("{i},{i}\n")).collect()
}

#[test]
fn compute_reports_the_default_statistic_suite() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "quad.csv", &quadratic_csv(60));
    let out = run(gmic().arg("compute").arg(&input));
    let json = stdout_json(&out);

    assert_eq!(json["schema"], "gmic.compute.v1");
    assert_eq!(json["n"], 60);
    assert_eq!(json["alpha"], 0.6);
    assert_eq!(json["clump_factor"], 15);
    assert_eq!(json["bound"], 11);

    let scores = json["scores"].as_object().unwrap();
    let keys: Vec<&str> = scores.keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "dcor",
            "gmic(-1)",
            "gmic(-inf)",
            "gmic(0.1)",
            "gmic(inf)",
            "mcn(0.05)",
            "mic",
            "r2"
        ]
    );
    let get = |k: &str| scores[k].as_f64().unwrap();
    assert_eq!(get("gmic(inf)"), get("mic"));
    assert!(get("gmic(-inf)") <= get("gmic(-1)"));
    assert!(get("gmic(-1)") <= get("mic"));
    assert!(get("mic") > 0.9, "noiseless parabola scores near 1");
    assert!(get("r2") < 0.05, "symmetric parabola has no linear signal");
}

#[test]
fn compute_honors_stat_and_grid_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "line.csv", &line_csv(30));
    let out = run(gmic()
        .args(["compute", "--stats", "mic", "--alpha", "1.0", "--clump-factor", "30"])
        .arg(&input));
    let json = stdout_json(&out);
    assert_eq!(json["alpha"], 1.0);
    assert_eq!(json["bound"], 30);
    let scores = json["scores"].as_object().unwrap();
    assert_eq!(scores.len(), 1);
    assert_eq!(scores["mic"], 1.0);
}

#[test]
fn compute_rejects_bad_csv_and_bad_stats() {
    let dir = tempfile::tempdir().unwrap();
    let bad_number = write_file(dir.path(), "bad.csv", "x,y\n1,2\n3,oops\n");
    let out = run(gmic().arg("compute").arg(&bad_number));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let nan = write_file(dir.path(), "nan.csv", "1,2\nnan,4\n5,6\n7,8\n");
    let out = run(gmic().arg("compute").arg(&nan));
    assert_eq!(out.status.code(), Some(2));

    let fine = write_file(dir.path(), "fine.csv", &line_csv(10));
    let out = run(gmic().args(["compute", "--stats", "nope"]).arg(&fine));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn nulltable_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = dir.path().join("a.nulltable");
    let t2 = dir.path().join("b.nulltable");
    for out in [&t1, &t2] {
        let res = run(gmic()
            .args(["nulltable", "--stat", "mic", "--n", "20", "--reps", "100", "--seed", "7"])
            .arg("--out")
            .arg(out));
        assert!(res.status.success());
        let text = String::from_utf8(res.stdout).unwrap();
        assert!(text.contains("quantile 0.95"), "{text}");
    }
    let a = std::fs::read(&t1).unwrap();
    let b = std::fs::read(&t2).unwrap();
    assert_eq!(a, b, "same seed writes identical tables");
    assert!(String::from_utf8(a).unwrap().starts_with("gmic nulltable v1"));
}

#[test]
fn nulltable_refuses_overwrite_without_force() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.nulltable");
    let args = ["nulltable", "--stat", "r2", "--n", "10", "--reps", "100"];
    assert!(run(gmic().args(args).arg("--out").arg(&path)).status.success());
    let refused = run(gmic().args(args).arg("--out").arg(&path));
    assert_eq!(refused.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("--force"));
    let forced = run(gmic().args(args).arg("--out").arg(&path).arg("--force"));
    assert!(forced.status.success());
}

#[test]
fn nulltable_rejects_thin_tables_and_bad_specs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.nulltable");
    let out = run(gmic()
        .args(["nulltable", "--stat", "mic", "--n", "10", "--reps", "50"])
        .arg("--out")
        .arg(&path));
    assert_eq!(out.status.code(), Some(1), "reps below 100 is a validation error");

    let out = run(gmic().args(["nulltable", "--stat", "gmic", "--n", "10"]));
    assert_eq!(out.status.code(), Some(1), "bare gmic needs --p");
}

#[test]
fn nulltable_defaults_to_the_env_directory() {
    let dir = tempfile::tempdir().unwrap();
    let res = run(gmic()
        .args(["nulltable", "--stat", "gmic", "--p", "-1", "--n", "12", "--reps", "100"])
        .env("GMIC_TABLE_DIR", dir.path()));
    assert!(res.status.success());
    let expected = dir.path().join("gmic_-1_n12_r100_s0.nulltable");
    assert!(expected.is_file(), "table lands in $GMIC_TABLE_DIR");
}

#[test]
fn test_subcommand_rejects_dependence_and_honors_exit_flag() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("mic.nulltable");
    assert!(run(gmic()
        .args(["nulltable", "--stat", "mic", "--n", "30", "--reps", "200"])
        .arg("--out")
        .arg(&table))
    .status
    .success());

    let dependent = write_file(dir.path(), "dep.csv", &line_csv(30));
    let out = run(gmic().arg("test").arg(&dependent).arg("--table").arg(&table));
    let json = stdout_json(&out);
    assert_eq!(json["schema"], "gmic.test.v1");
    assert_eq!(json["statistic"], "mic");
    assert_eq!(json["observed"], 1.0);
    assert_eq!(json["reject"], true);
    let p = json["p_value"].as_f64().unwrap();
    assert!(p <= 1.0 / 201.0 + 1e-12, "p = {p}");

    let out = run(gmic()
        .arg("test")
        .arg(&dependent)
        .args(["--exit-code-on-reject", "--table"])
        .arg(&table));
    assert_eq!(out.status.code(), Some(4));

    let flat: String = (0..30).map(|i| format!("{i},3.5\n")).collect();
    let flat = write_file(dir.path(), "flat.csv", &flat);
    let out = run(gmic()
        .arg("test")
        .arg(&flat)
        .args(["--exit-code-on-reject", "--table"])
        .arg(&table));
    let json = stdout_json(&out);
    assert_eq!(json["reject"], false);
    assert_eq!(json["p_value"], 1.0);
}

#[test]
fn test_subcommand_flags_sample_size_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("mic.nulltable");
    assert!(run(gmic()
        .args(["nulltable", "--stat", "mic", "--n", "20", "--reps", "100"])
        .arg("--out")
        .arg(&table))
    .status
    .success());
    let short = write_file(dir.path(), "short.csv", &line_csv(15));
    let out = run(gmic().arg("test").arg(&short).arg("--table").arg(&table));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("20") && err.contains("15"), "{err}");
}

#[test]
fn test_subcommand_rejects_corrupt_tables() {
    let dir = tempfile::tempdir().unwrap();
    let table = write_file(dir.path(), "junk.nulltable", "not a table\n");
    let data = write_file(dir.path(), "d.csv", &line_csv(10));
    let out = run(gmic().arg("test").arg(&data).arg("--table").arg(&table));
    assert_eq!(out.status.code(), Some(2));
}

const SMALL_POWER_CONFIG: &str = "\
# smoke-sized power study
n = 24
reps = 10
null_reps = 100
seed = 5
relationships = linear, step
statistics = mic, gmic(-1)
noise_grid = 0.25, 1.0
";

#[test]
fn power_study_writes_csv_json_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_file(dir.path(), "cfg", SMALL_POWER_CONFIG);
    let prefix = dir.path().join("run").display().to_string();
    let out = run(gmic()
        .arg("power")
        .arg("--config")
        .arg(&config)
        .args(["--out", &prefix]));
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = std::fs::read_to_string(format!("{prefix}.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# gmic.power.v1"));
    assert_eq!(
        lines.next(),
        Some("relationship,statistic,noise,reps,power,se,cutoff,error")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 2 * 2, "relationships x statistics x noise");
    assert!(rows.iter().all(|r| r.starts_with("linear,") || r.starts_with("step,")));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{prefix}.json")).unwrap()).unwrap();
    assert_eq!(json["schema"], "gmic.power.v1");
    assert_eq!(json["cutoffs"]["mic"], json["results"]["linear"]["mic"][0]["cutoff"]);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{prefix}.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["schema"], "gmic.manifest.v1");
    assert_eq!(manifest["command"], "power");
    assert_eq!(manifest["seed"], 5);
    assert!(manifest["config"].as_str().unwrap().contains("n = 24"));
}

#[test]
fn manifest_replay_reproduces_outputs_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_file(dir.path(), "cfg", SMALL_POWER_CONFIG);
    let first = dir.path().join("first").display().to_string();
    let again = dir.path().join("again").display().to_string();

    let out = run(gmic()
        .arg("power")
        .arg("--config")
        .arg(&config)
        .args(["--out", &first, "--threads", "1"]));
    assert!(out.status.success());

    let out = run(gmic()
        .arg("power")
        .arg("--from-manifest")
        .arg(format!("{first}.manifest.json"))
        .args(["--out", &again, "--threads", "4"]));
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    for ext in ["csv", "json"] {
        let a = std::fs::read(format!("{first}.{ext}")).unwrap();
        let b = std::fs::read(format!("{again}.{ext}")).unwrap();
        assert_eq!(a, b, "{ext} outputs differ across replay and thread count");
    }
}

#[test]
fn manifest_command_mismatch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_file(dir.path(), "cfg", SMALL_POWER_CONFIG);
    let prefix = dir.path().join("p").display().to_string();
    assert!(run(gmic()
        .arg("power")
        .arg("--config")
        .arg(&config)
        .args(["--out", &prefix]))
    .status
    .success());
    let out = run(gmic()
        .arg("means")
        .arg("--from-manifest")
        .arg(format!("{prefix}.manifest.json")));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("power"));
}

#[test]
fn means_study_writes_the_means_schema() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_file(
        dir.path(),
        "cfg",
        "n = 20\nreps = 10\nseed = 2\nrelationships = quadratic\nstatistics = minic, mic\nnoise_grid = 0.5\n",
    );
    let prefix = dir.path().join("m").display().to_string();
    let out = run(gmic()
        .arg("means")
        .arg("--config")
        .arg(&config)
        .args(["--out", &prefix]));
    assert!(out.status.success());

    let csv = std::fs::read_to_string(format!("{prefix}.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# gmic.means.v1"));
    assert_eq!(lines.next(), Some("relationship,statistic,noise,reps,mean,se,error"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{prefix}.json")).unwrap()).unwrap();
    let cells = &json["results"]["quadratic"];
    let minic = cells["minic"][0]["mean"].as_f64().unwrap();
    let mic = cells["mic"][0]["mean"].as_f64().unwrap();
    assert!(minic <= mic, "minic mean {minic} above mic mean {mic}");
}

#[test]
fn bad_config_lines_are_usage_errors_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_file(dir.path(), "cfg", "n = 24\nbogus_key = 1\n");
    let out = run(gmic().arg("power").arg("--config").arg(&config));
    assert_eq!(out.status.code(), Some(2), "parse errors are data errors");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("bogus_key"), "{err}");

    let config = write_file(dir.path(), "cfg2", "reps = 3\n");
    let out = run(gmic().arg("power").arg("--config").arg(&config));
    assert_eq!(out.status.code(), Some(1), "failed validation is a usage error");
}

#[test]
fn zero_threads_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "d.csv", &line_csv(10));
    let out = run(gmic().args(["compute", "--threads", "0"]).arg(&input));
    assert_eq!(out.status.code(), Some(1));
}
