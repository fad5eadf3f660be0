//! End-to-end checks of the binary and the CSV contract: exit codes, raw
//! report content, byte-level reproducibility, and spot re-validation of
//! emitted rows against direct library calls.

use mcmetric::families::{bernoulli_instance, incoherent_truth, one_param_instance, split_graph, rip_extremal_instance};
use mcmetric::landscape::{gd_run, OptimizerConfig};
use mcmetric::metric::exact_metric;
use mcmetric::{io, RandomStream};
use mcmetric_cli::commands::transition;
use mcmetric_cli::csvfmt::parse_float;
use std::path::{Path, PathBuf};
use std::process::Command;

fn binary() -> PathBuf {
    let mut path = std::env::current_exe().unwrap();
    path.pop(); // deps/
    path.pop(); // debug/ or release/
    path.push(format!("mcmetric{}", std::env::consts::EXE_SUFFIX));
    path
}

fn workdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mcmetric-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(binary()).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn analyze_reports_the_tight_rip_instance() {
    let dir = workdir();
    let path = dir.join("rip55.json");
    io::write_instance(&path, &rip_extremal_instance(5, 0.5).unwrap()).unwrap();
    let (code, stdout, _) = run_cli(&[
        "analyze",
        "--instance",
        path.to_str().unwrap(),
        "--alpha",
        "0.5",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("value = 73.000000"), "report:\n{stdout}");
    assert!(stdout.contains("holds (tight)"), "report:\n{stdout}");
    assert!(stdout.contains("kind = bipartite"), "report:\n{stdout}");
}

#[test]
fn analyze_reports_degenerate_and_zero_truth_instances() {
    let dir = workdir();
    // degenerate: edgeless support subgraph
    let graph = split_graph(5, 5).unwrap();
    let inst = one_param_instance(&graph, &[0, 1, 2, 3, 4], 0.0).unwrap();
    let path = dir.join("degenerate.json");
    io::write_instance(&path, &inst).unwrap();
    let (code, stdout, _) =
        run_cli(&["analyze", "--instance", path.to_str().unwrap(), "--alpha", "0.5"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("degenerate: yes"), "report:\n{stdout}");
    assert!(stdout.contains("value = inf") || stdout.contains("value = inf".trim()), "report:\n{stdout}");

    // zero truth routes to the dichotomy
    let zero = mcmetric::Instance::new(
        mcmetric::WeightMatrix::new(2, vec![0.25; 4]).unwrap(),
        mcmetric::GroundTruth::new(vec![0.0, 0.0]),
    )
    .unwrap()
    .normalize()
    .unwrap();
    let path = dir.join("zero.json");
    io::write_instance(&path, &zero).unwrap();
    let (code, stdout, _) =
        run_cli(&["analyze", "--instance", path.to_str().unwrap(), "--alpha", "0.5"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("zero-truth verdict"), "report:\n{stdout}");
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = workdir();
    // parse error -> 2
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"n\": 2, \"C\": [[0.5").unwrap();
    let (code, _, stderr) =
        run_cli(&["analyze", "--instance", bad.to_str().unwrap(), "--alpha", "0.5"]);
    assert_eq!(code, 2, "stderr: {stderr}");
    // missing file -> 2
    let (code, _, _) =
        run_cli(&["analyze", "--instance", "/nonexistent.json", "--alpha", "0.5"]);
    assert_eq!(code, 2);
    // hypothesis violation (eta must exceed 2) -> 3
    let (code, _, stderr) = run_cli(&[
        "bernoulli", "--n", "8", "--mu", "1", "--eta", "1.5", "--trials", "2", "--seed", "1",
    ]);
    assert_eq!(code, 3, "stderr: {stderr}");
    // metric_min hypothesis n >= 5 -> 3
    let (code, _, _) = run_cli(&["min-curve", "--n", "4", "--alpha-grid", "0.5,0.6"]);
    assert_eq!(code, 3);
    // success -> 0
    let (code, _, _) = run_cli(&["min-curve", "--n", "5", "--alpha-grid", "0.5,0.6"]);
    assert_eq!(code, 0);
}

#[test]
fn identical_seeds_give_byte_identical_files() {
    let dir = workdir();
    let out_a = dir.join("a.csv");
    let out_b = dir.join("b.csv");
    for out in [&out_a, &out_b] {
        let (code, _, stderr) = run_cli(&[
            "transition",
            "--n",
            "8",
            "--eta",
            "0.4,1.2",
            "--trials",
            "24",
            "--seed",
            "777",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "stderr: {stderr}");
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty() && a == b, "outputs differ between identical runs");
}

#[test]
fn run_config_file_mirrors_flags() {
    let dir = workdir();
    let flag_out = dir.join("flags.csv");
    let cfg_out = dir.join("config.csv");
    let (code, _, _) = run_cli(&[
        "min-curve", "--n", "20", "--alpha-grid", "0.5:0.1:0.9", "--out",
        flag_out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let config = serde_json::json!({
        "command": "min-curve",
        "n_list": [20],
        "alpha_grid": [0.5, 0.6, 0.7, 0.8, 0.9],
        "out": cfg_out,
    });
    let cfg_path = dir.join("curve.json");
    std::fs::write(&cfg_path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    let (code, _, stderr) = run_cli(&["run", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert_eq!(
        std::fs::read_to_string(&flag_out).unwrap(),
        std::fs::read_to_string(&cfg_out).unwrap()
    );
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

#[test]
fn transition_detail_rows_revalidate_against_the_library() {
    let dir = workdir();
    let out = dir.join("trans.csv");
    let detail = dir.join("detail.csv");
    let n = 10usize;
    let etas = [0.5, 1.3];
    let seed = 4242u64;
    let trials = 50usize;
    let (code, _, stderr) = run_cli(&[
        "transition",
        "--n",
        &n.to_string(),
        "--eta",
        "0.5,1.3",
        "--trials",
        &trials.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        out.to_str().unwrap(),
        "--detail-out",
        detail.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "stderr: {stderr}");

    let (header, rows) = csv_rows(&detail);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert!(rows.len() >= trials * etas.len());
    // re-validate one percent of the rows (at least three) by re-running the
    // trial from its recorded stream
    let step = (rows.len() / rows.len().min(100)).max(1);
    let mut checked = 0;
    for row in rows.iter().step_by(step).take(rows.len().div_ceil(100).max(3)) {
        let eta: f64 = parse_float(&row[col("eta")]).unwrap();
        let trial: usize = row[col("trial")].parse().unwrap();
        let eta_idx = etas.iter().position(|&e| (e - eta).abs() < 1e-12).unwrap();
        let inst = transition::grid_instance(n, eta).unwrap();
        let cp = gd_run(
            &inst,
            &OptimizerConfig::default(),
            transition::stream_for(seed, 0, eta_idx, trial),
        )
        .unwrap();
        let distance: f64 = parse_float(&row[col("distance")]).unwrap();
        let classification = &row[col("classification")];
        assert_eq!(&cp.classification.to_string(), classification, "row {row:?}");
        assert!((cp.distance_to_truth - distance).abs() <= 1e-15 * (1.0 + distance));
        checked += 1;
    }
    assert!(checked >= 3);

    // rate rows must aggregate the detail rows
    let (header, rows) = csv_rows(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    for row in rows.iter().filter(|r| r[0] == "rate") {
        let successes: usize = row[col("successes")].parse().unwrap();
        let rate: f64 = parse_float(&row[col("success_rate")]).unwrap();
        assert!((rate - successes as f64 / trials as f64).abs() < 1e-15);
    }
}

#[test]
fn bernoulli_rows_revalidate_against_the_library() {
    let dir = workdir();
    let out = dir.join("bern.csv");
    let (code, _, stderr) = run_cli(&[
        "bernoulli", "--n", "10", "--mu", "1", "--eta", "3", "--trials", "40", "--seed", "5",
        "--alpha", "0.85", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "stderr: {stderr}");
    let (header, rows) = csv_rows(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let truth = incoherent_truth(10, 1.0).unwrap();
    let mut checked = 0;
    for row in rows.iter().filter(|r| r[0] != "summary").step_by(13) {
        let trial: u64 = row[col("trial")].parse().unwrap();
        let (inst, meta) =
            bernoulli_instance(10, 1.0, truth.clone(), RandomStream::new(5, trial)).unwrap();
        let value = exact_metric(&inst, 0.85).unwrap().value;
        assert_eq!(meta.nonzero_ordered.to_string(), row[col("nonzero_ordered")]);
        let recorded: f64 = parse_float(&row[col("metric_value")]).unwrap();
        assert!((value - recorded).abs() <= 1e-12 * value, "trial {trial}");
        checked += 1;
    }
    assert!(checked >= 3);
}
