//! End-to-end tests of the `detmix` binary: exit codes, file outputs,
//! config precedence, and byte-level reproducibility.

use std::path::Path;
use std::process::{Command, Output};

use detmix_core::games::liars_dice::{LiarsDiceConfig, LiarsDiceGame};
use detmix_core::policy::load_policy_file;
use detmix_core::Game;

fn detmix(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detmix"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn detmix")
}

fn data_lines(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

const FAST: &[&str] = &[
    "--faces",
    "2",
    "--budget",
    "80",
    "--passes-per-batch",
    "2",
    "--max-batches",
    "40",
    "--tolerance",
    "0.05",
];

#[test]
fn exploit_grid_emits_one_row_per_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["exploit"];
    args.extend_from_slice(FAST);
    args.extend_from_slice(&[
        "--lambdas",
        "0.0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0",
        "--output",
        "sweep.csv",
    ]);
    let out = detmix(&args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines = data_lines(&csv);
    assert_eq!(lines[0], "lambda,br_utility");
    assert_eq!(lines.len(), 12);
    let meta = std::fs::read_to_string(dir.path().join("sweep.csv.meta")).unwrap();
    assert_eq!(meta.matches("policy.").count(), 11);
    for line in meta.lines().filter(|l| l.starts_with("policy.")) {
        let hash = line.split('=').nth(1).unwrap();
        assert_eq!(hash.len(), 64);
        assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    }
}

#[test]
fn worker_count_never_changes_csv_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for (workers, name) in [("1", "a.csv"), ("2", "b.csv")] {
        let mut args = vec!["tssr"];
        args.extend_from_slice(FAST);
        args.extend_from_slice(&[
            "--lambdas",
            "0.0,0.5,1.0",
            "--workers",
            workers,
            "--output",
            name,
        ]);
        let out = detmix(&args, dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn policy_subcommand_writes_a_loadable_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["policy"];
    args.extend_from_slice(FAST);
    args.extend_from_slice(&["--lambdas", "0.5", "--seat", "1", "--output", "seat1.policy"]);
    let out = detmix(&args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let game = LiarsDiceGame::new(LiarsDiceConfig::with_faces(2)).unwrap();
    let policy = load_policy_file(&game, dir.path().join("seat1.policy")).unwrap();
    assert!(!policy.rows().is_empty());
    assert_eq!(policy.meta()["game"], game.name());
    assert_eq!(policy.meta()["seat"], "1");
    assert_eq!(policy.meta()["lambda"], "0.5");
    assert_eq!(policy.meta()["algorithm"], "pimc");
}

#[test]
fn unknown_config_keys_are_rejected_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "faces = 2\nbogus_key = 1\n").unwrap();
    let out = detmix(&["exploit", "--config", "bad.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus_key"));
}

#[test]
fn out_of_range_lambda_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = detmix(&["exploit", "--lambdas", "0.0,1.5"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stabilization_cap_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = detmix(
        &[
            "policy",
            "--faces",
            "2",
            "--algorithm",
            "ismcts",
            "--budget",
            "30",
            "--passes-per-batch",
            "1",
            "--max-batches",
            "2",
            "--tolerance",
            "1e-12",
            "--lambdas",
            "0.5",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not stabilize"));
}

#[test]
fn match_sweep_reports_rates_within_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["match"];
    args.extend_from_slice(FAST);
    args.extend_from_slice(&[
        "--lambdas",
        "0.0,1.0",
        "--games",
        "60",
        "--output",
        "m.csv",
    ]);
    let out = detmix(&args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("m.csv")).unwrap();
    let lines = data_lines(&csv);
    assert_eq!(lines[0], "lambda,win_rate,ci_halfwidth");
    assert_eq!(lines.len(), 3);
    for line in &lines[1..] {
        let rate: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&rate), "rate {rate}");
    }
}

#[test]
fn heatmap_covers_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["heatmap"];
    args.extend_from_slice(FAST);
    args.extend_from_slice(&["--grid0", "0.0,1.0", "--grid1", "0.5", "--output", "h.csv"]);
    let out = detmix(&args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("h.csv")).unwrap();
    let lines = data_lines(&csv);
    assert_eq!(lines[0], "lambda0,lambda1,br_utility");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0,0.5,"));
    assert!(lines[2].starts_with("1,0.5,"));
}

#[test]
fn cli_flags_override_config_file_values() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("base.toml"),
        "faces = 2\nlambdas = \"0.0\"\nbudget = 80\npasses_per_batch = 2\nmax_batches = 40\ntolerance = 0.05\nseed = 4\n",
    )
    .unwrap();
    let out = detmix(
        &["policy", "--config", "base.toml", "--faces", "3", "--output", "p.policy"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let meta = std::fs::read_to_string(dir.path().join("p.policy.meta")).unwrap();
    assert!(meta.contains("faces=3"), "{meta}");
    assert!(meta.contains("lambdas=0.0"), "{meta}");
    assert!(meta.contains("seed=4"), "{meta}");
}

#[test]
fn environment_variable_sets_the_default_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("artifacts");
    std::fs::create_dir(&out_dir).unwrap();
    let mut args = vec!["policy"];
    args.extend_from_slice(FAST);
    args.extend_from_slice(&["--lambdas", "0.0"]);
    let out = Command::new(env!("CARGO_BIN_EXE_detmix"))
        .args(&args)
        .env("DETMIX_OUT_DIR", &out_dir)
        .current_dir(dir.path())
        .output()
        .expect("spawn detmix");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("policy.policy").is_file());
    assert!(out_dir.join("policy.policy.meta").is_file());
}
