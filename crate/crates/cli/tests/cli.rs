use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn catbell(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_catbell"))
        .args(args)
        .current_dir(dir)
        .env_remove("CATBELL_WORKERS")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn reference() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../results/reference_violation.json")
}

fn value(stdout: &str, key: &str) -> f64 {
    stdout
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {stdout}"))
        .parse()
        .unwrap()
}

const VACUUM: [&str; 15] = [
    "eval", "--sigma", "0", "--eta", "0", "--phi", "0", "--z", "0", "--zp", "0", "--w", "0",
    "--wp", "0",
];

#[test]
fn eval_vacuum_is_two() {
    let dir = TempDir::new().unwrap();
    let r = catbell(dir.path(), &VACUUM);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(value(&r.stdout, "chsh"), 2.0);
    assert!(r.stdout.contains("classification=classical"));
}

#[test]
fn eval_degenerate_state() {
    let dir = TempDir::new().unwrap();
    let mut args = VACUUM;
    args[6] = "pi";
    let r = catbell(dir.path(), &args);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("degenerate cat state"), "{}", r.stderr);
    assert!(r.stderr.contains("normalization denominator"));
    assert!(r.stdout.is_empty());
}

#[test]
fn eval_parse_errors_name_the_key() {
    let dir = TempDir::new().unwrap();
    let mut args = VACUUM;
    args[10] = "1+2j";
    let r = catbell(dir.path(), &args);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--zp:"), "{}", r.stderr);

    let r = catbell(dir.path(), &VACUUM[..13]);
    assert_eq!(r.code, 1);
    assert!(
        r.stderr.contains("--wp: required but missing"),
        "{}",
        r.stderr
    );

    let r = catbell(dir.path(), &["eval", "--no-such-flag"]);
    assert_eq!(r.code, 1);
    let r = catbell(dir.path(), &["--help"]);
    assert_eq!(r.code, 0);
}

#[test]
fn eval_reference_result_violates() {
    let dir = TempDir::new().unwrap();
    let r = catbell(
        dir.path(),
        &[
            "eval",
            "--from-result",
            reference().to_str().unwrap(),
            "--cutoff",
            "64",
        ],
    );
    assert_eq!(r.code, 3, "{}", r.stderr);
    let chsh = value(&r.stdout, "chsh");
    let oracle = value(&r.stdout, "oracle_chsh");
    assert!(chsh.abs() > 2.05);
    assert!((chsh - oracle).abs() < 1e-8);
    assert!(r.stdout.contains("classification=violating"));
}

#[test]
fn eval_complex_syntaxes_agree() {
    let dir = TempDir::new().unwrap();
    let common = [
        "--eta", "0.7", "--phi", "3*pi/4", "--zp", "0.1", "--w", "-i", "--wp", "0.5-0.5i",
    ];
    let mut outputs = Vec::new();
    for z in ["0.3+0.2i", "(0.3, 0.2)", "0.3,0.2", " 0.3 + 0.2 i "] {
        let mut args = vec!["eval", "--sigma", "1.1-0.4i", "--z", z];
        args.extend(common);
        let r = catbell(dir.path(), &args);
        assert!(r.code == 0 || r.code == 3, "{}", r.stderr);
        outputs.push(r.stdout);
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn verify_default_passes() {
    let dir = TempDir::new().unwrap();
    let r = catbell(dir.path(), &["verify"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert_eq!(
        r.stdout.lines().filter(|l| l.starts_with("PASS")).count(),
        12
    );
    assert!(!r.stdout.contains("FAIL"));
}

#[test]
fn verify_small_cutoff_fails() {
    let dir = TempDir::new().unwrap();
    let r = catbell(dir.path(), &["verify", "--cutoff", "8"]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("`cutoff rule`"), "{}", r.stderr);
    assert!(r.stderr.contains("cutoff 8 too small"));
}

#[test]
fn verify_literal_vacuum_is_informational() {
    let dir = TempDir::new().unwrap();
    let r = catbell(
        dir.path(),
        &["verify", "--samples", "3", "--literal-vacuum"],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let line = r
        .stdout
        .lines()
        .find(|l| l.starts_with("INFO"))
        .expect("informational line");
    let norm: f64 = line
        .split_whitespace()
        .find_map(|t| t.parse().ok())
        .unwrap();
    assert!(norm > 1e-3, "{line}");
}

#[test]
fn unit_settings_scan_is_classical() {
    let dir = TempDir::new().unwrap();
    let r = catbell(dir.path(), &["scan", "--paper-setting"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(value(&r.stdout, "max_abs_chsh") <= 2.0);
    assert_eq!(value(&r.stdout, "violating_fraction"), 0.0);
    assert!(r.stdout.contains("Degenerate paper setting"));
    let csv = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert_eq!(csv.lines().count(), 626);
}

#[test]
fn scan_summary_matches_csv() {
    let dir = TempDir::new().unwrap();
    let r = catbell(
        dir.path(),
        &[
            "scan",
            "--from-result",
            reference().to_str().unwrap(),
            "--out",
            "ref.csv",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);

    let csv = std::fs::read_to_string(dir.path().join("ref.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("alpha,omega,E_zw,E_zpw,E_zwp,E_zpwp,chsh,classification")
    );
    let (mut best, mut arg, mut violating, mut n) = (f64::NEG_INFINITY, (0.0, 0.0), 0usize, 0usize);
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let x: Vec<f64> = f[..7].iter().map(|v| v.parse().unwrap()).collect();
        assert_eq!(x[6], x[2] + x[3] + (x[4] - x[5]));
        if x[6].abs() > best {
            best = x[6].abs();
            arg = (x[0], x[1]);
        }
        violating += usize::from(f[7] == "violating");
        n += 1;
    }
    assert_eq!(n, 625);
    assert!(violating > 0);
    assert_eq!(value(&r.stdout, "max_abs_chsh"), best);
    assert_eq!(value(&r.stdout, "argmax_alpha"), arg.0);
    assert_eq!(value(&r.stdout, "argmax_omega"), arg.1);
    assert_eq!(
        value(&r.stdout, "violating_fraction"),
        violating as f64 / n as f64
    );
}

#[test]
fn scan_skips_degenerate_points() {
    let dir = TempDir::new().unwrap();
    let r = catbell(
        dir.path(),
        &[
            "scan",
            "--paper-setting",
            "--alpha-range",
            "0:1",
            "--omega-range",
            "0:1",
            "--steps",
            "3",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("records=8 skipped=1"));
    assert!(r
        .stderr
        .contains("skipped degenerate point alpha=0 omega=0"));
}

#[test]
fn scan_rejects_bad_grid() {
    let dir = TempDir::new().unwrap();
    let r = catbell(dir.path(), &["scan", "--paper-setting", "--steps", "1"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--steps"));
    let r = catbell(
        dir.path(),
        &["scan", "--paper-setting", "--alpha-range", "2:1"],
    );
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--alpha-range"));
}

#[test]
fn optimizer_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = [
        "optimize",
        "--budget",
        "4000",
        "--restarts",
        "6",
        "--seed",
        "3",
    ];
    let a = catbell(
        dir.path(),
        &[&args[..], &["--out", "a.json", "--workers", "1"]].concat(),
    );
    let b = catbell(
        dir.path(),
        &[&args[..], &["--out", "b.json", "--workers", "4"]].concat(),
    );
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(b.code, 0, "{}", b.stderr);
    let ja = std::fs::read(dir.path().join("a.json")).unwrap();
    let jb = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(ja, jb);
}

#[test]
fn reference_result_regenerates() {
    let dir = TempDir::new().unwrap();
    let r = catbell(
        dir.path(),
        &["optimize", "--seed", "7", "--out", "ref.json"],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let fresh = std::fs::read(dir.path().join("ref.json")).unwrap();
    assert_eq!(fresh, std::fs::read(reference()).unwrap());
}

#[test]
fn optimizer_fixed_vacuum_stays_at_two() {
    let dir = TempDir::new().unwrap();
    let r = catbell(
        dir.path(),
        &[
            "optimize",
            "--sigma",
            "0",
            "--eta",
            "0",
            "--phi",
            "0",
            "--budget",
            "3000",
            "--restarts",
            "4",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = value(&r.stdout, "best_value");
    assert!((v - 2.0).abs() < 1e-6, "{v}");
}

#[test]
fn optimizer_rejects_conflicts() {
    let dir = TempDir::new().unwrap();
    let r = catbell(
        dir.path(),
        &[
            "optimize",
            "--sigma",
            "1",
            "--eta",
            "1",
            "--free-state",
            "2",
        ],
    );
    assert_eq!(r.code, 1);
    let r = catbell(dir.path(), &["optimize", "--format", "csv"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--format"));
    let r = catbell(dir.path(), &["optimize", "--budget", "10"]);
    assert_eq!(r.code, 1);
}

#[test]
fn config_file_round_trip() {
    let dir = TempDir::new().unwrap();
    let r = catbell(
        dir.path(),
        &[
            "scan",
            "--paper-setting",
            "--steps",
            "4,3",
            "--out",
            "x.csv",
            "--dump-config",
        ],
    );
    assert_eq!(r.code, 0);
    std::fs::write(dir.path().join("run.toml"), &r.stdout).unwrap();
    let again = catbell(dir.path(), &["--config", "run.toml", "--dump-config"]);
    assert_eq!(again.stdout, r.stdout);

    let run = catbell(dir.path(), &["--config", "run.toml"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("records=12"));

    let clash = catbell(dir.path(), &["eval", "--config", "run.toml"]);
    assert_eq!(clash.code, 1);
    std::fs::write(
        dir.path().join("bad.toml"),
        "command = \"scan\"\n[parameters]\nsteps = 3\n",
    )
    .unwrap();
    assert_eq!(catbell(dir.path(), &["--config", "bad.toml"]).code, 1);
}

#[test]
fn workers_env_is_a_default_only() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_catbell"))
        .args(["scan", "--paper-setting", "--steps", "3"])
        .current_dir(dir.path())
        .env("CATBELL_WORKERS", "two")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_catbell"))
        .args(["scan", "--paper-setting", "--steps", "3", "--workers", "2"])
        .current_dir(dir.path())
        .env("CATBELL_WORKERS", "two")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
