use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_walkbounds"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("walkbounds-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn walks_default_writes_csv_with_provenance() {
    let out = scratch("walks");
    let result = run(&["walks", "--seed", "9"], &out);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let csv = std::fs::read_to_string(out.join("walks.csv")).unwrap();
    let mut lines = csv.lines();
    let comment = lines.next().unwrap();
    assert!(comment.starts_with("# config_hash=") && comment.ends_with(" seed=9"), "{comment}");
    assert_eq!(comment.split_whitespace().nth(1).unwrap().len(), "config_hash=".len() + 16);
    assert_eq!(lines.next().unwrap(), "N,walk_count,max_deviation,total_variation");
    assert_eq!(lines.count(), 20);
    std::fs::remove_dir_all(out).unwrap();
}

#[test]
fn config_errors_exit_2() {
    let out = scratch("bad");
    let missing = run(&["shrink", "--config", "/nonexistent/config.json"], &out);
    assert_eq!(missing.status.code(), Some(2));
    let cfg = write_config(&out, r#"{"lambda": 0.5, "d": 0.5, "typo": 1}"#);
    let unknown = run(&["shrink", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(unknown.status.code(), Some(2));
    let range = run(&["shrink", "--lambda", "1.5"], &out);
    assert_eq!(range.status.code(), Some(2));
    let flag = bin().args(["walks", "--mode", "fast"]).output().unwrap();
    assert_eq!(flag.status.code(), Some(2));
    std::fs::remove_dir_all(out).unwrap();
}

#[test]
fn resource_cap_exits_4_and_float_mode_recovers() {
    let out = scratch("cap");
    let cfg = write_config(
        &out,
        r#"{"group": {"family": "cyclic", "m": 600000},
            "graph": {"n": 2, "adjacency": [[1, 1], [1, 1]], "decorations": [0, 1]},
            "lengths": [1, 2]}"#,
    );
    let exact = run(&["walks", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(exact.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&exact.stderr).contains("--mode float"));
    let float = run(&["walks", "--config", cfg.to_str().unwrap(), "--mode", "float"], &out);
    assert!(float.status.success(), "{}", String::from_utf8_lossy(&float.stderr));
    std::fs::remove_dir_all(out).unwrap();
}

#[test]
fn flags_override_config() {
    let out = scratch("override");
    let cfg = write_config(&out, r#"{"lambda": 0.5, "d": 0.5}"#);
    let result = run(&["shrink", "--config", cfg.to_str().unwrap(), "--d", "0.25"], &out);
    assert!(result.status.success());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("shrink.json")).unwrap()).unwrap();
    assert_eq!(json["d"].as_f64(), Some(0.25));
    assert_eq!(json["lambda"].as_f64(), Some(0.5));
    std::fs::remove_dir_all(out).unwrap();
}

#[test]
fn irreducibility_is_thread_count_independent() {
    let out = scratch("irr");
    let cfg = write_config(
        &out,
        r#"{"generators": {"builtin": {"kind": "sl", "n": 3}}, "lengths": [4, 8],
            "primes": [5, 7], "samples": 500, "seed": 3}"#,
    );
    let (a, b) = (out.join("a"), out.join("b"));
    for (dir, threads) in [(&a, "1"), (&b, "3")] {
        let r = run(&["irreducibility", "--config", cfg.to_str().unwrap(), "--threads", threads], dir);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    for f in ["irreducibility.csv", "irreducibility.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    std::fs::remove_dir_all(out).unwrap();
}

#[test]
fn example_configs_load() {
    use walkbounds_cli::config::*;
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let p = Some(path.as_path());
        let ok = match name.split('_').next().unwrap().trim_end_matches(".json") {
            "walks" => load::<WalksConfig>(p).is_ok(),
            "tau" => load::<TauConfig>(p).is_ok(),
            "irreducibility" => load::<IrreducibilityConfig>(p).is_ok(),
            "shrink" => load::<ShrinkConfig>(p).is_ok(),
            "spectral" => load::<SpectralGapConfig>(p).is_ok(),
            "kazhdan" => load::<KazhdanConfig>(p).is_ok(),
            other => panic!("unexpected config {other}"),
        };
        assert!(ok, "{name}");
        seen += 1;
    }
    assert!(seen >= 6);
}
