//! End-to-end CLI behavior: deterministic outputs, cache reuse and refusal,
//! and the exit-code contract.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_bifront");

fn scenario_text() -> String {
    r#"
rho = 1.0
alpha = 1.0

[params]
d = 0.25
r = 1.0
a = 1.2
b = 5.0

[support_u]
kind = "ball"
center = [0.0, 0.0]
radius = 2.0

[support_v]
kind = "ball"
center = [8.0, 0.0]
radius = 2.0

[grid]
extent = 24.0
h = 0.5

[run]
horizon = 1.0
snapshot_times = [0.5, 1.0]
"#
    .to_string()
}

fn write_scenario(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("case.toml");
    fs::write(&path, scenario_text()).unwrap();
    path
}

fn run(cmd: &str, scenario: &Path, out: &Path) -> Output {
    Command::new(BIN)
        .args([
            cmd,
            "--scenario",
            scenario.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap()
}

fn dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        out.insert(
            entry.file_name().into_string().unwrap(),
            fs::read(entry.path()).unwrap(),
        );
    }
    out
}

#[test]
fn predict_is_deterministic_across_runs_and_directories() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path());
    let (out_a, out_b) = (tmp.path().join("a"), tmp.path().join("b"));

    let first = run("predict", &scenario, &out_a);
    assert!(first.status.success(), "{first:?}");
    let after_first = dir_bytes(&out_a);

    // Rerun into the same directory: caches are accepted and rewrites are
    // byte-identical.
    let second = run("predict", &scenario, &out_a);
    assert!(second.status.success(), "{second:?}");
    assert_eq!(after_first, dir_bytes(&out_a));

    // A fresh directory measures the interface speed from scratch and still
    // reproduces every byte.
    let third = run("predict", &scenario, &out_b);
    assert!(third.status.success(), "{third:?}");
    assert_eq!(after_first, dir_bytes(&out_b));
}

#[test]
fn mismatched_caches_are_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path());
    let out = tmp.path().join("out");
    assert!(run("predict", &scenario, &out).status.success());

    // The stored canonical scenario no longer matches the input.
    let stored = out.join("scenario.toml");
    let tampered = fs::read_to_string(&stored)
        .unwrap()
        .replace("rho = 1.0", "rho = 0.5");
    fs::write(&stored, tampered).unwrap();

    let refused = run("predict", &scenario, &out);
    assert_eq!(refused.status.code(), Some(3), "{refused:?}");
    let stderr = String::from_utf8_lossy(&refused.stderr);
    assert!(stderr.contains("cache mismatch"), "{stderr}");
}

#[test]
fn stale_speed_cache_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path());
    let out = tmp.path().join("out");
    assert!(run("predict", &scenario, &out).status.success());

    let cache = out.join("cuv.toml");
    let tampered: String = fs::read_to_string(&cache)
        .unwrap()
        .lines()
        .map(|line| {
            if line.starts_with("scenario = ") {
                format!("scenario = \"{}\"", "0".repeat(64))
            } else {
                line.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n";
    fs::write(&cache, tampered).unwrap();

    let refused = run("predict", &scenario, &out);
    assert_eq!(refused.status.code(), Some(3), "{refused:?}");
    assert!(String::from_utf8_lossy(&refused.stderr).contains("cache mismatch"));
}

#[test]
fn invalid_scenarios_exit_two_with_field_paths() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("bad.toml");
    fs::write(&path, scenario_text().replace("a = 1.2", "a = 0.5")).unwrap();

    let out = run("predict", &path, &tmp.path().join("out"));
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("error:"), "{stderr}");
    assert!(stderr.contains("params.a"), "{stderr}");
}

#[test]
fn export_prints_the_scenario_hash() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path());
    let out = run("export", &scenario, &tmp.path().join("out"));
    assert!(out.status.success(), "{out:?}");
    let hash = String::from_utf8(out.stdout).unwrap().trim().to_string();
    assert_eq!(hash.len(), 64);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    // The stored canonical file hashes to the printed value.
    let stored = fs::read(tmp.path().join("out/scenario.toml")).unwrap();
    use sha2::Digest;
    let digest = sha2::Sha256::digest(&stored);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(hash, hex);
}

#[test]
fn verify_reuses_completed_simulations() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = write_scenario(tmp.path());
    let out = tmp.path().join("out");

    let first = run("verify", &scenario, &out);
    assert!(first.status.success(), "{first:?}");
    assert!(
        String::from_utf8_lossy(&first.stderr).contains("simulated"),
        "first run must simulate"
    );
    let after_first = dir_bytes(&out);

    let second = run("verify", &scenario, &out);
    assert!(second.status.success(), "{second:?}");
    assert!(
        !String::from_utf8_lossy(&second.stderr).contains("simulated"),
        "second run must reuse the stored snapshots"
    );
    assert_eq!(after_first, dir_bytes(&out));
}
