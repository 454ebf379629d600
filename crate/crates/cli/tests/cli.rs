use std::path::PathBuf;
use std::process::{Command, Output};

fn lagrangia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagrangia"))
        .args(args)
        .env_remove("LAGRANGIA_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lagrangia-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn lagrangian_of_colex_graph() {
    let out = lagrangia(&["lagrangian", "--colex", "3", "13", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let value = v["result"]["value"].as_f64().unwrap();
    assert!((value - 0.08).abs() < 1e-9, "{value}");
    assert!(v["result"]["kkt_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["result"]["method"], "ascent");
    assert_eq!(v["run"]["seed"], 0);
    assert_eq!(v["run"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn reads_edge_list_file() {
    let path = temp_file("k4.txt", "3 4 4\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n");
    let out = lagrangia(&["lagrangian", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("value: 0.0625"), "{}", stdout(&out));

    let out = lagrangia(&["clique", path.to_str().unwrap()]);
    assert_eq!(
        stdout(&out),
        "clique_number: 4\nmaximum_clique: {1,2,3,4}\n"
    );
}

#[test]
fn rejects_bad_files() {
    let dup = temp_file("dup.txt", "3 4 2\n1 2 3\n1 2 3\n");
    let out = lagrangia(&["lagrangian", dup.to_str().unwrap()]);
    assert!(out.status.code().unwrap() > 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("duplicate"), "{err}");

    let zero = temp_file("zero.txt", "3 4 1\n0 1 2\n");
    let out = lagrangia(&["clique", zero.to_str().unwrap()]);
    assert!(out.status.code().unwrap() > 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("vertex 0"));

    let out = lagrangia(&["clique", "/nonexistent/graph.txt"]);
    assert!(out.status.code().unwrap() > 2);
}

#[test]
fn witness_prints_both_values() {
    let out = lagrangia(&["verify", "witness", "--r", "3", "--t", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("41/500") && text.contains("0.082"), "{text}");
    assert!(text.contains("0.08000000000000000"));
    assert!(text.contains("verdict: pass"));
}

#[test]
fn theorem1_passes() {
    let out = lagrangia(&["verify", "theorem1", "--t", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert!(v["instances_checked"].as_u64().unwrap() > 0);
    assert!(v["search_space"]
        .as_str()
        .unwrap()
        .contains("left-compressed"));
    assert_eq!(v["tolerances"]["margin"], 1e-6);
}

#[test]
fn vacuous_and_guarded_runs() {
    let out = lagrangia(&["verify", "theorem2", "--t", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("verdict: vacuous"));

    let out = lagrangia(&["verify", "theorem1", "--t", "12"]);
    assert!(out.status.code().unwrap() > 2);

    let out = lagrangia(&["verify", "theorem43", "--t", "6"]);
    assert!(out.status.code().unwrap() > 2);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(lagrangia(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(
        lagrangia(&["verify", "theorem9", "--t", "6"]).status.code(),
        Some(3)
    );
    assert_eq!(
        lagrangia(&["lagrangian", "--colex", "3", "13", "--tol", "0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(lagrangia(&["--help"]).status.code(), Some(0));
    assert_eq!(lagrangia(&["--version"]).status.code(), Some(0));
    assert_eq!(
        lagrangia(&["clique", "--colex", "3", "5", "--format", "csv"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn colex_commands() {
    assert_eq!(
        stdout(&lagrangia(&["colex", "rank", "1", "2", "7"])),
        "20\n"
    );
    assert_eq!(
        stdout(&lagrangia(&["colex", "unrank", "3", "20"])),
        "1 2 7\n"
    );
    let g = stdout(&lagrangia(&["colex", "generate", "3", "11"]));
    assert!(g.starts_with("3 6 11\n1 2 3\n"));
    assert!(g.ends_with("3 4 5\n1 2 6\n"));
}

#[test]
fn enumeration_streams_graphs() {
    let out = stdout(&lagrangia(&["enumerate", "5", "3", "3"]));
    assert_eq!(
        out,
        "3 5 3\n1 2 3\n1 2 4\n1 3 4\n\n3 5 3\n1 2 3\n1 2 4\n1 2 5\n"
    );
    assert_eq!(
        stdout(&lagrangia(&["enumerate", "5", "3", "3", "--count-only"])),
        "2\n"
    );
    let json: serde_json::Value = serde_json::from_str(&stdout(&lagrangia(&[
        "enumerate",
        "4",
        "3",
        "2",
        "--format",
        "json",
    ])))
    .unwrap();
    assert_eq!(json, serde_json::json!([[[1, 2, 3], [1, 2, 4]]]));
}

#[test]
fn compress_outputs_left_compressed_graph() {
    let path = temp_file("shift.txt", "3 4 2\n1 2 3\n1 3 4\n");
    let out = lagrangia(&["compress", path.to_str().unwrap()]);
    assert_eq!(stdout(&out), "3 4 2\n1 2 3\n1 2 4\n");
}

#[test]
fn seed_from_environment_wins() {
    let out = Command::new(env!("CARGO_BIN_EXE_lagrangia"))
        .args([
            "verify", "pz18", "--t", "5", "--seed", "3", "--format", "json",
        ])
        .env("LAGRANGIA_SEED", "17")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 17);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "verify", "pz18", "--t", "6", "--format", "json", "--seed", "5",
    ];
    let a = lagrangia(&args);
    let b = lagrangia(
        &["--parallelism", "2"]
            .iter()
            .chain(&args)
            .copied()
            .collect::<Vec<_>>(),
    );
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn output_file_and_csv() {
    let dir = std::env::temp_dir().join(format!("lagrangia-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let out = lagrangia(&[
        "verify",
        "bp",
        "--t",
        "6",
        "--p",
        "4",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        text,
        "theorem_id,kind,n,m,observed,target,margin,edges,note\n"
    );
}
