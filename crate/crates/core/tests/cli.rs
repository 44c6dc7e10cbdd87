use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinchain"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn spinchain")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.json");
    fs::write(&path, text).unwrap();
    path
}

/// Every file the run wrote, sorted by name.
fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "run.json")
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn run_into(sub: &str, jobs: &str) -> Vec<(String, Vec<u8>)> {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let cfg = config(sub);
    let o = run(&[
        sub,
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--jobs",
        jobs,
        "--json",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{sub}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    outputs(dir.path())
}

#[test]
fn reruns_are_byte_identical() {
    for sub in [
        "deviation-sweep",
        "gate-fidelity",
        "josephson-map",
        "blockade-check",
    ] {
        let a = run_into(sub, "1");
        let b = run_into(sub, "1");
        let c = run_into(sub, "4");
        assert!(!a.is_empty());
        assert_eq!(a, b, "{sub}");
        assert_eq!(a, c, "{sub} depends on --jobs");
    }
}

#[test]
fn side_files_next_to_output() {
    let names: Vec<String> = run_into("deviation-sweep", "2")
        .into_iter()
        .map(|f| f.0)
        .collect();
    assert_eq!(names, ["out.csv", "out.json", "out.slopes.csv"]);
    let names: Vec<String> = run_into("gate-fidelity", "2")
        .into_iter()
        .map(|f| f.0)
        .collect();
    assert_eq!(names, ["out.csv", "out.json", "out.schedules.json"]);
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["gate-fidelity", "--help"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["gate-fidelity", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["teleport"]).status.code(), Some(1));
}

#[test]
fn defaults_print_csv_to_stdout() {
    let o = run(&["blockade-check"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("layout,n_logical,m,n_spins,couplings,residual,cancellation")
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn json_to_stdout() {
    let o = run(&["josephson-map", "--json", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["scenario"], "josephson-map");
    assert_eq!(v["seed"], 9);
    assert!(v["results"].is_array() || v["results"].is_object());
}

#[test]
fn naive_flag_changes_mode() {
    let o = run(&["gate-fidelity", "--naive"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.contains(",naive,")));
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"scenario": "deviation-sweep", "parameters": {"n_mni": 3}}"#,
        r#"{"scenario": "deviation-sweep", "parameters": {"t": []}}"#,
        r#"{"scenario": "gate-fidelity", "parameters": {}}"#,
        r#"{"scenario": "deviation-sweep", "extra": 1}"#,
        r#"{"scenario": "deviation-sweep", "parameters": {"j2": "small"}}"#,
        "not json",
    ];
    for text in cases {
        let cfg = write_config(dir.path(), text);
        let o = run(&["deviation-sweep", "--config", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1), "{text}");
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["blockade-check", "--config", "/nonexistent/run.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bound_violation_exits_two_and_still_writes() {
    // Past the quarter period the idle bound overshoots the exact deviation.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"scenario": "deviation-sweep", "parameters":
            {"scenarios": ["idle"], "n_min": 4, "n_max": 4, "j2": [0.0932], "t": [15.6]}}"#,
    );
    let out = dir.path().join("dev.csv");
    let o = run(&[
        "deviation-sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(fs::read_to_string(&out).unwrap().contains("fail"));
}
