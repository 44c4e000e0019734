use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cm-index"))
        .args(args)
        .output()
        .expect("run cm-index")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn index_text_output() {
    let o = run(&["index", "--disc", "-15"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("index               2"), "{s}");
    assert!(s.contains("GRH assumed"));
    assert!(!s.contains("timings"));
}

#[test]
fn index_json_and_csv_agree() {
    let j = run(&["index", "--disc", "-20", "--family", "c", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v[0]["index"], 1);
    assert_eq!(v[0]["division_degree"], 4);
    let c = run(&["index", "--disc", "-20", "--family", "c", "--format", "csv"]);
    let text = stdout(&c);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let pos = header.iter().position(|h| *h == "index").unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let row = rdr.records().next().unwrap().unwrap();
    assert_eq!(&row[pos], "1");
}

#[test]
fn output_is_deterministic_without_timings() {
    let a = run(&["index", "--disc", "-24", "--format", "json"]);
    let b = run(&["index", "--disc", "-24", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let t = run(&["index", "--disc", "-24", "--format", "json", "--timings"]);
    let v: serde_json::Value = serde_json::from_slice(&t.stdout).unwrap();
    assert!(v[0]["timings"]["total_ms"].is_u64());
}

#[test]
fn ring_class_base_and_level_four() {
    let o = run(&["index", "--disc", "-15", "--base", "ringclass", "--n", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["index"], 2);
    assert_eq!(v[0]["n"], 4);
    assert_eq!(v[0]["base"], "H");
}

#[test]
fn curve_files() {
    let o = run(&["index", "--curve", &data("q_cm_7.toml"), "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["index"], 2);
    for f in ["h20_family_a.toml", "h20_conjugate_j.toml"] {
        let o = run(&["index", "--curve", &data(f), "--format", "json"]);
        assert!(o.status.success(), "{f}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v[0]["index"], 1, "{f}");
    }
}

#[test]
fn classpoly_formats() {
    let o = run(&["classpoly", "--disc", "-15"]);
    assert_eq!(stdout(&o).lines().next().unwrap(), "H_-15(x) = x^2 + 191025*x - 121287375");
    let o = run(&["classpoly", "--disc", "-23", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn exit_codes() {
    // invalid or singular input
    assert_eq!(run(&["index", "--disc", "-21"]).status.code(), Some(2));
    assert_eq!(run(&["index", "--disc", "-4"]).status.code(), Some(2));
    assert_eq!(run(&["index", "--disc", "-20", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["index", "--curve", &data("wrong_cm.toml")]).status.code(), Some(2));
    assert_eq!(run(&["index", "--disc", "-20", "--stab-window", "0"]).status.code(), Some(2));
    // norm group not stabilized
    let o = run(&["index", "--disc", "-15", "--prime-bound", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("did not stabilize"));
    // missing file is an I/O failure
    assert_eq!(run(&["index", "--curve", "/nonexistent.toml"]).status.code(), Some(4));
}

#[test]
fn batch_subset_of_families() {
    // a single family keeps the run short; rows still report agreement
    let o = run(&["batch", "--h2", "--families", "a", "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 30);
}
