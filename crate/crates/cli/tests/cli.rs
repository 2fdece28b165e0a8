//! The binary as a process: exit codes, error messages and a small
//! generate/train/predict/evaluate round trip.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mcua(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcua"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(mcua(&[]).status.code(), Some(2));
    assert_eq!(mcua(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(mcua(&["gen"]).status.code(), Some(2), "missing --out-dir");
    assert_eq!(mcua(&["--seed", "x", "default-config"]).status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    let out = mcua(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains("feature-importance"));
    let out = mcua(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    let v = text(&out.stdout);
    assert!(v.starts_with("mcua "));
    assert!(v.contains("hanyu.tsv\t"));
}

#[test]
fn missing_table_exits_1_and_names_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = mcua(&["--tables-dir", s(dir.path()), "emit-schema", "--type", "CE"]);
    // the schema needs no tables
    assert_eq!(out.status.code(), Some(0));
    let out = mcua(&["--tables-dir", s(dir.path()), "gen", "--personas", "10", "--out-dir", s(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    let err = text(&out.stderr);
    assert!(err.contains("missing table file") && err.contains("hanyu.tsv"), "{err}");
}

#[test]
fn bad_input_exits_1_with_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let accounts = dir.path().join("accounts.jsonl");
    fs::write(&accounts, "{\"network\":1,\"id\":\"a\",\"names\":[\"x\"]}\nnot json\n").unwrap();
    fs::write(dir.path().join("pos.jsonl"), "").unwrap();
    let out = mcua(&[
        "eval",
        "--accounts",
        s(&accounts),
        "--positives",
        s(&dir.path().join("pos.jsonl")),
        "--out-dir",
        s(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("accounts.jsonl:2"), "{}", text(&out.stderr));
}

#[test]
fn schema_lines_match_the_layout() {
    for (mt, len) in [("CE", 82), ("cc", 58), ("EE", 18)] {
        let out = mcua(&["emit-schema", "--type", mt]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(text(&out.stdout).lines().count(), len, "{mt}");
    }
    assert_eq!(mcua(&["emit-schema", "--type", "XX"]).status.code(), Some(1));
}

#[test]
fn default_config_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    assert_eq!(mcua(&["default-config", "--out", s(&cfg)]).status.code(), Some(0));
    let out = mcua(&["--config", s(&cfg), "emit-schema", "--type", "EE"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    fs::write(&cfg, "[fusion]\nbogus = 1\n").unwrap();
    assert_eq!(mcua(&["--config", s(&cfg), "emit-schema", "--type", "EE"]).status.code(), Some(1));
}

#[test]
fn generate_train_predict_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = mcua(&["gen", "--personas", "120", "--rnp", "2", "--out-dir", s(d)]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let (accounts, positives, pairs) = (d.join("accounts.jsonl"), d.join("positives.jsonl"), d.join("pairs.jsonl"));
    assert_eq!(fs::read_to_string(&accounts).unwrap().lines().count(), 240);
    assert_eq!(fs::read_to_string(&pairs).unwrap().lines().count(), 360);

    let model = d.join("model.txt");
    let out = mcua(&["train", "--pairs", s(&pairs), "--accounts", s(&accounts), "--out", s(&model)]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));

    let preds = d.join("preds.jsonl");
    let out = mcua(&[
        "predict",
        "--model",
        s(&model),
        "--candidates",
        s(&pairs),
        "--accounts",
        s(&accounts),
        "--out",
        s(&preds),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let lines = fs::read_to_string(&preds).unwrap();
    assert_eq!(lines.lines().count(), 360);
    let first: serde_json::Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
    assert_eq!(first["fusion"].as_array().unwrap().len(), 6, "3 * l * n with l=1, n=2");

    // inline names need no accounts file
    let inline = d.join("inline.jsonl");
    fs::write(
        &inline,
        "{\"id1\":\"x\",\"id2\":\"y\",\"names1\":[\"李雷\"],\"names2\":[\"lilei\",\"李雷\"]}\n",
    )
    .unwrap();
    let out = mcua(&["predict", "--model", s(&model), "--candidates", s(&inline), "--out", s(&d.join("i.jsonl"))]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));

    let eval_dir = d.join("eval");
    let out = mcua(&[
        "eval",
        "--accounts",
        s(&accounts),
        "--positives",
        s(&positives),
        "--rnp",
        "1,2",
        "--methods",
        "mcua,content",
        "--out-dir",
        s(&eval_dir),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let table = fs::read_to_string(eval_dir.join("eval.tsv")).unwrap();
    assert_eq!(table, text(&out.stdout));
    assert!(table.starts_with("method\tP@1\tR@1\tF1@1\tP@2\tR@2\tF1@2\n"));
    assert_eq!(table.lines().count(), 3);
    // five rounds plus one pooled line per method and ratio
    assert_eq!(fs::read_to_string(eval_dir.join("eval.jsonl")).unwrap().lines().count(), 2 * 2 * 6);
}
