#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

/// Golden invocations: file stem, arguments, expected exit status.
pub const GOLDEN: &[(&str, &[&str], i32)] = &[
    ("chow_disc-7_f2", &["chow", "--disc", "-7", "--conductor", "2"], 0),
    ("chow_disc-7_f1", &["chow", "--disc", "-7", "--conductor", "1"], 0),
    ("chow_biquad", &["chow", "--data", "data/biquad.decl", "--order", "main"], 0),
    ("principal_disc-7_f2", &["principal", "--disc", "-7", "--conductor", "2", "--divisor", "2.0:1"], 0),
    ("principal_zero", &["principal", "--disc", "-7", "--conductor", "2", "--divisor", ""], 0),
    ("principal_disc-4_f3", &["principal", "--disc", "-4", "--conductor", "3", "--divisor", "3.0:1"], 1),
    ("order_info_disc-7_f2", &["order-info", "--disc", "-7", "--conductor", "2"], 0),
    ("order_info_disc-4_f3", &["order-info", "--disc", "-4", "--conductor", "3"], 0),
    ("order_info_disc-7_f1", &["order-info", "--disc", "-7", "--conductor", "1"], 0),
    ("find_trivial_disc-23", &["find-trivial", "--disc", "-23", "--prime-budget", "100"], 0),
    ("find_trivial_disc-7", &["find-trivial", "--disc", "-7"], 0),
    ("find_trivial_disc-20", &["find-trivial", "--disc", "-20", "--prime-budget", "50"], 1),
    ("conductor_test_lone", &["conductor-test", "--disc", "-7", "--ideal", "2.0:1"], 1),
    ("conductor_test_both", &["conductor-test", "--disc", "-7", "--ideal", "2.0:1,2.1:1"], 0),
    ("conductor_test_inert", &["conductor-test", "--disc", "-7", "--ideal", "3:1"], 0),
];

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(stem: &str) -> PathBuf {
    crate_dir().join("tests/golden").join(format!("{stem}.txt"))
}

/// Runs the binary from the crate directory so that data paths are relative.
pub fn chow(args: &[&str]) -> Run {
    let out =
        Command::new(env!("CARGO_BIN_EXE_chow")).args(args).current_dir(crate_dir()).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn chow_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let r = chow(&all);
    (r.code, serde_json::from_str(&r.stdout).expect("machine output is JSON"))
}

/// Integer tokens of `s`, with a leading minus kept.
pub fn integers(s: &str) -> Vec<i64> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        if b[i].is_ascii_digit() {
            let neg = i > 0 && b[i - 1] == b'-';
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let v: i64 = s[start..i].parse().unwrap();
            out.push(if neg { -v } else { v });
        } else {
            i += 1;
        }
    }
    out
}

fn json_integers(v: &Value, out: &mut Vec<i64>) {
    match v {
        Value::Number(n) => out.extend(n.as_i64()),
        Value::String(s) => out.extend(integers(s)),
        Value::Array(a) => a.iter().for_each(|x| json_integers(x, out)),
        Value::Object(m) => m.values().for_each(|x| json_integers(x, out)),
        _ => {}
    }
}

/// Every integer printed in text mode also occurs among the machine-mode
/// values. Fixed labels of the report are removed first.
pub fn differential(text: &str, json: &Value) -> Result<(), String> {
    let mut cleaned = text.to_string();
    for fixed in ["F_2", "r_i >= 2", "(5)", "(4)", "(3)", "(2)", "O_K*", "O*"] {
        cleaned = cleaned.replace(fixed, "");
    }
    let mut have = Vec::new();
    json_integers(json, &mut have);
    let missing: Vec<i64> =
        integers(&cleaned).into_iter().filter(|n| !have.contains(n) && !have.contains(&-n)).collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(format!("text values {missing:?} absent from machine output"))
    }
}
