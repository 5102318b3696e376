#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models")
}

pub fn model(name: &str) -> PathBuf {
    models_dir().join(format!("{name}.toml"))
}

pub fn jetvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetvar"))
        .args(args)
        .output()
        .expect("jetvar should run")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be utf8")
}

/// Value of the `key = value` line of a text certificate.
pub fn field(text: &str, key: &str) -> Option<String> {
    let prefix = format!("{key} = ");
    text.lines().find_map(|l| l.strip_prefix(&prefix).map(str::to_string))
}

pub fn header(text: &str, key: &str) -> Option<String> {
    let prefix = format!("{key}: ");
    text.lines().find_map(|l| l.strip_prefix(&prefix).map(str::to_string))
}
