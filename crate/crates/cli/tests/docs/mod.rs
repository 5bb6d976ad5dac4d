//! Runs the console examples in `docs/*.md`.
//!
//! A block opened with a console fence holds commands `$ strata <args>`,
//! each followed by its expected standard output and standard error (in
//! that order) and an `[exit N]` line. Commands run with `docs/` as the
//! working directory.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub file: String,
    pub line: usize,
    pub args: Vec<String>,
    pub output: String,
    pub exit: i32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub output: String,
    pub exit: i32,
}

pub fn docs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs")
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_strata")
}

pub fn examples() -> Vec<Example> {
    let mut files: Vec<PathBuf> = fs::read_dir(docs_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "md"))
        .collect();
    files.sort();
    files.iter().flat_map(|f| parse_examples(f)).collect()
}

fn parse_examples(path: &Path) -> Vec<Example> {
    let text = fs::read_to_string(path).unwrap();
    let file = path.file_name().unwrap().to_string_lossy().into_owned();
    let mut out = Vec::new();
    let mut in_block = false;
    let mut current: Option<(usize, Vec<String>, Vec<&str>)> = None;
    for (i, line) in text.lines().enumerate() {
        if line.starts_with("```") {
            assert!(current.is_none(), "{file}:{}: block ends before `[exit N]`", i + 1);
            in_block = !in_block && line == "```console";
            continue;
        }
        if !in_block {
            continue;
        }
        if let Some(cmd) = line.strip_prefix("$ strata ") {
            assert!(current.is_none(), "{file}:{}: command before `[exit N]`", i + 1);
            let args = shlex::split(cmd).unwrap_or_else(|| panic!("{file}:{}: bad quoting", i + 1));
            current = Some((i + 1, args, Vec::new()));
        } else if let Some(code) = line.strip_prefix("[exit ").and_then(|r| r.strip_suffix(']')) {
            let (line_no, args, body) = current.take().expect("`[exit N]` without a command");
            let output = body.iter().map(|l| format!("{l}\n")).collect();
            out.push(Example {
                file: file.clone(),
                line: line_no,
                args,
                output,
                exit: code.parse().unwrap(),
            });
        } else {
            let (_, _, body) = current
                .as_mut()
                .unwrap_or_else(|| panic!("{file}:{}: output outside a command", i + 1));
            body.push(line);
        }
    }
    out
}

pub fn run<S: AsRef<str>>(args: &[S]) -> Run {
    let out = Command::new(bin())
        .args(args.iter().map(|a| a.as_ref()))
        .current_dir(docs_dir())
        .output()
        .unwrap();
    let mut text = String::from_utf8(out.stdout).unwrap();
    text.push_str(&String::from_utf8(out.stderr).unwrap());
    Run {
        output: text,
        exit: out.status.code().unwrap_or(-1),
    }
}

/// Runs every example and returns a description of each mismatch.
pub fn mismatches() -> Vec<String> {
    let mut bad = Vec::new();
    for ex in examples() {
        let got = run(&ex.args);
        if got.output != ex.output || got.exit != ex.exit {
            bad.push(format!(
                "{}:{}: strata {}\n--- expected (exit {})\n{}--- got (exit {})\n{}",
                ex.file,
                ex.line,
                ex.args.join(" "),
                ex.exit,
                ex.output,
                got.exit,
                got.output
            ));
        }
    }
    bad
}
