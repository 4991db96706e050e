//! Output documents and the input hash recorded in their headers.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::Path;

use plc_tdr::io::{fmt_sig, to_kv_document, Header};
use plc_tdr::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::Format;

/// One file produced by a command.
pub struct Artifact {
    pub name: String,
    pub text: String,
}

impl Artifact {
    pub fn new(name: impl Into<String>, text: String) -> Self {
        Self {
            name: name.into(),
            text,
        }
    }
}

/// What a command produced. `stdout` indexes the artifacts printed when no
/// output directory is given.
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub stdout: Vec<usize>,
    pub reproduction_failed: bool,
}

impl Outcome {
    pub fn single(artifact: Artifact) -> Self {
        Self {
            artifacts: vec![artifact],
            stdout: vec![0],
            reproduction_failed: false,
        }
    }

    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        match out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                for a in &self.artifacts {
                    fs::write(dir.join(&a.name), &a.text)?;
                }
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                for &i in &self.stdout {
                    stdout.write_all(self.artifacts[i].text.as_bytes())?;
                }
                stdout.flush()?;
            }
        }
        Ok(())
    }
}

/// Reads an input file, naming it in the error.
pub fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// SHA-256 over the arguments (without `--out`) and the input files.
pub fn input_hash(args: &[OsString], files: &[&Path]) -> Result<String> {
    let mut hasher = Sha256::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        let s = a.to_string_lossy();
        if s == "--out" {
            skip = true;
            continue;
        }
        if s.starts_with("--out=") {
            continue;
        }
        hasher.update(s.as_bytes());
        hasher.update([0u8]);
    }
    for f in files {
        hasher.update(read_input(f)?);
        hasher.update([0u8]);
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Renders a single record as a key/value document or a one-row CSV.
pub fn record<S: Serialize>(value: &S, header: &Header, format: Format) -> Result<(String, &'static str)> {
    match format {
        Format::Kv => Ok((to_kv_document(value, header)?, "toml")),
        Format::Csv => {
            let table = toml::Table::try_from(value).map_err(|e| Error::Parse(e.to_string()))?;
            let mut out = Vec::new();
            header.write_to(&mut out)?;
            let keys: Vec<&str> = table.keys().map(String::as_str).collect();
            let cells: Vec<String> = table.values().map(cell).collect();
            writeln!(out, "{}", keys.join(","))?;
            writeln!(out, "{}", cells.join(","))?;
            Ok((String::from_utf8(out).expect("utf-8 output"), "csv"))
        }
    }
}

fn cell(v: &toml::Value) -> String {
    match v {
        toml::Value::Float(x) => fmt_sig(*x),
        toml::Value::String(s) => s.clone(),
        toml::Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

pub fn to_text(write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf).expect("utf-8 output"))
}
