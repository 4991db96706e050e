//! Output helpers shared by every exported document.
//!
//! CSV files and key/value documents start with `#`-prefixed metadata lines
//! (toolkit version, seed, input hash), so they stay diff-able and every
//! consumer can skip them with a single comment rule. Key/value documents are
//! flat TOML tables.

use std::io::Write;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Formats a value with 12 significant digits in scientific notation.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    format!("{x:.11e}")
}

/// Provenance lines written at the top of every output file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Header {
    pub kind: String,
    pub seed: Option<u64>,
    pub input_hash: Option<String>,
    pub extra: Vec<(String, String)>,
}

impl Header {
    pub fn new(kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_input_hash(mut self, hash: impl Into<String>) -> Self {
        self.input_hash = Some(hash.into());
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.extra.push((key.into(), value.to_string()));
        self
    }

    pub fn write_to<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "# plc-tdr {TOOLKIT_VERSION}")?;
        writeln!(out, "# kind = {}", self.kind)?;
        match self.seed {
            Some(s) => writeln!(out, "# seed = {s}")?,
            None => writeln!(out, "# seed = none")?,
        }
        if let Some(h) = &self.input_hash {
            writeln!(out, "# input_hash = {h}")?;
        }
        for (k, v) in &self.extra {
            writeln!(out, "# {k} = {v}")?;
        }
        Ok(())
    }
}

/// Serializes `value` as a flat key/value document preceded by `header`.
pub fn to_kv_document<S: Serialize>(value: &S, header: &Header) -> Result<String> {
    let mut out = Vec::new();
    header.write_to(&mut out)?;
    let body = toml::to_string(value).map_err(|e| Error::Parse(e.to_string()))?;
    out.extend_from_slice(body.as_bytes());
    Ok(String::from_utf8(out).expect("utf-8 output"))
}

/// Parses a key/value document; `#` header lines are comments.
pub fn from_kv_document<D: DeserializeOwned>(text: &str) -> Result<D> {
    toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
