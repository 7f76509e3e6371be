use std::fs;
use std::io::Write;

use anyhow::{Context, Result};
use laguerre_core::Complex64;
use serde::Serialize;

use crate::args::{Format, Output};

pub const SCHEMA_VERSION: &str = "1";

/// Complex value as an `{re, im}` object.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct Envelope<'a, P> {
    schema_version: &'a str,
    command: &'a str,
    format: &'a str,
    payload: P,
}

/// Writes `payload` as a JSON envelope, or the CSV from `csv` under a
/// one-line `#` header carrying the schema version.
pub fn emit<P: Serialize>(out: &Output, command: &str, payload: &P, csv: impl FnOnce() -> String) -> Result<()> {
    let text = match out.format {
        Format::Json => {
            let envelope = Envelope {
                schema_version: SCHEMA_VERSION,
                command,
                format: "json",
                payload,
            };
            let mut s = serde_json::to_string_pretty(&envelope)?;
            s.push('\n');
            s
        }
        Format::Csv => format!("# schema_version={SCHEMA_VERSION} command={command}\n{}", csv()),
    };
    match &out.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
