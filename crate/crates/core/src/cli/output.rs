//! Report and table serialization, atomic file writes.

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use super::config::RunConfig;
use super::run::{Command, CommandResult};
use crate::analytic::SpectrumRow;

pub const CSV_HEADER: &str = "n,s_z,k_z,epsilon_nonrel,E_plus,E_minus,analytic_E,abs_error";

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_table(rows: &[SpectrumRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            r.n.to_string(),
            num(r.s_z),
            num(r.k_z),
            num(r.epsilon_nonrel),
            num(r.e_plus),
            num(r.e_minus),
            num(r.analytic_e),
            num(r.abs_error),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// The deterministic part of a report.
#[derive(Clone, Debug, Serialize)]
pub struct Payload<'a> {
    pub command: Command,
    pub exit_code: u8,
    pub overall_pass: bool,
    pub config: &'a RunConfig,
    pub results: &'a [CommandResult],
}

pub fn exit_code(results: &[CommandResult]) -> u8 {
    results.iter().map(|r| r.exit_code).max().unwrap_or(0)
}

pub fn payload<'a>(command: Command, config: &'a RunConfig, results: &'a [CommandResult]) -> Payload<'a> {
    let exit_code = exit_code(results);
    Payload {
        command,
        exit_code,
        overall_pass: exit_code == 0,
        config,
        results,
    }
}

/// `{"metadata": {...}, "payload": {...}}`, pretty-printed. Only `metadata`
/// varies between runs.
pub fn report_json(payload: &Payload<'_>) -> String {
    let unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let doc = json!({
        "metadata": {
            "tool": "relsusy",
            "version": env!("CARGO_PKG_VERSION"),
            "generated_unix_seconds": unix,
        },
        "payload": payload,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("report is serializable");
    text.push('\n');
    text
}

/// The `payload` member of a report document, re-serialized compactly.
pub fn payload_of(report: &str) -> serde_json::Result<String> {
    let v: Value = serde_json::from_str(report)?;
    serde_json::to_string(&v["payload"])
}

/// Writes through a temporary file in the target directory and renames it.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
