use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use multcong_core::classifier::SearchHit;
use multcong_core::{Certificate, Status};
use serde::Serialize;

use crate::args::Format;
use crate::config::RunConfig;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 8] = ["A", "B", "p", "k", "scan", "rhs", "certainty", "status"];

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    report: &'a T,
}

#[derive(Serialize)]
struct Metadata<'a> {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    argv: Vec<String>,
    generated_unix_seconds: u64,
    config: &'a RunConfig,
}

/// A report body: JSON always, CSV when it has rows.
pub struct Report<'a, T: Serialize> {
    pub command: &'a str,
    pub body: &'a T,
    pub rows: Option<Vec<&'a Certificate>>,
}

fn status_name(s: &Status) -> &'static str {
    match s {
        Status::Certified => "certified",
        Status::VerifiedToHorizon => "verified_to_horizon",
        Status::Refuted { .. } => "refuted",
    }
}

fn certainty_name(c: &multcong_core::CertainNat) -> &'static str {
    if c.is_exact() {
        "certified_exact"
    } else {
        "upper_bound_at_horizon"
    }
}

pub fn hit_rows(hits: &[SearchHit]) -> Vec<&Certificate> {
    hits.iter().map(|h| &h.certificate).collect()
}

fn render<T: Serialize>(report: &Report<'_, T>, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let env = Envelope { schema_version: SCHEMA_VERSION, command: report.command, report: report.body };
            let mut out = serde_json::to_vec_pretty(&env).map_err(|e| CliError::Runtime(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let rows = report
                .rows
                .as_ref()
                .ok_or_else(|| CliError::Usage(format!("`--format csv` is not available for `{}`", report.command)))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| CliError::Runtime(e.to_string());
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            for c in rows {
                let p = &c.progression;
                w.write_record([
                    p.a.to_string(),
                    p.b.to_string(),
                    c.p.to_string(),
                    c.k.to_string(),
                    c.scan_v.value.to_string(),
                    c.rhs_total.value.to_string(),
                    certainty_name(&c.rhs_total).to_string(),
                    status_name(&c.status).to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| io_err(path, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(path, e))?;
    tmp.as_file().sync_all().map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

pub fn metadata_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Body to `--out` (or stdout); run metadata to `<out>.meta.json`.
pub fn write_report<T: Serialize>(report: &Report<'_, T>, config: &RunConfig) -> Result<(), CliError> {
    let body = render(report, config.format)?;
    match &config.out {
        None => std::io::stdout().write_all(&body).map_err(|e| CliError::Io(format!("stdout: {e}"))),
        Some(path) => {
            write_atomic(path, &body)?;
            let meta = Metadata {
                schema_version: SCHEMA_VERSION,
                tool: "multcong",
                version: env!("CARGO_PKG_VERSION"),
                command: report.command,
                argv: std::env::args().collect(),
                generated_unix_seconds: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
                config,
            };
            let mut bytes = serde_json::to_vec_pretty(&meta).map_err(|e| CliError::Runtime(e.to_string()))?;
            bytes.push(b'\n');
            write_atomic(&metadata_path(path), &bytes)
        }
    }
}
