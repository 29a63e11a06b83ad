use std::fs;
use std::path::Path;

use fracspace::verify::{Bound, CheckReport};
use serde::Serialize;

use crate::CliError;

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io(dir, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io(path, e))
}

/// CSV with a leading `#` comment line documenting the columns.
pub fn write_csv(path: &Path, comment: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).map_err(|e| io(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| io(path, e))?;
    }
    let body = w.into_inner().map_err(|e| io(path, e))?;
    let mut out = format!("# {comment}\n").into_bytes();
    out.extend(body);
    fs::write(path, out).map_err(|e| io(path, e))
}

pub fn num(x: f64) -> String {
    format!("{x:e}")
}

/// `report.json` and/or `report.csv` for a list of reports.
pub fn write_reports(dir: &Path, reports: &[CheckReport], json: bool, csv: bool) -> Result<(), CliError> {
    ensure_dir(dir)?;
    if json {
        write_json(&dir.join("report.json"), &reports)?;
    }
    if csv {
        let rows: Vec<Vec<String>> = reports
            .iter()
            .enumerate()
            .map(|(i, r)| {
                vec![
                    i.to_string(),
                    r.check_id.clone(),
                    r.passed.to_string(),
                    match r.bound {
                        Bound::Value(v) => num(v),
                        Bound::Existential => "none (existential)".into(),
                    },
                    serde_json::to_string(&r.params).unwrap_or_default(),
                    serde_json::to_value(r).map(|v| v["measured"].to_string()).unwrap_or_default(),
                    r.notes.clone(),
                    r.runtime_ms.to_string(),
                ]
            })
            .collect();
        write_csv(
            &dir.join("report.csv"),
            "one row per check; params and measured are JSON objects",
            &["index", "check_id", "passed", "bound", "params", "measured", "notes", "runtime_ms"],
            &rows,
        )?;
    }
    Ok(())
}
