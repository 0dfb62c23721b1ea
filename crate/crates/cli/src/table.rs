use std::path::Path;

use casimir_core::materials::TableError;
use casimir_core::OpticalTable;

use crate::error::CliError;

/// Reads a two-column ω (rad/s), ε″ text table; `#` starts a comment.
pub fn ingest_optical_table(path: &Path) -> Result<OpticalTable, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_optical_table(&text, path)
}

pub fn parse_optical_table(text: &str, path: &Path) -> Result<OpticalTable, CliError> {
    let fail = |line: usize, message: String| CliError::Table { path: path.to_path_buf(), line, message };
    let mut lines = Vec::new();
    let mut omega = Vec::new();
    let mut eps2 = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(fail(line_no, format!("expected 2 columns, found {}", fields.len())));
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|_| fail(line_no, format!("`{s}` is not a number")));
        omega.push(parse(fields[0])?);
        eps2.push(parse(fields[1])?);
        lines.push(line_no);
    }
    OpticalTable::new(omega, eps2).map_err(|e| {
        let line = match e {
            TableError::NotIncreasing { row } | TableError::NegativeEps2 { row } | TableError::NonFinite { row } => {
                lines[row]
            }
            _ => lines.last().copied().unwrap_or(0),
        };
        let message = match e {
            TableError::NotIncreasing { .. } => "omega is not strictly increasing".to_string(),
            TableError::NegativeEps2 { .. } => "eps2 is negative".to_string(),
            TableError::NonFinite { .. } => "omega must be finite and positive, eps2 finite".to_string(),
            other => other.to_string(),
        };
        fail(line, message)
    })
}
