use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::CliError;

pub type Row = Map<String, Value>;

/// Builds a row from `(key, value)` pairs.
#[macro_export]
macro_rules! row {
    ($($key:literal => $value:expr),* $(,)?) => {{
        let mut r = $crate::report::Row::new();
        $( r.insert($key.to_string(), serde_json::json!($value)); )*
        r
    }};
}

/// Machine-readable outcome of one command.
#[derive(Debug, Default)]
pub struct Report {
    pub command: String,
    pub params: Row,
    pub results: Vec<Row>,
    pub warnings: Vec<String>,
    pub elapsed_seconds: f64,
}

impl Report {
    pub fn new(command: &str, params: Row) -> Self {
        Self {
            command: command.to_string(),
            params,
            ..Self::default()
        }
    }

    pub fn to_json(&self) -> String {
        let body = json!({
            "command": self.command,
            "params": self.params,
            "results": self.results,
            "warnings": self.warnings,
            "timing": { "elapsed_seconds": self.elapsed_seconds },
        });
        let mut s = serde_json::to_string_pretty(&body).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        rows_to_csv(&self.results, None)
    }
}

/// Full-precision text for a CSV cell: 17 significant digits for numbers.
fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => i.to_string(),
            (_, Some(u), _) => u.to_string(),
            (_, _, Some(f)) => format!("{f:.16e}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// CSV with columns taken from the first row; an empty table still gets
/// the header when `columns` is given.
pub fn rows_to_csv(rows: &[Row], columns: Option<&[&str]>) -> Result<String, CliError> {
    let header: Vec<String> = match (columns, rows.first()) {
        (Some(cols), _) => cols.iter().map(|c| c.to_string()).collect(),
        (None, Some(first)) => first.keys().cloned().collect(),
        (None, None) => Vec::new(),
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    if !header.is_empty() {
        w.write_record(&header)?;
    }
    for r in rows {
        w.write_record(
            header
                .iter()
                .map(|k| r.get(k).map(cell).unwrap_or_default()),
        )?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes `body` to `path` (via a sibling temporary file, so a failed run
/// never leaves a partial report) or to stdout.
pub fn emit(body: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".partial");
            fs::write(&tmp, body)?;
            fs::rename(&tmp, path)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_seventeen_digits() {
        let rows = vec![row!("x" => 0.1, "n" => 3, "kind" => "re-k")];
        let csv = rows_to_csv(&rows, None).unwrap();
        assert_eq!(csv, "kind,n,x\nre-k,3,1.0000000000000001e-1\n");
    }

    #[test]
    fn empty_table_keeps_header() {
        let csv = rows_to_csv(&[], Some(&["a", "b"])).unwrap();
        assert_eq!(csv, "a,b\n");
    }

    #[test]
    fn json_has_fixed_top_level_keys() {
        let r = Report::new("kernel", Row::new());
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["command", "params", "results", "warnings", "timing"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
