use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::args::{Format, OutputArgs, OUTPUT_DIR_ENV};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    /// 17 significant digits, independent of locale.
    fn csv_text(&self) -> String {
        match self {
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Real(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Column-oriented result of one command plus scalar metadata.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Vec<(&'static str, Cell)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(mut self, key: &'static str, value: Cell) -> Self {
        self.meta.push((key, value));
        self
    }

    /// CSV carries only the rows; metadata goes to standard error.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_text))?;
        }
        w.flush()?;
        if !self.meta.is_empty() {
            let mut err = io::stderr().lock();
            for (k, v) in &self.meta {
                writeln!(err, "{k}: {}", v.csv_text())?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.to_string(), v.json())).collect();
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        json!({ "columns": self.columns, "rows": rows, "meta": meta })
    }

    pub fn write(&self, output: &OutputArgs) -> Result<()> {
        emit(output, |w, format| match format {
            Format::Csv => self.write_csv(w),
            Format::Json => {
                serde_json::to_writer(&mut *w, &self.to_json())?;
                writeln!(w)?;
                Ok(())
            }
        })
    }
}

/// Resolves `--output` against the output-directory variable.
pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Opens the destination chosen by `output` and hands it to `body`.
pub fn emit(output: &OutputArgs, body: impl FnOnce(&mut dyn Write, Format) -> Result<()>) -> Result<()> {
    match &output.output {
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w, output.format)?;
            w.flush()?;
        }
        Some(path) => {
            let path = resolve_output(path);
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|source| CliError::Io { path: parent.into(), source })?;
            }
            let file = fs::File::create(&path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            let mut w = BufWriter::new(file);
            body(&mut w, output.format)?;
            w.flush().map_err(|source| CliError::Io { path, source })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_seventeen_digits() {
        assert_eq!(Cell::Real(0.1).csv_text(), "1.0000000000000001e-1");
        assert_eq!(Cell::Real(-2.5).csv_text(), "-2.5000000000000000e0");
        let back: f64 = Cell::Real(1.0 / 3.0).csv_text().parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }

    #[test]
    fn header_only_table() {
        let mut buf = Vec::new();
        Table::new(&["tau", "psi"]).write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "tau,psi\n");
    }
}
