//! Result records and their JSON/CSV writers.
//!
//! CSV numbers use `{:.16e}` (17 significant digits, `.` separator). With an
//! output directory, a record `<stem>` becomes `<stem>.csv` (scalars),
//! `<stem>_<table>.csv` per table and `<stem>.meta.json`; as JSON it is a
//! single `<stem>.json`. Without a directory everything goes to stdout.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Format;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Analytic,
    Ancilla,
    Montecarlo,
    Multiplex,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Analytic => "analytic",
            Source::Ancilla => "ancilla",
            Source::Montecarlo => "montecarlo",
            Source::Multiplex => "multiplex",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub command: String,
    pub config_sha256: String,
    pub seed: Option<u64>,
    pub version: String,
    pub core_version: String,
    pub rng_algorithm: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scalar {
    pub name: String,
    pub source: Source,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    /// Source of every numeric column that does not name its own.
    pub source: Source,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, source: Source, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            source,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub metadata: Metadata,
    pub scalars: Vec<Scalar>,
    pub tables: Vec<Table>,
}

impl ResultRecord {
    pub fn new(metadata: Metadata) -> Self {
        Self {
            metadata,
            scalars: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn scalar(&mut self, name: &str, source: Source, value: f64) {
        self.scalars.push(Scalar {
            name: name.to_string(),
            source,
            value,
        });
    }

    pub fn flag(&mut self, name: &str, source: Source, value: bool) {
        self.scalar(name, source, if value { 1.0 } else { 0.0 });
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn scalar_value(&self, name: &str) -> Option<f64> {
        self.scalars.iter().find(|s| s.name == name).map(|s| s.value)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records contain only finite numbers and strings") + "\n"
    }

    pub fn scalars_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(["name", "source", "value"]).map_err(io)?;
        for s in &self.scalars {
            w.write_record([s.name.as_str(), s.source.as_str(), &format!("{:.16e}", s.value)])
                .map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    /// Write to `dir` (created if needed) or to stdout; returns the files written.
    pub fn emit(&self, stem: &str, format: Format, dir: Option<&Path>) -> CliResult<Vec<PathBuf>> {
        match dir {
            Some(dir) => self.write_files(stem, format, dir),
            None => {
                let mut out = std::io::stdout().lock();
                let io = |e: std::io::Error| CliError::Io(e.to_string());
                match format {
                    Format::Json => out.write_all(self.to_json().as_bytes()).map_err(io)?,
                    Format::Csv => {
                        let mut first = true;
                        if !self.scalars.is_empty() {
                            out.write_all(&self.scalars_csv()?).map_err(io)?;
                            first = false;
                        }
                        for t in &self.tables {
                            if !first {
                                out.write_all(b"\n").map_err(io)?;
                            }
                            out.write_all(&table_csv(t)?).map_err(io)?;
                            first = false;
                        }
                    }
                }
                out.flush().map_err(io)?;
                Ok(Vec::new())
            }
        }
    }

    fn write_files(&self, stem: &str, format: Format, dir: &Path) -> CliResult<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        let mut written = Vec::new();
        let mut put = |name: String, bytes: &[u8]| -> CliResult<()> {
            let path = dir.join(name);
            std::fs::write(&path, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            written.push(path);
            Ok(())
        };
        match format {
            Format::Json => put(format!("{stem}.json"), self.to_json().as_bytes())?,
            Format::Csv => {
                if !self.scalars.is_empty() {
                    put(format!("{stem}.csv"), &self.scalars_csv()?)?;
                }
                for t in &self.tables {
                    let name = if t.name == stem { format!("{stem}.csv") } else { format!("{stem}_{}.csv", t.name) };
                    put(name, &table_csv(t)?)?;
                }
                let meta = serde_json::to_string_pretty(&self.metadata).expect("plain metadata") + "\n";
                put(format!("{stem}.meta.json"), meta.as_bytes())?;
            }
        }
        Ok(written)
    }
}

pub fn table_csv(t: &Table) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(&t.columns).map_err(io)?;
    for row in &t.rows {
        w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

/// Dense matrix dump: a `dim <d> modes <k>` line, then one row per line as
/// whitespace-separated `re im` pairs.
pub fn matrix_dump(dim: usize, modes: usize, rows: usize, cols: usize, entry: impl Fn(usize, usize) -> (f64, f64)) -> String {
    let mut s = format!("dim {dim} modes {modes}\n");
    for r in 0..rows {
        let line: Vec<String> = (0..cols)
            .map(|c| {
                let (re, im) = entry(r, c);
                format!("{re:.16e} {im:.16e}")
            })
            .collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> Metadata {
        Metadata {
            command: "probs".into(),
            config_sha256: "00".into(),
            seed: Some(7),
            version: "0".into(),
            core_version: "0".into(),
            rng_algorithm: "x".into(),
        }
    }

    #[test]
    fn csv_numbers_keep_seventeen_digits() {
        let mut r = ResultRecord::new(meta());
        r.scalar("p", Source::Analytic, (-2.0f64).exp());
        let text = String::from_utf8(r.scalars_csv().unwrap()).unwrap();
        assert_eq!(text, "name,source,value\np,analytic,1.3533528323661270e-1\n");
        let parsed: f64 = text.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(parsed, (-2.0f64).exp());
    }

    #[test]
    fn empty_cells_stay_empty() {
        let mut t = Table::new("t", Source::Analytic, &["a", "b", "c"]);
        t.push(vec![Cell::from(1u64), Cell::from(None), Cell::from("x")]);
        assert_eq!(String::from_utf8(table_csv(&t).unwrap()).unwrap(), "a,b,c\n1,,x\n");
    }

    #[test]
    fn json_labels_sources() {
        let mut r = ResultRecord::new(meta());
        r.scalar("gap", Source::Ancilla, 0.0);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["scalars"][0]["source"], "ancilla");
        assert_eq!(v["metadata"]["seed"], 7);
    }

    #[test]
    fn dump_format() {
        let s = matrix_dump(2, 1, 2, 2, |r, c| (if r == c { 1.0 } else { 0.0 }, 0.0));
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("dim 2 modes 1"));
        assert_eq!(lines.next().unwrap().split_whitespace().count(), 4);
    }
}
