//! CSV input and output-directory handling.

use std::fs;
use std::path::{Path, PathBuf};

use evidential::MassDocument;

use crate::CliError;

/// A CSV file with a header row.
#[derive(Clone, Debug)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Table, CliError> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| malformed(path, e))?;
        let headers = reader
            .headers()
            .map_err(|e| malformed(path, e))?
            .iter()
            .map(str::to_owned)
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| malformed(path, e))?;
            rows.push(record.iter().map(str::to_owned).collect());
        }
        if rows.is_empty() {
            return Err(CliError::Validation(format!(
                "{}: no data rows",
                path.display()
            )));
        }
        Ok(Table { headers, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, CliError> {
        self.column(name)
            .ok_or_else(|| CliError::Validation(format!("missing column `{name}`")))
    }

    /// Values of the given columns as numbers, one vector per row.
    pub fn numbers(&self, columns: &[usize]) -> Result<Vec<Vec<f64>>, CliError> {
        self.rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                columns
                    .iter()
                    .map(|&c| {
                        row[c].parse::<f64>().map_err(|_| {
                            CliError::Validation(format!(
                                "row {}, column `{}`: `{}` is not a number",
                                r + 1,
                                self.headers[c],
                                row[c]
                            ))
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

fn malformed(path: &Path, e: csv::Error) -> CliError {
    if let csv::ErrorKind::Io(_) = e.kind() {
        CliError::Runtime(format!("{}: {e}", path.display()))
    } else {
        CliError::Validation(format!("{}: malformed CSV: {e}", path.display()))
    }
}

/// Feature matrix with optional class labels from a `label` column.
#[derive(Clone, Debug)]
pub struct Samples {
    pub columns: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub labels: Option<Vec<String>>,
}

pub const LABEL_COLUMN: &str = "label";

impl Samples {
    pub fn read(path: &Path) -> Result<Samples, CliError> {
        let table = Table::read(path)?;
        let label = table.column(LABEL_COLUMN);
        let feature_cols: Vec<usize> = (0..table.headers.len())
            .filter(|&c| Some(c) != label)
            .collect();
        if feature_cols.is_empty() {
            return Err(CliError::Validation(format!(
                "{}: no feature columns",
                path.display()
            )));
        }
        Ok(Samples {
            columns: feature_cols
                .iter()
                .map(|&c| table.headers[c].clone())
                .collect(),
            features: table.numbers(&feature_cols)?,
            labels: label.map(|c| table.rows.iter().map(|r| r[c].clone()).collect()),
        })
    }

    /// Distinct labels in sorted order.
    pub fn classes(&self) -> Option<Vec<String>> {
        let mut classes = self.labels.clone()?;
        classes.sort();
        classes.dedup();
        Some(classes)
    }
}

/// Directory receiving the files of one command run.
#[derive(Clone, Debug)]
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<OutDir, CliError> {
        fs::create_dir_all(root).map_err(|source| CliError::Io {
            path: root.display().to_string(),
            source,
        })?;
        Ok(OutDir {
            root: root.to_path_buf(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(path)
    }
}

/// One JSON document per line.
pub fn jsonl(docs: &[MassDocument]) -> String {
    let mut out = String::new();
    for d in docs {
        out.push_str(&d.to_json());
        out.push('\n');
    }
    out
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes rows (already formatted fields) as CSV text.
pub fn csv_text(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 fields")
}
