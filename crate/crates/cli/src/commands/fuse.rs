//! Fusion of several per-sample contour tables with contextual discounting.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use evidential::fusion::{fit_reliability, fuse_discounted_sources, FitConfig, ReliabilityVector};
use evidential::{ContourFunction, Frame};

use crate::io::{csv_text, OutDir, Table};
use crate::CliError;

/// Reliabilities to apply.
#[derive(Clone, Debug)]
pub enum Betas {
    /// Every source fully reliable.
    Ones,
    /// Table with a `source` column and one column per class.
    File(PathBuf),
    /// Learn them from a table with a `label` column.
    Fit { labels: PathBuf, config: FitConfig },
}

/// Per-source contours of every sample, checked against a common frame.
pub struct Sources {
    pub frame: Frame,
    /// `values[t][n][c]`
    pub values: Vec<Vec<Vec<f64>>>,
}

pub fn read_sources(paths: &[PathBuf]) -> Result<Sources, CliError> {
    if paths.is_empty() {
        return Err(CliError::Validation(
            "at least one source is required".into(),
        ));
    }
    let mut frame: Option<Frame> = None;
    let mut values = Vec::with_capacity(paths.len());
    for path in paths {
        let table = Table::read(path)?;
        let f = Frame::new(table.headers.iter().cloned()).map_err(CliError::validation)?;
        match &frame {
            Some(first) if *first != f => {
                return Err(CliError::Validation(format!(
                    "{}: frame {:?} differs from {:?}",
                    path.display(),
                    f.labels(),
                    first.labels()
                )))
            }
            Some(_) => {}
            None => frame = Some(f),
        }
        let all: Vec<usize> = (0..table.headers.len()).collect();
        let rows = table.numbers(&all)?;
        if let Some(first) = values.first() {
            let n = Vec::len(first);
            if rows.len() != n {
                return Err(CliError::Validation(format!(
                    "{}: {} rows, expected {n}",
                    path.display(),
                    rows.len()
                )));
            }
        }
        values.push(rows);
    }
    Ok(Sources {
        frame: frame.expect("at least one source"),
        values,
    })
}

fn read_betas(
    path: &Path,
    frame: &Frame,
    sources: usize,
) -> Result<Vec<ReliabilityVector>, CliError> {
    let table = Table::read(path)?;
    let cols = frame
        .labels()
        .iter()
        .map(|l| table.require(l))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = table.numbers(&cols)?;
    if rows.len() != sources {
        return Err(CliError::Validation(format!(
            "{}: {} reliability rows for {sources} sources",
            path.display(),
            rows.len()
        )));
    }
    rows.into_iter()
        .map(|r| ReliabilityVector::new(r).map_err(CliError::validation))
        .collect()
}

fn read_labels(path: &Path, frame: &Frame) -> Result<Vec<usize>, CliError> {
    let table = Table::read(path)?;
    let c = table.require(crate::io::LABEL_COLUMN)?;
    table
        .rows
        .iter()
        .map(|r| frame.index_of(&r[c]).map_err(CliError::validation))
        .collect()
}

pub struct FuseOutcome {
    pub fused: Vec<Vec<f64>>,
    pub betas: Vec<ReliabilityVector>,
    pub fit_loss: Option<f64>,
}

pub fn fuse(sources: &Sources, betas: &Betas) -> Result<FuseOutcome, CliError> {
    let t = sources.values.len();
    let c = sources.frame.len();
    let mut fit_loss = None;
    let betas = match betas {
        Betas::Ones => vec![ReliabilityVector::constant(c, 1.0).map_err(CliError::runtime)?; t],
        Betas::File(path) => read_betas(path, &sources.frame, t)?,
        Betas::Fit { labels, config } => {
            let y = read_labels(labels, &sources.frame)?;
            let fit = fit_reliability(&sources.values, &y, config).map_err(CliError::validation)?;
            fit_loss = Some(fit.report.final_loss);
            fit.betas
        }
    };
    let n = sources.values[0].len();
    let mut fused = Vec::with_capacity(n);
    for i in 0..n {
        let pls = sources
            .values
            .iter()
            .map(|s| {
                ContourFunction::new(&sources.frame, s[i].clone()).map_err(CliError::validation)
            })
            .collect::<Result<Vec<_>, _>>()?;
        fused.push(fuse_discounted_sources(&pls, &betas).map_err(CliError::validation)?);
    }
    Ok(FuseOutcome {
        fused,
        betas,
        fit_loss,
    })
}

/// First index of the largest value.
fn argmax(p: &[f64]) -> usize {
    p.iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > p[best] { i } else { best })
}

pub fn cmd_fuse(paths: &[PathBuf], betas: &Betas, out: &Path) -> Result<String, CliError> {
    let sources = read_sources(paths)?;
    let outcome = fuse(&sources, betas)?;
    let labels = sources.frame.labels();
    let dir = OutDir::create(out)?;

    let mut headers: Vec<String> = labels.to_vec();
    headers.push("decision".into());
    let rows: Vec<Vec<String>> = outcome
        .fused
        .iter()
        .map(|p| {
            let mut row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            row.push(labels[argmax(p)].clone());
            row
        })
        .collect();
    dir.write("fused.csv", &csv_text(&headers, &rows))?;

    let mut headers = vec!["source".to_string()];
    headers.extend(labels.iter().cloned());
    let rows: Vec<Vec<String>> = outcome
        .betas
        .iter()
        .zip(paths)
        .map(|(b, p)| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let mut row = vec![name];
            row.extend(b.values().iter().map(|v| v.to_string()));
            row
        })
        .collect();
    dir.write("betas.csv", &csv_text(&headers, &rows))?;

    let mut msg = format!(
        "{} fused rows written to {}\n",
        outcome.fused.len(),
        dir.path().display()
    );
    if let Some(loss) = outcome.fit_loss {
        let _ = writeln!(msg, "fitted reliabilities, dice loss {loss}");
    }
    Ok(msg)
}
