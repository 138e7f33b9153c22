//! Evidential and fuzzy c-means on a feature table.

use std::fmt::Write as _;
use std::path::Path;

use evidential::cluster::{
    ecm_fit, fcm_fit, focal_structure, EcmConfig, EcmFit, FcmConfig, FuzzyPartition,
};
use evidential::metrics::report_csv;
use evidential::{Error, Frame, MassDocument, MassFunction};
use serde_json::{Map, Value};

use crate::io::{csv_text, jsonl, OutDir, Samples};
use crate::CliError;

/// Fraction of objects whose cluster matches the true class under the best
/// one-to-one relabelling of the clusters. Unassigned objects count as errors.
pub fn best_permutation_accuracy(pred: &[Option<usize>], truth: &[usize], clusters: usize) -> f64 {
    let classes = truth.iter().max().map_or(0, |m| m + 1).max(clusters);
    let mut counts = vec![vec![0usize; classes]; clusters];
    for (p, &t) in pred.iter().zip(truth) {
        if let Some(p) = *p {
            counts[p][t] += 1;
        }
    }
    let mut perm: Vec<usize> = (0..classes).collect();
    let mut best = 0;
    permute(&mut perm, 0, &mut |p| {
        let hits = (0..clusters).map(|k| counts[k][p[k]]).sum();
        best = best.max(hits);
    });
    best as f64 / truth.len() as f64
}

fn permute(v: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, visit);
        v.swap(k, i);
    }
}

fn truth(samples: &Samples) -> Option<Vec<usize>> {
    let classes = samples.classes()?;
    let labels = samples.labels.as_ref()?;
    Some(
        labels
            .iter()
            .map(|l| classes.binary_search(l).expect("label drawn from classes"))
            .collect(),
    )
}

#[derive(Clone, Debug)]
pub struct EcmParams {
    pub config: EcmConfig,
    /// Include the pairs of clusters as focal sets.
    pub pairs: bool,
}

pub fn ecm_documents(fit: &EcmFit) -> Result<Vec<MassDocument>, CliError> {
    let p = &fit.partition;
    (0..p.len())
        .map(|i| {
            let mut meta = Map::new();
            meta.insert("empty_mass".into(), Value::from(p.empty_mass()[i]));
            let m = match p.to_mass(i) {
                Ok(m) => m,
                Err(Error::AllMassEmpty(_)) => {
                    meta.insert("all_mass_empty".into(), Value::from(true));
                    MassFunction::vacuous(p.frame())
                }
                Err(e) => return Err(CliError::runtime(e)),
            };
            Ok(m.to_document().with_metadata(meta))
        })
        .collect()
}

pub fn cmd_ecm(data: &Path, params: &EcmParams, out: &Path) -> Result<String, CliError> {
    let samples = Samples::read(data)?;
    let c = params.config.clusters;
    if c == 0 {
        return Err(CliError::Validation(
            "at least one cluster is required".into(),
        ));
    }
    let focal = focal_structure(c, params.pairs);
    let fit = ecm_fit(&samples.features, &params.config, &focal).map_err(CliError::validation)?;
    let dir = OutDir::create(out)?;
    let (header, rows) = fit.partition.flat();
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect())
        .collect();
    dir.write("partition.csv", &csv_text(&header, &rows))?;
    dir.write(
        "prototypes.csv",
        &matrix_csv(&samples.columns, &fit.prototypes),
    )?;
    dir.write("masses.jsonl", &jsonl(&ecm_documents(&fit)?))?;
    let mut report = vec![
        ("objective", fit.objective),
        ("iterations", fit.iterations as f64),
        ("converged", fit.converged as u8 as f64),
    ];
    if let Some(t) = truth(&samples) {
        report.push((
            "accuracy",
            best_permutation_accuracy(&fit.partition.pignistic_labels(), &t, c),
        ));
    }
    dir.write("summary.csv", &report_csv(&report))?;
    Ok(summary_text("ecm", &report, dir.path()))
}

pub fn cmd_fcm(data: &Path, config: &FcmConfig, out: &Path) -> Result<String, CliError> {
    let samples = Samples::read(data)?;
    let fit = fcm_fit(&samples.features, config).map_err(CliError::validation)?;
    let dir = OutDir::create(out)?;
    let frame = Frame::indexed(config.clusters).map_err(CliError::validation)?;
    dir.write(
        "memberships.csv",
        &matrix_csv(frame.labels(), &fit.memberships),
    )?;
    dir.write("centers.csv", &matrix_csv(&samples.columns, &fit.centers))?;
    dir.write("masses.jsonl", &jsonl(&fcm_documents(&frame, &fit)?))?;
    let mut report = vec![
        ("objective", fit.objectives.last().copied().unwrap_or(0.0)),
        ("iterations", fit.iterations as f64),
        ("converged", fit.converged as u8 as f64),
    ];
    if let Some(t) = truth(&samples) {
        let pred: Vec<Option<usize>> = fit.hard_labels().into_iter().map(Some).collect();
        report.push((
            "accuracy",
            best_permutation_accuracy(&pred, &t, config.clusters),
        ));
    }
    dir.write("summary.csv", &report_csv(&report))?;
    Ok(summary_text("fcm", &report, dir.path()))
}

/// Memberships read as Bayesian mass functions.
fn fcm_documents(frame: &Frame, fit: &FuzzyPartition) -> Result<Vec<MassDocument>, CliError> {
    fit.memberships
        .iter()
        .map(|u| {
            Ok(MassFunction::bayesian(frame, u)
                .map_err(CliError::runtime)?
                .to_document())
        })
        .collect()
}

fn matrix_csv(headers: &[String], rows: &[Vec<f64>]) -> String {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect())
        .collect();
    csv_text(headers, &rows)
}

fn summary_text(name: &str, report: &[(&str, f64)], dir: &Path) -> String {
    let mut out = format!("{name} results written to {}\n", dir.display());
    for (k, v) in report {
        let _ = writeln!(out, "{k} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_accuracy() {
        let truth = [0, 0, 1, 1, 2, 2];
        let pred = [Some(2), Some(2), Some(0), Some(0), Some(1), None];
        assert!((best_permutation_accuracy(&pred, &truth, 3) - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(
            best_permutation_accuracy(&[Some(0); 4], &[0, 0, 0, 0], 1),
            1.0
        );
    }
}
