//! Mass functions from per-row measurements with one of the BBA models.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use evidential::bba::{
    appriou1, appriou2, bfod, binary_frame, gd_mass, ratio_mv, shafer, zhu_mass, ClusterStats,
    ConfidenceFunction, LikelihoodVector, RATIO_MV_ALPHA, RATIO_MV_BETA, ZHU_EPSILON,
};
use evidential::cluster::focal_structure;
use evidential::{Frame, MassDocument, MassFunction};
use serde_json::{json, Map, Value};

use crate::io::{jsonl, read_text, OutDir, Table};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Shafer,
    Appriou1,
    Appriou2,
    Bfod,
    Zhu,
    RatioMv,
    Gd,
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "shafer" => Method::Shafer,
            "appriou1" => Method::Appriou1,
            "appriou2" => Method::Appriou2,
            "bfod" => Method::Bfod,
            "zhu" => Method::Zhu,
            "ratio-mv" => Method::RatioMv,
            "gd" => Method::Gd,
            other => {
                return Err(CliError::Validation(format!(
                    "unknown BBA method `{other}`"
                )))
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct BbaParams {
    /// Label of the hypothesis on binary frames.
    pub hypothesis: String,
    pub hbar: f64,
    pub intercept: Option<f64>,
    pub max_support: Option<f64>,
    pub confidence: ConfidenceFunction,
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
    /// JSON array of per-cluster statistics for the Gaussian model.
    pub stats: Option<PathBuf>,
}

impl Default for BbaParams {
    fn default() -> Self {
        BbaParams {
            hypothesis: "w".into(),
            hbar: 1.0,
            intercept: None,
            max_support: None,
            confidence: ConfidenceFunction::default(),
            epsilon: ZHU_EPSILON,
            alpha: RATIO_MV_ALPHA,
            beta: RATIO_MV_BETA,
            stats: None,
        }
    }
}

fn columns(table: &Table, names: &[&str]) -> Result<Vec<Vec<f64>>, CliError> {
    let idx = names
        .iter()
        .map(|n| table.require(n))
        .collect::<Result<Vec<_>, _>>()?;
    table.numbers(&idx)
}

fn doc(m: MassFunction, meta: Map<String, Value>) -> MassDocument {
    let d = m.to_document();
    if meta.is_empty() {
        d
    } else {
        d.with_metadata(meta)
    }
}

fn meta(pairs: Value) -> Map<String, Value> {
    match pairs {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

/// One document per input row.
pub fn bba_documents(
    method: Method,
    table: &Table,
    params: &BbaParams,
) -> Result<Vec<MassDocument>, CliError> {
    let v = CliError::validation;
    let binary = || binary_frame(&params.hypothesis).map_err(v);
    let mut docs = Vec::with_capacity(table.rows.len());
    match method {
        Method::Shafer => {
            let frame = Frame::new(table.headers.iter().cloned()).map_err(v)?;
            let all: Vec<usize> = (0..table.headers.len()).collect();
            for row in table.numbers(&all)? {
                let (_, m) = shafer(&frame, &LikelihoodVector::new(row).map_err(v)?).map_err(v)?;
                docs.push(doc(m, Map::new()));
            }
        }
        Method::Appriou1 | Method::Appriou2 => {
            let frame = binary()?;
            for row in columns(table, &["likelihood", "reliability"])? {
                let f = if method == Method::Appriou1 {
                    appriou1
                } else {
                    appriou2
                };
                docs.push(doc(
                    f(&frame, row[0], row[1], params.hbar).map_err(v)?,
                    Map::new(),
                ));
            }
        }
        Method::Bfod => {
            let frame = binary()?;
            let (Some(a), Some(b)) = (params.intercept, params.max_support) else {
                return Err(CliError::Validation(
                    "bfod needs --intercept and --max-support".into(),
                ));
            };
            for row in columns(table, &["value"])? {
                let cf = params.confidence.eval(row[0]);
                docs.push(doc(
                    bfod(&frame, cf, a, b).map_err(v)?,
                    meta(json!({ "confidence": cf })),
                ));
            }
        }
        Method::Zhu => {
            let frame = Frame::new(["c", "c_next"]).map_err(v)?;
            for row in columns(table, &["u_c", "u_next"])? {
                let z = zhu_mass(&frame, 0, row[0], row[1], params.epsilon).map_err(v)?;
                docs.push(doc(
                    z.mass,
                    meta(json!({ "overlap": z.overlap, "pair_mass": z.pair_mass })),
                ));
            }
        }
        Method::RatioMv => {
            let frame = binary()?;
            for row in columns(table, &["f1", "f2"])? {
                let r = ratio_mv(&frame, row[0], row[1], params.alpha, params.beta).map_err(v)?;
                let ratio = if r.ratio.is_finite() {
                    json!(r.ratio)
                } else {
                    json!("inf")
                };
                docs.push(doc(
                    r.mass,
                    meta(json!({ "category": r.category.to_string(), "ratio": ratio })),
                ));
            }
        }
        Method::Gd => {
            let Some(path) = &params.stats else {
                return Err(CliError::Validation("gd needs --stats".into()));
            };
            let stats: Vec<ClusterStats> = serde_json::from_str(&read_text(path)?)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            let frame = Frame::indexed(stats.len()).map_err(v)?;
            let focal = focal_structure(stats.len(), true);
            for row in columns(table, &["x"])? {
                docs.push(doc(
                    gd_mass(&frame, row[0], &stats, &focal).map_err(v)?,
                    Map::new(),
                ));
            }
        }
    }
    Ok(docs)
}

pub fn cmd_bba(
    method: &str,
    input: &Path,
    params: &BbaParams,
    out: &Path,
) -> Result<String, CliError> {
    let method: Method = method.parse()?;
    let table = Table::read(input)?;
    let docs = bba_documents(method, &table, params)?;
    let dir = OutDir::create(out)?;
    let path = dir.write("masses.jsonl", &jsonl(&docs))?;
    Ok(format!(
        "{} mass functions written to {}\n",
        docs.len(),
        path.display()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use evidential::FocalSet;

    fn table(headers: &[&str], rows: &[&[&str]]) -> Table {
        Table {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: rows
                .iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect())
                .collect(),
        }
    }

    #[test]
    fn method_examples() {
        let p = BbaParams::default();
        let docs = bba_documents(
            Method::RatioMv,
            &table(&["f1", "f2"], &[&["0.18", "0.81"]]),
            &p,
        )
        .unwrap();
        assert_eq!(docs[0].metadata.as_ref().unwrap()["category"], "NU");
        let docs = bba_documents(
            Method::Shafer,
            &table(&["a", "b", "c"], &[&["0.4", "0.4", "0.4"]]),
            &p,
        )
        .unwrap();
        assert!(docs[0].to_mass().unwrap().is_vacuous());
        let docs = bba_documents(
            Method::Zhu,
            &table(&["u_c", "u_next"], &[&["0.5", "0.5"]]),
            &p,
        )
        .unwrap();
        assert_eq!(docs[0].metadata.as_ref().unwrap()["pair_mass"], 0.5);
        let m = docs[0].to_mass().unwrap();
        assert!((m.mass(FocalSet::full(2)) - 1.0 / 3.0).abs() < 1e-12);
        assert!("nope".parse::<Method>().is_err());
        assert!(bba_documents(Method::Bfod, &table(&["value"], &[&["0.5"]]), &p).is_err());
        assert!(bba_documents(Method::Zhu, &table(&["u"], &[&["0.5"]]), &p).is_err());
        assert!(bba_documents(
            Method::Zhu,
            &table(&["u_c", "u_next"], &[&["x", "0.5"]]),
            &p
        )
        .is_err());
    }
}
