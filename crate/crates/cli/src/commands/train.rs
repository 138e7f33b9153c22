//! Classifier training and prediction.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use evidential::classify::{
    enn_train, rbf_train, Dataset, EknnConfig, EknnModel, EnnModel, Init, RbfModel, TrainConfig,
};
use evidential::decide::decide_pignistic;
use evidential::optim::{Optimizer, TrainReport};
use evidential::{Frame, MassFunction};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::io::{csv_text, jsonl, read_text, OutDir, Samples};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classifier {
    Enn,
    Rbf,
    Eknn,
}

impl FromStr for Classifier {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "enn" => Ok(Classifier::Enn),
            "rbf" => Ok(Classifier::Rbf),
            "eknn" => Ok(Classifier::Eknn),
            other => Err(CliError::Validation(format!(
                "unknown classifier `{other}`"
            ))),
        }
    }
}

/// Model file contents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "classifier", content = "model", rename_all = "snake_case")]
pub enum SavedModel {
    Enn(EnnModel),
    Rbf(RbfModel),
    Eknn(EknnModel),
}

impl SavedModel {
    pub fn frame(&self) -> &Frame {
        match self {
            SavedModel::Enn(m) => &m.frame,
            SavedModel::Rbf(m) => &m.frame,
            SavedModel::Eknn(m) => &m.frame,
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<MassFunction, CliError> {
        let r = match self {
            SavedModel::Enn(m) => m.forward(x),
            SavedModel::Rbf(m) => m.forward(x).map(|o| o.mass),
            SavedModel::Eknn(m) => m.predict(x),
        };
        r.map_err(CliError::validation)
    }

    fn validate(&self) -> Result<(), CliError> {
        match self {
            SavedModel::Enn(m) => m.validate(),
            SavedModel::Rbf(m) => m.validate(),
            SavedModel::Eknn(m) => m.dataset().map(|_| ()),
        }
        .map_err(CliError::validation)
    }

    pub fn load(path: &Path) -> Result<SavedModel, CliError> {
        let model: SavedModel = serde_json::from_str(&read_text(path)?)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        model.validate()?;
        Ok(model)
    }
}

#[derive(Clone, Debug)]
pub struct TrainParams {
    pub classifier: Classifier,
    pub prototypes: usize,
    pub k: usize,
    pub lambda: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub init: Init,
    pub optimizer: Optimizer,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        let t = TrainConfig::default();
        TrainParams {
            classifier: Classifier::Enn,
            prototypes: 6,
            k: 5,
            lambda: t.lambda,
            epochs: t.epochs,
            learning_rate: t.learning_rate,
            init: t.init,
            optimizer: t.optimizer,
            seed: t.seed,
        }
    }
}

/// Labelled samples as a dataset over the sorted distinct labels.
pub fn dataset(samples: &Samples) -> Result<Dataset, CliError> {
    let (Some(labels), Some(classes)) = (&samples.labels, samples.classes()) else {
        return Err(CliError::Validation(format!(
            "training data needs a `{}` column",
            crate::io::LABEL_COLUMN
        )));
    };
    let frame = Frame::new(classes.iter().cloned()).map_err(CliError::validation)?;
    let y = labels
        .iter()
        .map(|l| frame.index_of(l))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::validation)?;
    Dataset::new(&frame, samples.features.clone(), y).map_err(CliError::validation)
}

pub fn train_model(
    data: &Dataset,
    params: &TrainParams,
) -> Result<(SavedModel, Option<TrainReport>), CliError> {
    let config = TrainConfig {
        lambda: params.lambda,
        epochs: params.epochs,
        learning_rate: params.learning_rate,
        seed: params.seed,
        init: params.init,
        optimizer: params.optimizer,
    };
    let v = CliError::validation;
    Ok(match params.classifier {
        Classifier::Enn => {
            let (m, r) = enn_train(data, params.prototypes, &config).map_err(v)?;
            (SavedModel::Enn(m), Some(r))
        }
        Classifier::Rbf => {
            let (m, r) = rbf_train(data, params.prototypes, &config).map_err(v)?;
            (SavedModel::Rbf(m), Some(r))
        }
        Classifier::Eknn => {
            let cfg = EknnConfig::with_default_scale(data, params.k).map_err(v)?;
            (
                SavedModel::Eknn(EknnModel::new(data, cfg).map_err(v)?),
                None,
            )
        }
    })
}

pub fn cmd_train(data_path: &Path, params: &TrainParams, out: &Path) -> Result<String, CliError> {
    let data = dataset(&Samples::read(data_path)?)?;
    let (model, report) = train_model(&data, params)?;
    let dir = OutDir::create(out)?;
    let text = serde_json::to_string_pretty(&model).map_err(CliError::runtime)?;
    let path = dir.write("model.json", &(text + "\n"))?;
    let mut msg = format!("model written to {}\n", path.display());
    if let Some(r) = report {
        let rows: Vec<Vec<String>> = r
            .losses
            .iter()
            .enumerate()
            .map(|(e, l)| vec![e.to_string(), l.to_string()])
            .collect();
        dir.write(
            "training.csv",
            &csv_text(&["epoch".into(), "loss".into()], &rows),
        )?;
        let _ = writeln!(msg, "loss {} -> {}", r.initial_loss, r.final_loss);
    }
    Ok(msg)
}

pub struct Predictions {
    pub masses: Vec<MassFunction>,
    pub decisions: Vec<usize>,
    /// Fraction of correct decisions when the data carries labels.
    pub accuracy: Option<f64>,
}

pub fn predict_samples(model: &SavedModel, samples: &Samples) -> Result<Predictions, CliError> {
    let frame = model.frame();
    let masses = samples
        .features
        .iter()
        .map(|x| model.predict(x))
        .collect::<Result<Vec<_>, _>>()?;
    let decisions: Vec<usize> = masses.iter().map(decide_pignistic).collect();
    let accuracy = match &samples.labels {
        Some(labels) => {
            let truth = labels
                .iter()
                .map(|l| frame.index_of(l))
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::validation)?;
            let hits = truth.iter().zip(&decisions).filter(|(a, b)| a == b).count();
            Some(hits as f64 / truth.len() as f64)
        }
        None => None,
    };
    Ok(Predictions {
        masses,
        decisions,
        accuracy,
    })
}

pub fn cmd_predict(model_path: &Path, data_path: &Path, out: &Path) -> Result<String, CliError> {
    let model = SavedModel::load(model_path)?;
    let samples = Samples::read(data_path)?;
    let pred = predict_samples(&model, &samples)?;
    let frame = model.frame();
    let docs: Vec<_> = pred
        .masses
        .iter()
        .zip(&pred.decisions)
        .map(|(m, &d)| {
            let mut meta = Map::new();
            meta.insert("decision".into(), Value::from(frame.label(d)));
            m.to_document().with_metadata(meta)
        })
        .collect();
    let mut headers = vec!["row".to_string(), "decision".into()];
    headers.extend(frame.labels().iter().map(|l| format!("betp_{l}")));
    let rows: Vec<Vec<String>> = pred
        .masses
        .iter()
        .zip(&pred.decisions)
        .enumerate()
        .map(|(i, (m, &d))| {
            let mut row = vec![i.to_string(), frame.label(d).to_string()];
            row.extend(m.pignistic().iter().map(|p| p.to_string()));
            row
        })
        .collect();
    let dir = OutDir::create(out)?;
    dir.write("predictions.jsonl", &jsonl(&docs))?;
    dir.write("predictions.csv", &csv_text(&headers, &rows))?;
    let mut msg = format!(
        "{} predictions written to {}\n",
        docs.len(),
        dir.path().display()
    );
    if let Some(a) = pred.accuracy {
        let _ = writeln!(msg, "accuracy {a}");
        dir.write(
            "metrics.csv",
            &evidential::metrics::report_csv(&[("accuracy", a)]),
        )?;
    }
    Ok(msg)
}
