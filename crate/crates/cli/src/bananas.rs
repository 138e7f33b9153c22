//! Regularization sweep of the ENN and RBF classifiers on banana data.

use std::fmt::Write as _;

use evidential::classify::{enn_train, rbf_train, Dataset, EnnModel, Init, RbfModel, TrainConfig};
use evidential::decide::decide_pignistic;
use evidential::rng::child_seed;
use evidential::synthetic::{bananas, gaussian_blobs, BananaSpec};
use evidential::{Frame, MassFunction};

use crate::CliError;

pub const DEFAULT_LAMBDAS: [f64; 6] = [1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0];

/// Center and spread of the off-manifold class used to probe vacuity.
pub const OFF_MANIFOLD_CENTER: [f64; 2] = [2.5, 1.5];
pub const OFF_MANIFOLD_SIGMA: f64 = 0.2;

#[derive(Clone, Debug)]
pub struct BananaConfig {
    pub lambdas: Vec<f64>,
    pub seeds: Vec<u64>,
    pub prototypes: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub n_off: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub init: Init,
    /// Points per side of the contour grid; 0 skips the grid.
    pub grid: usize,
}

impl Default for BananaConfig {
    fn default() -> Self {
        BananaConfig {
            lambdas: DEFAULT_LAMBDAS.to_vec(),
            seeds: (0..5).collect(),
            prototypes: 6,
            n_train: 300,
            n_test: 1000,
            n_off: 200,
            epochs: 1000,
            learning_rate: 0.1,
            init: Init::KMeans,
            grid: 100,
        }
    }
}

impl BananaConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.lambdas.is_empty() || self.seeds.is_empty() {
            return Err(CliError::Validation(
                "lambda grid and seed list must be nonempty".into(),
            ));
        }
        if let Some(l) = self
            .lambdas
            .iter()
            .find(|l| !(**l >= 0.0) || !l.is_finite())
        {
            return Err(CliError::Validation(format!("invalid lambda {l}")));
        }
        if self.prototypes == 0 || self.n_train < 2 || self.n_test == 0 {
            return Err(CliError::Validation(
                "prototypes and set sizes must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Enn,
    Rbf,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Enn => "enn",
            Model::Rbf => "rbf",
        }
    }
}

/// One trained model of the sweep.
#[derive(Clone, Debug)]
pub struct Cell {
    pub model: Model,
    pub lambda: f64,
    pub seed: u64,
    pub test_error: f64,
    /// Mean `m(frame)` over the test set.
    pub test_ignorance: f64,
    pub train_ignorance: f64,
    pub off_ignorance: f64,
}

/// Per-(model, lambda) averages over the seeds.
#[derive(Clone, Debug)]
pub struct Summary {
    pub model: Model,
    pub lambda: f64,
    pub test_error: f64,
    pub test_ignorance: f64,
    pub train_ignorance: f64,
    pub off_ignorance: f64,
}

#[derive(Clone, Debug)]
pub struct BananaResults {
    pub cells: Vec<Cell>,
    pub summary: Vec<Summary>,
    /// `(model, lambda, x, y, m1, m2, m_frame)` over the grid, first seed only.
    pub grid: Vec<(Model, f64, f64, f64, f64, f64, f64)>,
}

enum Trained {
    Enn(EnnModel),
    Rbf(RbfModel),
}

impl Trained {
    fn mass(&self, x: &[f64]) -> MassFunction {
        match self {
            Trained::Enn(m) => m.forward(x).expect("dimension checked by construction"),
            Trained::Rbf(m) => {
                m.forward(x)
                    .expect("dimension checked by construction")
                    .mass
            }
        }
    }
}

fn mean_ignorance(model: &Trained, xs: &[Vec<f64>]) -> f64 {
    let omega = Frame::indexed(2).expect("binary frame").omega();
    xs.iter().map(|x| model.mass(x).mass(omega)).sum::<f64>() / xs.len() as f64
}

fn error_rate(model: &Trained, xs: &[Vec<f64>], ys: &[usize]) -> f64 {
    let wrong = xs
        .iter()
        .zip(ys)
        .filter(|(x, &y)| decide_pignistic(&model.mass(x)) != y)
        .count();
    wrong as f64 / xs.len() as f64
}

/// Box enclosing both arcs and the off-manifold blob.
pub const GRID_BOX: [(f64, f64); 2] = [(-2.0, 4.0), (-2.0, 3.0)];

pub fn run_bananas(config: &BananaConfig) -> Result<BananaResults, CliError> {
    config.validate()?;
    let frame = Frame::new(["w1", "w2"]).map_err(CliError::runtime)?;
    let spec = BananaSpec::default();
    let mut cells = Vec::new();
    let mut grid = Vec::new();
    for (k, &seed) in config.seeds.iter().enumerate() {
        let (xtr, ytr) = bananas(config.n_train, &spec, child_seed(seed, "train"));
        let (xte, yte) = bananas(config.n_test, &spec, child_seed(seed, "test"));
        let (xoff, _) = gaussian_blobs(
            &[OFF_MANIFOLD_CENTER.to_vec()],
            config.n_off,
            OFF_MANIFOLD_SIGMA,
            child_seed(seed, "off-manifold"),
        );
        let train = Dataset::new(&frame, xtr, ytr).map_err(CliError::runtime)?;
        for &lambda in &config.lambdas {
            // the initialization depends on the seed only, so it is shared across lambdas
            let tc = TrainConfig {
                lambda,
                epochs: config.epochs,
                learning_rate: config.learning_rate,
                seed,
                init: config.init,
                ..TrainConfig::default()
            };
            for model in [Model::Enn, Model::Rbf] {
                let trained = match model {
                    Model::Enn => Trained::Enn(
                        enn_train(&train, config.prototypes, &tc)
                            .map_err(CliError::runtime)?
                            .0,
                    ),
                    Model::Rbf => Trained::Rbf(
                        rbf_train(&train, config.prototypes, &tc)
                            .map_err(CliError::runtime)?
                            .0,
                    ),
                };
                let cell = Cell {
                    model,
                    lambda,
                    seed,
                    test_error: error_rate(&trained, &xte, &yte),
                    test_ignorance: mean_ignorance(&trained, &xte),
                    train_ignorance: mean_ignorance(&trained, train.features()),
                    off_ignorance: mean_ignorance(&trained, &xoff),
                };
                log::info!(
                    "{} lambda={lambda} seed={seed}: error {:.4}, m(frame) {:.4}",
                    model.name(),
                    cell.test_error,
                    cell.test_ignorance
                );
                cells.push(cell);
                if k == 0 && config.grid > 0 {
                    grid.extend(
                        contour_grid(&trained, config.grid)
                            .into_iter()
                            .map(|(x, y, m)| (model, lambda, x, y, m[0], m[1], m[2])),
                    );
                }
            }
        }
    }
    let summary = summarize(&cells, &config.lambdas);
    Ok(BananaResults {
        cells,
        summary,
        grid,
    })
}

fn contour_grid(model: &Trained, n: usize) -> Vec<(f64, f64, [f64; 3])> {
    let [(x0, x1), (y0, y1)] = GRID_BOX;
    let step = |lo: f64, hi: f64, i: usize| {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    let frame = Frame::indexed(2).expect("binary frame");
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let p = [step(x0, x1, i), step(y0, y1, j)];
            let m = model.mass(&p);
            out.push((
                p[0],
                p[1],
                [
                    m.mass(evidential::FocalSet::singleton(0)),
                    m.mass(evidential::FocalSet::singleton(1)),
                    m.mass(frame.omega()),
                ],
            ));
        }
    }
    out
}

fn summarize(cells: &[Cell], lambdas: &[f64]) -> Vec<Summary> {
    let mut out = Vec::new();
    for model in [Model::Enn, Model::Rbf] {
        for &lambda in lambdas {
            let group: Vec<&Cell> = cells
                .iter()
                .filter(|c| c.model == model && c.lambda == lambda)
                .collect();
            let n = group.len() as f64;
            let mean = |f: fn(&Cell) -> f64| group.iter().map(|c| f(c)).sum::<f64>() / n;
            out.push(Summary {
                model,
                lambda,
                test_error: mean(|c| c.test_error),
                test_ignorance: mean(|c| c.test_ignorance),
                train_ignorance: mean(|c| c.train_ignorance),
                off_ignorance: mean(|c| c.off_ignorance),
            });
        }
    }
    out
}

impl BananaResults {
    pub fn summary_for(&self, model: Model) -> Vec<&Summary> {
        self.summary.iter().filter(|s| s.model == model).collect()
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("model,lambda,test_error,mean_m_frame_test,mean_m_frame_train,mean_m_frame_off_manifold\n");
        for s in &self.summary {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                s.model.name(),
                s.lambda,
                s.test_error,
                s.test_ignorance,
                s.train_ignorance,
                s.off_ignorance
            );
        }
        out
    }

    pub fn cells_csv(&self) -> String {
        let mut out = String::from("model,lambda,seed,test_error,mean_m_frame_test,mean_m_frame_train,mean_m_frame_off_manifold\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                c.model.name(),
                c.lambda,
                c.seed,
                c.test_error,
                c.test_ignorance,
                c.train_ignorance,
                c.off_ignorance
            );
        }
        out
    }

    pub fn grid_csv(&self) -> String {
        let mut out = String::from("model,lambda,x,y,m_w1,m_w2,m_frame\n");
        for (model, lambda, x, y, m1, m2, mo) in &self.grid {
            let _ = writeln!(out, "{},{lambda},{x},{y},{m1},{m2},{mo}", model.name());
        }
        out
    }
}

/// Spearman rank correlation, ties given their mean rank.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            r[k] = rank;
        }
        i = j + 1;
    }
    r
}
