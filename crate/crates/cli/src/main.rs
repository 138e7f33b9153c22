use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use evid_cli::bananas::{BananaConfig, DEFAULT_LAMBDAS};
use evid_cli::commands::{
    cmd_bananas, cmd_bba, cmd_demo_dempster, cmd_ecm, cmd_fcm, cmd_fuse, cmd_predict, cmd_train,
    BbaParams, Betas, Classifier, EcmParams, TrainParams,
};
use evid_cli::CliError;
use evidential::bba::ConfidenceFunction;
use evidential::classify::Init;
use evidential::cluster::{EcmConfig, FcmConfig};
use evidential::fusion::FitConfig;
use evidential::optim::Optimizer;

const EXIT_CODES: &str = "\
Exit status:
  0  success
  2  invalid arguments, configuration or input data
  3  failure while running a valid command (I/O, numerical breakdown)";

#[derive(Parser, Debug)]
#[command(name = "evid", version, about = "Belief-function models, fusion and evidential classifiers", after_help = EXIT_CODES)]
struct Cli {
    /// Root seed; required by every stochastic command
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory
    #[arg(long, global = true, env = "EVID_OUT_DIR", default_value = "out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InitArg {
    Kmeans,
    Random,
}

impl From<InitArg> for Init {
    fn from(a: InitArg) -> Init {
        match a {
            InitArg::Kmeans => Init::KMeans,
            InitArg::Random => Init::Random,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OptimizerArg {
    Gd,
    Adam,
}

impl From<OptimizerArg> for Optimizer {
    fn from(a: OptimizerArg) -> Optimizer {
        match a {
            OptimizerArg::Gd => Optimizer::GradientDescent,
            OptimizerArg::Adam => Optimizer::Adam,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConfidenceArg {
    Identity,
    Sigmoid,
    OneSidedGaussian,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the two-source combination example on {a, b, c}
    DemoDempster,

    /// Sweep the regularization weight of ENN and RBF classifiers on banana data
    Bananas {
        /// Regularization weights
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LAMBDAS)]
        lambdas: Vec<f64>,
        /// Number of seeds, counted up from --seed
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        /// Number of prototypes (hidden units)
        #[arg(long, default_value_t = 6)]
        prototypes: usize,
        /// Training set size per seed
        #[arg(long, default_value_t = 300)]
        n_train: usize,
        /// Test set size per seed
        #[arg(long, default_value_t = 1000)]
        n_test: usize,
        /// Points in the off-manifold probe blob
        #[arg(long, default_value_t = 200)]
        n_off: usize,
        /// Training epochs
        #[arg(long, default_value_t = 1000)]
        epochs: usize,
        /// Initial step size
        #[arg(long, default_value_t = 0.1)]
        learning_rate: f64,
        /// Prototype initialization
        #[arg(long, value_enum, default_value_t = InitArg::Kmeans)]
        init: InitArg,
        /// Points per side of the contour grid, 0 to skip it
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },

    /// Mass functions from a CSV of measurements, one document per row
    Bba {
        /// shafer, appriou1, appriou2, bfod, zhu, ratio-mv or gd
        #[arg(long)]
        method: String,
        /// Input CSV with a header row
        #[arg(long)]
        input: PathBuf,
        /// Hypothesis label of binary frames
        #[arg(long, default_value = "w")]
        hypothesis: String,
        /// Likelihood normalizing factor (appriou)
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        /// Confidence-axis intercept A (bfod)
        #[arg(long)]
        intercept: Option<f64>,
        /// Maximum support B (bfod)
        #[arg(long)]
        max_support: Option<f64>,
        /// Confidence-factor generator (bfod)
        #[arg(long, value_enum, default_value_t = ConfidenceArg::Sigmoid)]
        confidence: ConfidenceArg,
        /// Sigmoid midpoint or Gaussian center (bfod)
        #[arg(long, default_value_t = 0.5)]
        center: f64,
        /// Sigmoid slope or Gaussian width (bfod)
        #[arg(long, default_value_t = 10.0)]
        spread: f64,
        /// Ambiguity threshold (zhu)
        #[arg(long, default_value_t = evidential::bba::ZHU_EPSILON)]
        epsilon: f64,
        /// Lower ratio threshold (ratio-mv)
        #[arg(long, default_value_t = evidential::bba::RATIO_MV_ALPHA)]
        alpha: f64,
        /// Upper ratio threshold (ratio-mv)
        #[arg(long, default_value_t = evidential::bba::RATIO_MV_BETA)]
        beta: f64,
        /// JSON array of {mean, variance, count} per cluster (gd)
        #[arg(long)]
        stats: Option<PathBuf>,
    },

    /// Train a classifier on a CSV with a `label` column
    Train {
        /// Classifier family
        #[arg(long, value_parser = ["enn", "rbf", "eknn"])]
        classifier: String,
        /// Feature CSV; a `label` column, if present, holds the classes
        #[arg(long)]
        data: PathBuf,
        /// Number of prototypes (hidden units)
        #[arg(long, default_value_t = 6)]
        prototypes: usize,
        /// Neighbours (eknn)
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Regularization weight
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        /// Training epochs
        #[arg(long, default_value_t = 1000)]
        epochs: usize,
        /// Initial step size
        #[arg(long, default_value_t = 0.1)]
        learning_rate: f64,
        /// Prototype initialization
        #[arg(long, value_enum, default_value_t = InitArg::Kmeans)]
        init: InitArg,
        /// First-order optimizer
        #[arg(long, value_enum, default_value_t = OptimizerArg::Gd)]
        optimizer: OptimizerArg,
    },

    /// Predict with a saved model; reports accuracy when the data has labels
    Predict {
        /// Model file written by `train`
        #[arg(long)]
        model: PathBuf,
        /// Feature CSV; a `label` column, if present, holds the classes
        #[arg(long)]
        data: PathBuf,
    },

    /// Fuse per-source contour CSVs (one column per class) with reliabilities
    Fuse {
        /// Contour table of one source; repeat for every source
        #[arg(long = "source", required = true)]
        sources: Vec<PathBuf>,
        /// Reliability table: one row per source, one column per class
        #[arg(long, conflicts_with = "fit")]
        betas: Option<PathBuf>,
        /// Learn the reliabilities from this CSV with a `label` column
        #[arg(long)]
        fit: Option<PathBuf>,
        /// Epochs of the reliability fit
        #[arg(long, default_value_t = FitConfig::default().epochs)]
        fit_epochs: usize,
        /// Starting reliability of the fit
        #[arg(long, default_value_t = FitConfig::default().initial_beta)]
        initial_beta: f64,
    },

    /// Evidential c-means
    Ecm {
        /// Feature CSV; a `label` column, if present, holds the classes
        #[arg(long)]
        data: PathBuf,
        /// Number of clusters
        #[arg(long)]
        clusters: usize,
        /// Cardinality penalty exponent
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Mass exponent
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        /// Distance to the empty set
        #[arg(long, default_value_t = 10.0)]
        delta: f64,
        /// Only singletons and the frame as focal sets
        #[arg(long)]
        no_pairs: bool,
        /// Maximum number of iterations
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
    },

    /// Fuzzy c-means
    Fcm {
        /// Feature CSV; a `label` column, if present, holds the classes
        #[arg(long)]
        data: PathBuf,
        /// Number of clusters
        #[arg(long)]
        clusters: usize,
        /// Fuzzifier exponent, > 1
        #[arg(long, default_value_t = 2.0)]
        fuzzifier: f64,
        /// Maximum number of iterations
        #[arg(long, default_value_t = 300)]
        max_iter: usize,
    },
}

fn need_seed(seed: Option<u64>, command: &str) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::Validation(format!("{command} is stochastic and needs --seed")))
}

fn run(cli: Cli) -> Result<String, CliError> {
    let out = cli.out;
    match cli.command {
        Command::DemoDempster => cmd_demo_dempster(),
        Command::Bananas {
            lambdas,
            seeds,
            prototypes,
            n_train,
            n_test,
            n_off,
            epochs,
            learning_rate,
            init,
            grid,
        } => {
            let seed = need_seed(cli.seed, "bananas")?;
            let config = BananaConfig {
                lambdas,
                seeds: (0..seeds).map(|i| seed + i).collect(),
                prototypes,
                n_train,
                n_test,
                n_off,
                epochs,
                learning_rate,
                init: init.into(),
                grid,
            };
            cmd_bananas(&config, &out)
        }
        Command::Bba {
            method,
            input,
            hypothesis,
            hbar,
            intercept,
            max_support,
            confidence,
            center,
            spread,
            epsilon,
            alpha,
            beta,
            stats,
        } => {
            let confidence = match confidence {
                ConfidenceArg::Identity => ConfidenceFunction::Identity,
                ConfidenceArg::Sigmoid => ConfidenceFunction::Sigmoid {
                    midpoint: center,
                    slope: spread,
                },
                ConfidenceArg::OneSidedGaussian => ConfidenceFunction::OneSidedGaussian {
                    center,
                    width: spread,
                },
            };
            let params = BbaParams {
                hypothesis,
                hbar,
                intercept,
                max_support,
                confidence,
                epsilon,
                alpha,
                beta,
                stats,
            };
            cmd_bba(&method, &input, &params, &out)
        }
        Command::Train {
            classifier,
            data,
            prototypes,
            k,
            lambda,
            epochs,
            learning_rate,
            init,
            optimizer,
        } => {
            let classifier: Classifier = classifier.parse()?;
            let seed = match classifier {
                Classifier::Eknn => cli.seed.unwrap_or(0),
                _ => need_seed(cli.seed, "train")?,
            };
            let params = TrainParams {
                classifier,
                prototypes,
                k,
                lambda,
                epochs,
                learning_rate,
                init: init.into(),
                optimizer: optimizer.into(),
                seed,
            };
            cmd_train(&data, &params, &out)
        }
        Command::Predict { model, data } => cmd_predict(&model, &data, &out),
        Command::Fuse {
            sources,
            betas,
            fit,
            fit_epochs,
            initial_beta,
        } => {
            let betas = match (betas, fit) {
                (Some(path), None) => Betas::File(path),
                (None, Some(labels)) => Betas::Fit {
                    labels,
                    config: FitConfig {
                        epochs: fit_epochs,
                        initial_beta,
                        ..FitConfig::default()
                    },
                },
                _ => Betas::Ones,
            };
            cmd_fuse(&sources, &betas, &out)
        }
        Command::Ecm {
            data,
            clusters,
            alpha,
            beta,
            delta,
            no_pairs,
            max_iter,
        } => {
            let config = EcmConfig {
                alpha,
                beta,
                delta,
                max_iter,
                ..EcmConfig::new(clusters, need_seed(cli.seed, "ecm")?)
            };
            cmd_ecm(
                &data,
                &EcmParams {
                    config,
                    pairs: !no_pairs,
                },
                &out,
            )
        }
        Command::Fcm {
            data,
            clusters,
            fuzzifier,
            max_iter,
        } => {
            let config = FcmConfig {
                fuzzifier,
                max_iter,
                ..FcmConfig::new(clusters, need_seed(cli.seed, "fcm")?)
            };
            cmd_fcm(&data, &config, &out)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
