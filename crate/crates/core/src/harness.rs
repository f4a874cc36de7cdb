//! One trial of the localization benchmark: simulate, fit filters, train each
//! method and score it across the evaluation SNR grid.
//!
//! Seeds are derived from `(master seed, trial)` so a trial's records are a
//! pure function of the configuration and its index.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::baselines::{train_svm, SvmConfig, SvmModel};
use crate::channel::{build_layout, Channel, Dataset, LayoutConfig, PropagationParams};
use crate::decorrelation::{fit_gaussian, fit_quantizer, EigFloor, Quantizer, QuantizerOptions, WhiteningFilter};
use crate::mlp::{self, default_hidden_layers, LayerSpec, MlpModel, TrainConfig};
use crate::{rng, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Wmnn,
    Qmnn,
    Mnn,
    Svm,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Wmnn, Method::Qmnn, Method::Mnn, Method::Svm];

    pub fn name(self) -> &'static str {
        match self {
            Method::Wmnn => "WMNN",
            Method::Qmnn => "QMNN",
            Method::Mnn => "MNN",
            Method::Svm => "SVM",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown method {s:?}")))
    }
}

/// Input preprocessing stage of a pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Filter {
    Identity,
    Whitening(WhiteningFilter),
    Quantizer(Quantizer),
}

impl Filter {
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            Filter::Identity => Ok(x.to_vec()),
            Filter::Whitening(w) => w.apply(x),
            Filter::Quantizer(q) => Ok(q.apply(x)),
        }
    }

    pub fn apply_dataset(&self, data: &Dataset) -> Result<Dataset> {
        match self {
            Filter::Identity => Ok(data.clone()),
            _ => data.map_inputs(|x| self.apply(x)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    Mlp(MlpModel),
    Svm(SvmModel),
}

impl Classifier {
    pub fn classify(&self, x: &[f64]) -> Result<usize> {
        match self {
            Classifier::Mlp(m) => m.classify(x),
            Classifier::Svm(m) => m.classify(x),
        }
    }
}

/// A filter plus the classifier trained on its output.
#[derive(Debug, Clone, PartialEq)]
pub struct Pipeline {
    pub method: Method,
    pub filter: Filter,
    pub classifier: Classifier,
}

impl Pipeline {
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        self.classifier.classify(&self.filter.apply(x)?)
    }

    /// Number of misclassified samples in `data`.
    pub fn count_errors(&self, data: &Dataset) -> Result<usize> {
        let mut errors = 0;
        for i in 0..data.len() {
            if self.predict(data.input(i))? != data.label(i) {
                errors += 1;
            }
        }
        Ok(errors)
    }
}

/// Everything except the channel needed to train one method.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodConfig {
    pub hidden: Vec<LayerSpec>,
    pub train: TrainConfig,
    pub svm: SvmConfig,
    pub quantizer: QuantizerOptions,
    pub eig_floor: EigFloor,
}

impl Default for MethodConfig {
    fn default() -> Self {
        Self {
            hidden: default_hidden_layers(),
            train: TrainConfig::default(),
            svm: SvmConfig::default(),
            quantizer: QuantizerOptions::default(),
            eig_floor: EigFloor::default(),
        }
    }
}

/// Fits the filter `method` needs on the training inputs.
pub fn fit_filter(method: Method, train: &Dataset, config: &MethodConfig) -> Result<Filter> {
    match method {
        Method::Wmnn => Ok(Filter::Whitening(WhiteningFilter::fit(
            train.inputs(),
            train.dim(),
            config.eig_floor,
        )?)),
        Method::Qmnn => {
            let source = fit_gaussian(train.inputs())?;
            Ok(Filter::Quantizer(fit_quantizer(
                source.mean,
                source.var,
                &config.quantizer,
            )?))
        }
        Method::Mnn | Method::Svm => Ok(Filter::Identity),
    }
}

/// Trains `method` on `train` behind an already fitted `filter`.
pub fn train_with_filter(method: Method, filter: Filter, train: &Dataset, config: &MethodConfig) -> Result<Pipeline> {
    let filtered = filter.apply_dataset(train)?;
    let classifier = match method {
        Method::Svm => Classifier::Svm(train_svm(&filtered, &config.svm)?),
        _ => Classifier::Mlp(mlp::train(&filtered, &config.hidden, &config.train)?.0),
    };
    Ok(Pipeline {
        method,
        filter,
        classifier,
    })
}

pub fn train_method(method: Method, train: &Dataset, config: &MethodConfig) -> Result<Pipeline> {
    let filter = fit_filter(method, train, config)?;
    train_with_filter(method, filter, train, config)
}

/// Fraction of positions where `predictions` and `labels` differ.
pub fn misclass_rate(predictions: &[usize], labels: &[usize]) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::Dimension {
            expected: labels.len(),
            got: predictions.len(),
        });
    }
    if labels.is_empty() {
        return Err(Error::Config("misclassification rate of an empty set".into()));
    }
    let wrong = predictions.iter().zip(labels).filter(|(p, l)| p != l).count();
    Ok(wrong as f64 / labels.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub layout: LayoutConfig,
    pub propagation: PropagationParams,
    pub methods: Vec<Method>,
    pub method_config: MethodConfig,
    pub train_per_office: usize,
    pub train_snr_db: f64,
    pub test_per_office: usize,
    pub snr_grid_db: Vec<f64>,
    pub num_trials: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    /// K=15, L=3, D=3, N=100, M=10, 20 dB training, 0-30 dB evaluation.
    fn default() -> Self {
        Self {
            layout: LayoutConfig::default(),
            propagation: PropagationParams::default(),
            methods: Method::ALL.to_vec(),
            method_config: MethodConfig::default(),
            train_per_office: 100,
            train_snr_db: 20.0,
            test_per_office: 100,
            snr_grid_db: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            num_trials: 5,
            seed: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.snr_grid_db.is_empty() {
            return Err(Error::Config("the SNR grid is empty".into()));
        }
        if self.num_trials == 0 {
            return Err(Error::Config("at least one trial is required".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods selected".into()));
        }
        if self.train_per_office == 0 || self.test_per_office == 0 {
            return Err(Error::Config("sample counts per office must be positive".into()));
        }
        self.propagation.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub method: Method,
    pub snr_db: f64,
    pub trial_seed: u64,
    pub errors: usize,
    pub n_test: usize,
    pub misclass_rate: f64,
}

/// Seed of trial `trial` under `master`.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    rng::derive_seed(master, trial as u64)
}

/// Builds the trial's channel: layout plus the frozen fading field when the
/// propagation model uses one.
pub fn trial_channel(config: &ExperimentConfig, seed: u64) -> Result<Channel> {
    let layout = build_layout(&config.layout)?;
    Channel::new(layout, config.propagation.clone(), &mut rng::stream(seed, 0))
}

/// Training set of the trial with seed `seed`.
pub fn trial_train_set(config: &ExperimentConfig, channel: &Channel, seed: u64) -> Result<Dataset> {
    Dataset::generate(
        channel,
        config.train_per_office,
        config.train_snr_db,
        rng::derive_seed(seed, 1),
    )
}

/// Test set for SNR grid position `grid_index`, shared by every method.
pub fn trial_test_set(config: &ExperimentConfig, channel: &Channel, seed: u64, grid_index: usize) -> Result<Dataset> {
    Dataset::generate(
        channel,
        config.test_per_office,
        config.snr_grid_db[grid_index],
        rng::derive_seed(seed, 1000 + grid_index as u64),
    )
}

/// Method settings with the trial's training seeds filled in. MLP methods
/// share initial weights and batch order; only the filter differs.
pub fn trial_method_config(config: &ExperimentConfig, seed: u64) -> MethodConfig {
    let mut method_config = config.method_config.clone();
    method_config.train.seed = rng::derive_seed(seed, 2);
    method_config.svm.seed = rng::derive_seed(seed, 3);
    method_config
}

/// Runs trial `trial`. Records are ordered by method (in `config.methods`
/// order) and then by SNR grid position.
pub fn run_trial(config: &ExperimentConfig, trial: usize) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    let seed = trial_seed(config.seed, trial);
    let channel = trial_channel(config, seed)?;
    let train = trial_train_set(config, &channel, seed)?;
    let method_config = trial_method_config(config, seed);
    let pipelines = config
        .methods
        .iter()
        .map(|&m| train_method(m, &train, &method_config))
        .collect::<Result<Vec<_>>>()?;

    let mut per_method: Vec<Vec<ResultRecord>> = vec![Vec::new(); pipelines.len()];
    for (si, &snr_db) in config.snr_grid_db.iter().enumerate() {
        let test = trial_test_set(config, &channel, seed, si)?;
        for (pipeline, records) in pipelines.iter().zip(&mut per_method) {
            let errors = pipeline.count_errors(&test)?;
            records.push(ResultRecord {
                method: pipeline.method,
                snr_db,
                trial_seed: seed,
                errors,
                n_test: test.len(),
                misclass_rate: errors as f64 / test.len() as f64,
            });
        }
    }
    Ok(per_method.into_iter().flatten().collect())
}

/// Mean misclassification rate of `method` at `snr_db` over `records`.
pub fn mean_rate(records: &[ResultRecord], method: Method, snr_db: f64) -> Option<f64> {
    let rates: Vec<f64> = records
        .iter()
        .filter(|r| r.method == method && r.snr_db == snr_db)
        .map(|r| r.misclass_rate)
        .collect();
    (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64)
}

/// Formats an SNR value the way result tables print it (`inf` for no noise).
pub fn format_snr(snr_db: f64) -> String {
    if snr_db == f64::INFINITY {
        "inf".into()
    } else {
        format!("{snr_db}")
    }
}
