//! Experiment configuration files.
//!
//! A config is a flat TOML table; every key is optional and defaults to the
//! 15-office, 3-sensor benchmark. See the README for the full key list.

use std::path::Path;

use serde::{Deserialize, Serialize};

use dmnn_core::baselines::SvmConfig;
use dmnn_core::channel::{LayoutConfig, PropagationParams, SmallScaleMode};
use dmnn_core::decorrelation::{EigFloor, QuantizerOptions};
use dmnn_core::harness::{ExperimentConfig, Method, MethodConfig};
use dmnn_core::mlp::{Activation, LayerSpec, TrainConfig};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub length_m: f64,
    pub width_m: f64,
    pub office_size_m: f64,
    #[serde(rename = "K")]
    pub num_offices: usize,
    pub rows: usize,
    #[serde(rename = "L")]
    pub num_sensors: usize,
    pub door_width_m: f64,

    /// Path count; must match `ps_db` when given.
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub num_paths: Option<usize>,
    pub ps_db: Vec<f64>,
    pub mu: f64,
    pub sigma2: f64,
    pub wall_db: f64,
    pub door_db: f64,
    pub dist_coeff: f64,
    /// `"per_location"` or `"per_sample"`.
    pub small_scale: String,

    #[serde(rename = "N")]
    pub train_per_office: usize,
    /// Training SNR in dB.
    pub snr_db: f64,
    #[serde(rename = "N_test")]
    pub test_per_office: usize,
    pub seed: u64,

    pub snr_grid_db: Vec<f64>,
    pub num_trials: usize,
    pub methods: Vec<String>,
    #[serde(rename = "M")]
    pub quantizer_levels: usize,
    pub quantizer_max_iter: usize,
    pub quantizer_tol: f64,
    pub eig_floor_rel: f64,

    pub hidden_widths: Vec<usize>,
    pub hidden_activations: Vec<String>,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub init_scale: f64,

    pub svm_c: f64,
    pub svm_epochs: usize,
    pub svm_learning_rate: f64,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl Default for ConfigFile {
    fn default() -> Self {
        Self::from_experiment(&ExperimentConfig::default())
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|source| Error::Config {
            path: path.to_owned(),
            source,
        })
    }

    pub fn from_experiment(exp: &ExperimentConfig) -> Self {
        let mc = &exp.method_config;
        Self {
            length_m: exp.layout.length_m,
            width_m: exp.layout.width_m,
            office_size_m: exp.layout.office_size_m,
            num_offices: exp.layout.num_offices,
            rows: exp.layout.rows,
            num_sensors: exp.layout.num_sensors,
            door_width_m: exp.layout.door_width_m,
            num_paths: None,
            ps_db: exp.propagation.path_power_db.clone(),
            mu: exp.propagation.small_scale_mean,
            sigma2: exp.propagation.small_scale_var,
            wall_db: exp.propagation.wall_loss_db,
            door_db: exp.propagation.door_loss_db,
            dist_coeff: exp.propagation.distance_coeff,
            small_scale: match exp.propagation.small_scale_mode {
                SmallScaleMode::PerLocation => "per_location".into(),
                SmallScaleMode::PerSample => "per_sample".into(),
            },
            train_per_office: exp.train_per_office,
            snr_db: exp.train_snr_db,
            test_per_office: exp.test_per_office,
            seed: exp.seed,
            snr_grid_db: exp.snr_grid_db.clone(),
            num_trials: exp.num_trials,
            methods: exp.methods.iter().map(|m| m.name().to_owned()).collect(),
            quantizer_levels: mc.quantizer.levels,
            quantizer_max_iter: mc.quantizer.max_iter,
            quantizer_tol: mc.quantizer.tol,
            eig_floor_rel: match mc.eig_floor {
                EigFloor::Relative(r) => r,
                EigFloor::Absolute(_) => 0.0,
            },
            hidden_widths: mc.hidden.iter().map(|l| l.width).collect(),
            hidden_activations: mc.hidden.iter().map(|l| l.activation.name().to_owned()).collect(),
            learning_rate: mc.train.learning_rate,
            batch_size: mc.train.batch_size,
            epochs: mc.train.epochs,
            init_scale: mc.train.init_scale,
            svm_c: mc.svm.c,
            svm_epochs: mc.svm.epochs,
            svm_learning_rate: mc.svm.learning_rate,
            output: None,
        }
    }

    pub fn to_experiment(&self) -> Result<ExperimentConfig> {
        let bad = |m: String| Error::format("config", m);
        if let Some(d) = self.num_paths {
            if d != self.ps_db.len() {
                return Err(bad(format!("D = {d} but ps_db has {} entries", self.ps_db.len())));
            }
        }
        let small_scale_mode = match self.small_scale.as_str() {
            "per_location" => SmallScaleMode::PerLocation,
            "per_sample" => SmallScaleMode::PerSample,
            other => {
                return Err(bad(format!(
                    "small_scale must be per_location or per_sample, got {other:?}"
                )))
            }
        };
        if self.hidden_widths.len() != self.hidden_activations.len() {
            return Err(bad(format!(
                "hidden_widths has {} entries but hidden_activations has {}",
                self.hidden_widths.len(),
                self.hidden_activations.len()
            )));
        }
        let hidden = self
            .hidden_widths
            .iter()
            .zip(&self.hidden_activations)
            .map(|(&w, a)| {
                Activation::from_name(a)
                    .map(|act| LayerSpec::new(w, act))
                    .ok_or_else(|| bad(format!("unknown activation {a:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let methods = self
            .methods
            .iter()
            .map(|m| m.parse::<Method>())
            .collect::<std::result::Result<Vec<_>, _>>()?;

        let config = ExperimentConfig {
            layout: LayoutConfig {
                length_m: self.length_m,
                width_m: self.width_m,
                office_size_m: self.office_size_m,
                num_offices: self.num_offices,
                rows: self.rows,
                num_sensors: self.num_sensors,
                door_width_m: self.door_width_m,
            },
            propagation: PropagationParams {
                path_power_db: self.ps_db.clone(),
                small_scale_mean: self.mu,
                small_scale_var: self.sigma2,
                wall_loss_db: self.wall_db,
                door_loss_db: self.door_db,
                distance_coeff: self.dist_coeff,
                small_scale_mode,
            },
            methods,
            method_config: MethodConfig {
                hidden,
                train: TrainConfig {
                    learning_rate: self.learning_rate,
                    batch_size: self.batch_size,
                    epochs: self.epochs,
                    seed: 0,
                    init_scale: self.init_scale,
                },
                svm: SvmConfig {
                    c: self.svm_c,
                    epochs: self.svm_epochs,
                    learning_rate: self.svm_learning_rate,
                    seed: 0,
                },
                quantizer: QuantizerOptions {
                    levels: self.quantizer_levels,
                    init: None,
                    max_iter: self.quantizer_max_iter,
                    tol: self.quantizer_tol,
                },
                eig_floor: EigFloor::Relative(self.eig_floor_rel),
            },
            train_per_office: self.train_per_office,
            train_snr_db: self.snr_db,
            test_per_office: self.test_per_office,
            snr_grid_db: self.snr_grid_db.clone(),
            num_trials: self.num_trials,
            seed: self.seed,
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let file: ConfigFile = toml::from_str("").unwrap();
        assert_eq!(file.to_experiment().unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn keys_override_defaults() {
        let file: ConfigFile = toml::from_str(
            "K = 30\nrows = 2\nL = 5\nD = 2\nps_db = [20.0, 10.0]\nsnr_grid_db = [inf, 20]\nmethods = [\"wmnn\"]\n",
        )
        .unwrap();
        let exp = file.to_experiment().unwrap();
        assert_eq!(exp.layout.num_offices, 30);
        assert_eq!(exp.propagation.num_paths(), 2);
        assert_eq!(exp.snr_grid_db, vec![f64::INFINITY, 20.0]);
        assert_eq!(exp.methods, vec![Method::Wmnn]);
    }

    #[test]
    fn inconsistent_or_unknown_keys_are_rejected() {
        let file: ConfigFile = toml::from_str("D = 4").unwrap();
        assert!(file.to_experiment().is_err());
        assert!(toml::from_str::<ConfigFile>("colour = 3").is_err());
        let file: ConfigFile = toml::from_str("hidden_activations = [\"tanh\", \"relu\", \"relu\", \"relu\"]").unwrap();
        assert!(file.to_experiment().is_err());
        let file: ConfigFile = toml::from_str("num_trials = 0").unwrap();
        assert!(file.to_experiment().is_err());
    }
}
