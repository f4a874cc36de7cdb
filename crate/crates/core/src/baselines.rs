//! Comparison methods: the plain MLP without a decorrelation filter and a
//! one-vs-rest linear SVM.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::channel::Dataset;
use crate::error::check_dim;
use crate::mlp::{self, argmax, LayerSpec, MlpModel, TrainConfig};
use crate::{rng, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmConfig {
    /// Hinge-loss weight `C`.
    pub c: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            epochs: 100,
            learning_rate: 0.01,
            seed: 0,
        }
    }
}

/// `K` linear scorers `w_k . x + b_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub dim: usize,
    /// Row-major `classes x dim`.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub c: f64,
}

/// Trains one binary classifier per office on
/// `1/2 ||w||^2 + (C / n) sum_i max(0, 1 - y_i (w . x_i + b))`
/// by stochastic subgradient descent on the per-sample terms
/// `1/2 ||w||^2 + C max(0, ...)`. The step size decays as
/// `lr / sqrt(1 + epoch)` and must start in `(0, 1]`.
pub fn train_svm(data: &Dataset, config: &SvmConfig) -> Result<SvmModel> {
    if data.is_empty() {
        return Err(Error::Config("cannot train an SVM on an empty dataset".into()));
    }
    if !(config.c >= 0.0) || !(config.learning_rate > 0.0 && config.learning_rate <= 1.0) {
        return Err(Error::Config(format!(
            "SVM needs C >= 0 and a learning rate in (0, 1] (C = {}, lr = {})",
            config.c, config.learning_rate
        )));
    }
    let (dim, classes, n) = (data.dim(), data.num_classes(), data.len());
    let mut weights = vec![0.0; classes * dim];
    let mut bias = vec![0.0; classes];
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = rng::stream(config.seed, 2);

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let lr = config.learning_rate / libm::sqrt(1.0 + epoch as f64);
        let decay = 1.0 - lr;
        for &i in &order {
            let x = data.input(i);
            let label = data.label(i);
            for k in 0..classes {
                let w = &mut weights[k * dim..(k + 1) * dim];
                let y = if label == k { 1.0 } else { -1.0 };
                let score: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + bias[k];
                w.iter_mut().for_each(|v| *v *= decay);
                if config.c > 0.0 && y * score < 1.0 {
                    let step = lr * config.c * y;
                    for (v, xi) in w.iter_mut().zip(x) {
                        *v += step * xi;
                    }
                    bias[k] += step;
                }
            }
        }
        if weights.iter().chain(&bias).any(|v| !v.is_finite()) {
            return Err(Error::Divergence { epoch });
        }
    }
    Ok(SvmModel {
        dim,
        weights,
        bias,
        c: config.c,
    })
}

impl SvmModel {
    pub fn num_classes(&self) -> usize {
        self.bias.len()
    }

    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        Ok(self
            .weights
            .chunks_exact(self.dim)
            .zip(&self.bias)
            .map(|(w, b)| w.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() + b)
            .collect())
    }

    /// Class with the largest score; ties go to the lowest index.
    pub fn classify(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.scores(x)?))
    }
}

/// The decorrelation-free baseline: the same network trained on raw features.
pub fn train_plain_mnn(data: &Dataset, hidden: &[LayerSpec], config: &TrainConfig) -> Result<MlpModel> {
    mlp::train(data, hidden, config).map(|(model, _)| model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clusters() -> Dataset {
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..40 {
            let t = i as f64 * 0.05;
            features.extend_from_slice(&[2.0 + t, 1.0 - t]);
            labels.push(0);
            features.extend_from_slice(&[-2.0 - t, -1.0 + t]);
            labels.push(1);
        }
        Dataset::new(features, 2, labels, 2).unwrap()
    }

    #[test]
    fn separable_clusters_are_learned() {
        let data = clusters();
        let model = train_svm(&data, &SvmConfig::default()).unwrap();
        for i in 0..data.len() {
            assert_eq!(model.classify(data.input(i)).unwrap(), data.label(i));
        }
    }

    #[test]
    fn zero_c_leaves_zero_weights() {
        let model = train_svm(
            &clusters(),
            &SvmConfig {
                c: 0.0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(model.weights.iter().chain(&model.bias).all(|&v| v == 0.0));
        assert_eq!(model.classify(&[5.0, 5.0]).unwrap(), 0);
    }

    #[test]
    fn training_is_seeded() {
        let data = clusters();
        let a = train_svm(
            &data,
            &SvmConfig {
                seed: 3,
                ..Default::default()
            },
        )
        .unwrap();
        let b = train_svm(
            &data,
            &SvmConfig {
                seed: 3,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn argmax_scores() {
        let mut model = SvmModel {
            dim: 1,
            weights: vec![0.0; 6],
            bias: vec![0.0; 6],
            c: 1.0,
        };
        assert_eq!(model.classify(&[1.0]).unwrap(), 0);
        model.bias[4] = 1.0;
        assert_eq!(model.classify(&[1.0]).unwrap(), 4);
        model.bias.iter_mut().for_each(|b| *b += 10.0);
        assert_eq!(model.classify(&[1.0]).unwrap(), 4);
        assert!(model.classify(&[1.0, 2.0]).is_err());
    }
}
