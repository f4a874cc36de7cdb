//! Labeled fingerprint datasets.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::propagation::Channel;
use crate::{rng, Error, Result};

/// Generation parameters carried alongside a dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetMeta {
    pub num_offices: usize,
    pub num_sensors: usize,
    pub num_paths: usize,
    pub per_office: usize,
    pub snr_db: f64,
    pub seed: u64,
}

/// Feature vectors stored row-major with a class index per row.
///
/// Each row holds `(Re, Im)` of every tap, taps in path order, sensors in
/// index order: dimension `2 * paths * sensors`. Labels are 0-based office
/// indices; [`Dataset::one_hot`] gives the `e_k` target vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    dim: usize,
    labels: Vec<usize>,
    num_classes: usize,
    pub meta: Option<DatasetMeta>,
}

impl Dataset {
    pub fn new(features: Vec<f64>, dim: usize, labels: Vec<usize>, num_classes: usize) -> Result<Self> {
        if dim == 0 || num_classes == 0 {
            return Err(Error::Config(
                "dataset dimension and class count must be positive".into(),
            ));
        }
        if features.len() != labels.len() * dim {
            return Err(Error::Dimension {
                expected: labels.len() * dim,
                got: features.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= num_classes) {
            return Err(Error::Config(format!(
                "label {bad} out of range for {num_classes} classes"
            )));
        }
        Ok(Self {
            features,
            dim,
            labels,
            num_classes,
            meta: None,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn input(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn inputs(&self) -> core::slice::ChunksExact<'_, f64> {
        self.features.chunks_exact(self.dim)
    }

    pub fn one_hot(&self, i: usize) -> Vec<f64> {
        let mut y = vec![0.0; self.num_classes];
        y[self.labels[i]] = 1.0;
        y
    }

    /// Mean per-component power `E[x^2]` over every feature.
    pub fn mean_component_power(&self) -> f64 {
        self.features.iter().map(|v| v * v).sum::<f64>() / self.features.len() as f64
    }

    /// Adds white Gaussian noise to every component with variance
    /// `P / 10^(snr_db / 10)`, `P` the current mean component power.
    /// An SNR of `+inf` leaves the data untouched.
    pub fn add_awgn<R: Rng + ?Sized>(&mut self, snr_db: f64, rng: &mut R) -> Result<()> {
        if snr_db == f64::INFINITY {
            return Ok(());
        }
        if !snr_db.is_finite() {
            return Err(Error::Domain(format!("SNR must be finite or +inf, got {snr_db}")));
        }
        let variance = self.mean_component_power() / libm::pow(10.0, snr_db / 10.0);
        let noise =
            Normal::new(0.0, libm::sqrt(variance)).map_err(|e| Error::Numerical(format!("noise distribution: {e}")))?;
        for v in &mut self.features {
            *v += noise.sample(rng);
        }
        Ok(())
    }

    /// Applies `f` to every input, keeping labels and metadata.
    pub fn map_inputs(&self, mut f: impl FnMut(&[f64]) -> Result<Vec<f64>>) -> Result<Self> {
        let mut features = Vec::with_capacity(self.features.len());
        let mut dim = None;
        for x in self.inputs() {
            let z = f(x)?;
            match dim {
                None => dim = Some(z.len()),
                Some(d) if d != z.len() => {
                    return Err(Error::Dimension {
                        expected: d,
                        got: z.len(),
                    })
                }
                _ => {}
            }
            features.extend_from_slice(&z);
        }
        let mut out = Self::new(features, dim.unwrap_or(self.dim), self.labels.clone(), self.num_classes)?;
        out.meta = self.meta;
        Ok(out)
    }

    /// Draws `per_office` measurements for every office.
    ///
    /// Office `k` draws from RNG stream `k` of `seed` and the noise from a
    /// separate stream, so the result does not depend on generation order.
    pub fn generate(channel: &Channel, per_office: usize, snr_db: f64, seed: u64) -> Result<Self> {
        let mut data = Self::generate_clean(channel, per_office, seed)?;
        data.add_awgn(snr_db, &mut rng::stream(seed, NOISE_STREAM))?;
        if let Some(meta) = &mut data.meta {
            meta.snr_db = snr_db;
        }
        Ok(data)
    }

    /// [`Dataset::generate`] without the measurement noise.
    pub fn generate_clean(channel: &Channel, per_office: usize, seed: u64) -> Result<Self> {
        if per_office == 0 {
            return Err(Error::Config("at least one measurement per office is required".into()));
        }
        let offices = channel.num_offices();
        let sensors = channel.num_sensors();
        let dim = 2 * channel.num_paths() * sensors;
        let mut features = Vec::with_capacity(offices * per_office * dim);
        let mut labels = Vec::with_capacity(offices * per_office);
        for office in 0..offices {
            let mut rng = rng::stream(seed, office as u64);
            for _ in 0..per_office {
                for sensor in 0..sensors {
                    channel.draw_taps(office, sensor, &mut rng, |tap| {
                        features.push(tap.re);
                        features.push(tap.im);
                    });
                }
                labels.push(office);
            }
        }
        let mut data = Self::new(features, dim, labels, offices)?;
        data.meta = Some(DatasetMeta {
            num_offices: offices,
            num_sensors: sensors,
            num_paths: channel.num_paths(),
            per_office,
            snr_db: f64::INFINITY,
            seed,
        });
        Ok(data)
    }
}

const NOISE_STREAM: u64 = 1 << 40;
