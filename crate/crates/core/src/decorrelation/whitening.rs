//! PCA whitening: `z = Lambda^{-1/2} U^T (x - mean)` from the eigendecomposition
//! of the sample covariance.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::eigen::symmetric_eig;
use crate::error::check_dim;
use crate::{Error, Result};

/// Lower bound applied to covariance eigenvalues before inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigFloor {
    Absolute(f64),
    /// Fraction of the largest eigenvalue.
    Relative(f64),
}

impl Default for EigFloor {
    fn default() -> Self {
        EigFloor::Relative(1e-8)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WhiteningFilter {
    pub mean: Vec<f64>,
    /// Row-major `dim x dim` transform `Lambda^{-1/2} U^T`.
    pub transform: Vec<f64>,
    /// Covariance eigenvalues after flooring, nonincreasing.
    pub eigenvalues: Vec<f64>,
    /// Absolute floor that was applied.
    pub eig_floor: f64,
}

impl WhiteningFilter {
    /// Fits mean and transform to `inputs`, each of length `dim`.
    /// Requires more samples than dimensions.
    pub fn fit<'a, I>(inputs: I, dim: usize, floor: EigFloor) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [f64]>,
        I::IntoIter: Clone,
    {
        let inputs = inputs.into_iter();
        let mut n = 0usize;
        let mut mean = vec![0.0; dim];
        for x in inputs.clone() {
            check_dim(dim, x.len())?;
            for (m, v) in mean.iter_mut().zip(x) {
                *m += v;
            }
            n += 1;
        }
        if n < dim + 1 {
            return Err(Error::Degenerate(format!(
                "{n} samples cannot whiten {dim} dimensions (need at least {})",
                dim + 1
            )));
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);

        let mut cov = vec![0.0; dim * dim];
        let mut centered = vec![0.0; dim];
        for x in inputs {
            for ((c, v), m) in centered.iter_mut().zip(x).zip(&mean) {
                *c = v - m;
            }
            for i in 0..dim {
                let ci = centered[i];
                for j in i..dim {
                    cov[i * dim + j] += ci * centered[j];
                }
            }
        }
        for i in 0..dim {
            for j in i..dim {
                let v = cov[i * dim + j] / (n - 1) as f64;
                cov[i * dim + j] = v;
                cov[j * dim + i] = v;
            }
        }

        let eig = symmetric_eig(&cov, dim)?;
        let eig_floor = match floor {
            EigFloor::Absolute(f) => f,
            EigFloor::Relative(r) => r * eig.values[0].max(0.0),
        };
        if !(eig_floor >= 0.0) {
            return Err(Error::Config(format!(
                "eigenvalue floor must be non-negative, got {eig_floor}"
            )));
        }
        let eigenvalues: Vec<f64> = eig.values.iter().map(|&l| l.max(eig_floor)).collect();
        if let Some(&bad) = eigenvalues.iter().find(|&&l| !(l > 0.0)) {
            return Err(Error::Numerical(format!(
                "covariance is singular (eigenvalue {bad:e}); raise the eigenvalue floor"
            )));
        }

        let mut transform = vec![0.0; dim * dim];
        for (i, &l) in eigenvalues.iter().enumerate() {
            let s = 1.0 / libm::sqrt(l);
            for (j, u) in eig.vector(i).enumerate() {
                transform[i * dim + j] = s * u;
            }
        }
        Ok(Self {
            mean,
            transform,
            eigenvalues,
            eig_floor,
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut transform = vec![0.0; dim * dim];
        for i in 0..dim {
            transform[i * dim + i] = 1.0;
        }
        Self {
            mean: vec![0.0; dim],
            transform,
            eigenvalues: vec![1.0; dim],
            eig_floor: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// `T (x - mean)`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let dim = self.dim();
        check_dim(dim, x.len())?;
        let centered: Vec<f64> = x.iter().zip(&self.mean).map(|(v, m)| v - m).collect();
        Ok(self
            .transform
            .chunks_exact(dim)
            .map(|row| row.iter().zip(&centered).map(|(t, c)| t * c).sum())
            .collect())
    }
}
