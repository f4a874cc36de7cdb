//! Decorrelation filters applied to MLP inputs: PCA whitening and the
//! distortion-optimal scalar quantizer for a Gaussian source.

mod eigen;
pub mod normal;
mod quantizer;
mod whitening;

pub use eigen::{symmetric_eig, SymmetricEigen};
pub use quantizer::{
    distortion_gradient, fit_gaussian, fit_quantizer, gaussian_grid, quantizer_distortion, GaussianFit, Quantizer,
    QuantizerOptions,
};
pub use whitening::{EigFloor, WhiteningFilter};
