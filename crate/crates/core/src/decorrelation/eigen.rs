//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// `A = U diag(values) U^T` with eigenvalues sorted nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub n: usize,
    pub values: Vec<f64>,
    /// Row-major `n x n`; column `j` is the eigenvector for `values[j]`.
    pub vectors: Vec<f64>,
}

impl SymmetricEigen {
    pub fn vector(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.vectors[i * self.n + j])
    }
}

/// Diagonalizes the row-major symmetric matrix `a` of order `n` by cyclic
/// Jacobi rotations, sweeping until the off-diagonal mass is negligible
/// relative to the Frobenius norm of `a`.
pub fn symmetric_eig(a: &[f64], n: usize) -> Result<SymmetricEigen> {
    if a.len() != n * n {
        return Err(Error::Dimension {
            expected: n * n,
            got: a.len(),
        });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for i in 0..n {
        for j in i + 1..n {
            let gap = (a[i * n + j] - a[j * n + i]).abs();
            if gap > 1e-10 * scale {
                return Err(Error::Domain(format!(
                    "matrix is not symmetric at ({i}, {j}): difference {gap:e}"
                )));
            }
        }
    }

    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm2: f64 = a.iter().map(|x| x * x).sum();
    let threshold = (1e-15 * 1e-15) * norm2;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| 2.0 * m[i * n + j] * m[i * n + j])
            .sum();
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Convergence { iterations: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].total_cmp(&m[i * n + i]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + new] = v[k * n + old];
        }
    }
    Ok(SymmetricEigen { n, values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    fn reconstruct(e: &SymmetricEigen) -> Vec<f64> {
        let n = e.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n)
                    .map(|k| e.vectors[i * n + k] * e.values[k] * e.vectors[j * n + k])
                    .sum();
            }
        }
        out
    }

    fn orthogonality_error(e: &SymmetricEigen) -> f64 {
        let n = e.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| e.vectors[k * n + i] * e.vectors[k * n + j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    #[test]
    fn identity() {
        let mut a = vec![0.0; 16];
        for i in 0..4 {
            a[i * 4 + i] = 1.0;
        }
        let e = symmetric_eig(&a, 4).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
    }

    #[test]
    fn diagonal_gives_signed_permutation() {
        let a = [1.0, 0.0, 0.0, 0.0, 5.0, 0.0, 0.0, 0.0, 2.0];
        let e = symmetric_eig(&a, 3).unwrap();
        assert_eq!(e.values, vec![5.0, 2.0, 1.0]);
        for j in 0..3 {
            let col: Vec<f64> = e.vector(j).collect();
            assert_eq!(col.iter().filter(|v| v.abs() == 1.0).count(), 1);
            assert_eq!(col.iter().filter(|v| **v == 0.0).count(), 2);
        }
    }

    #[test]
    fn random_18x18_reconstructs() {
        let mut rng = rng::stream(42, 0);
        for _ in 0..20 {
            let n = 18;
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in i..n {
                    let x: f64 = rng.random_range(-3.0..3.0);
                    a[i * n + j] = x;
                    a[j * n + i] = x;
                }
            }
            let e = symmetric_eig(&a, n).unwrap();
            let r = reconstruct(&e);
            let err: f64 = r.iter().zip(&a).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
            let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(err < 1e-9 * norm, "reconstruction error {err}");
            assert!(orthogonality_error(&e) < 1e-8);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rejects_asymmetric_and_misshapen_input() {
        assert!(matches!(symmetric_eig(&[1.0, 2.0, 3.0, 1.0], 2), Err(Error::Domain(_))));
        assert!(matches!(symmetric_eig(&[1.0; 3], 2), Err(Error::Dimension { .. })));
    }

    #[test]
    fn zero_matrix() {
        let e = symmetric_eig(&[0.0; 9], 3).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
    }
}
