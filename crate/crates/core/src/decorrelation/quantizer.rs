//! Minimum-distortion scalar quantizer for a Gaussian source, designed by
//! damped Newton-Raphson on the stationarity conditions `de/dq_i = 0`.

use alloc::format;
use alloc::vec::Vec;

use super::normal;
use crate::{Error, Result};

/// Pooled Gaussian model of every scalar feature value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub mean: f64,
    pub var: f64,
}

/// Sample mean and unbiased variance of every component of every input.
pub fn fit_gaussian<'a>(inputs: impl IntoIterator<Item = &'a [f64]>) -> Result<GaussianFit> {
    // Welford
    let (mut n, mut mean, mut m2) = (0u64, 0.0f64, 0.0f64);
    for &v in inputs.into_iter().flatten() {
        n += 1;
        let delta = v - mean;
        mean += delta / n as f64;
        m2 += delta * (v - mean);
    }
    if n < 2 {
        return Err(Error::Degenerate(format!("need at least 2 values, got {n}")));
    }
    let var = m2 / (n - 1) as f64;
    if !(var > 0.0) {
        return Err(Error::Degenerate("pooled variance is zero".into()));
    }
    Ok(GaussianFit { mean, var })
}

/// Gaussian moments of one nearest-level cell in standardized units.
struct Cell {
    /// `(q - mean) / sd`
    c: f64,
    lo: f64,
    hi: f64,
    mass: f64,
    /// `int u phi(u) du`
    first: f64,
    /// `int u^2 phi(u) du`
    second: f64,
}

fn cells(levels: &[f64], mean: f64, sd: f64) -> impl Iterator<Item = Cell> + '_ {
    let m = levels.len();
    (0..m).map(move |i| {
        let z = |x: f64| (x - mean) / sd;
        let lo = if i == 0 {
            f64::NEG_INFINITY
        } else {
            z((levels[i - 1] + levels[i]) / 2.0)
        };
        let hi = if i + 1 == m {
            f64::INFINITY
        } else {
            z((levels[i] + levels[i + 1]) / 2.0)
        };
        let mass = normal::mass(lo, hi);
        let (plo, phi) = (normal::pdf(lo), normal::pdf(hi));
        let tail = |u: f64, p: f64| if u.is_finite() { u * p } else { 0.0 };
        Cell {
            c: z(levels[i]),
            lo,
            hi,
            mass,
            first: plo - phi,
            second: mass + tail(lo, plo) - tail(hi, phi),
        }
    })
}

fn check_levels(levels: &[f64]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::Config("a quantizer needs at least one level".into()));
    }
    if levels.iter().any(|q| !q.is_finite()) || levels.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Config(
            "quantizer levels must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}

fn check_source(mean: f64, var: f64) -> Result<f64> {
    if !mean.is_finite() || !(var > 0.0) || !var.is_finite() {
        return Err(Error::Domain(format!("invalid Gaussian source N({mean}, {var})")));
    }
    Ok(libm::sqrt(var))
}

/// Mean squared error `E|x - Q(x)|^2` for `x ~ N(mean, var)` and nearest-level
/// quantization onto `levels`, from exact Gaussian moments of each cell.
pub fn quantizer_distortion(levels: &[f64], mean: f64, var: f64) -> Result<f64> {
    check_levels(levels)?;
    let sd = check_source(mean, var)?;
    Ok(distortion_unchecked(levels, mean, sd))
}

fn distortion_unchecked(levels: &[f64], mean: f64, sd: f64) -> f64 {
    let sum: f64 = cells(levels, mean, sd)
        .map(|cell| cell.c * cell.c * cell.mass - 2.0 * cell.c * cell.first + cell.second)
        .sum();
    sd * sd * sum
}

/// Analytic `de/dq_i = 2 int_{V_i} (q_i - t) p(t) dt` for every level.
pub fn distortion_gradient(levels: &[f64], mean: f64, var: f64) -> Result<Vec<f64>> {
    check_levels(levels)?;
    let sd = check_source(mean, var)?;
    Ok(cells(levels, mean, sd)
        .map(|cell| 2.0 * sd * (cell.c * cell.mass - cell.first))
        .collect())
}

/// Gradient plus the tridiagonal Hessian (`diag`, `upper[i] = H_{i,i+1}`)
/// and cell masses.
struct NewtonTerms {
    grad: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    mass: Vec<f64>,
}

fn newton_terms(levels: &[f64], mean: f64, sd: f64) -> NewtonTerms {
    let m = levels.len();
    let mut t = NewtonTerms {
        grad: Vec::with_capacity(m),
        diag: Vec::with_capacity(m),
        upper: Vec::with_capacity(m.saturating_sub(1)),
        mass: Vec::with_capacity(m),
    };
    for (i, cell) in cells(levels, mean, sd).enumerate() {
        t.grad.push(2.0 * sd * (cell.c * cell.mass - cell.first));
        // Moving q_i drags both cell boundaries at half speed.
        let mut h = 2.0 * cell.mass;
        if i + 1 < m {
            let coupling = (levels[i + 1] - levels[i]) * normal::pdf(cell.hi) / sd / 2.0;
            h -= coupling;
            t.upper.push(-coupling);
        }
        if i > 0 {
            h -= (levels[i] - levels[i - 1]) * normal::pdf(cell.lo) / sd / 2.0;
        }
        t.diag.push(h);
        t.mass.push(cell.mass);
    }
    t
}

/// Solves the symmetric tridiagonal system `H x = g` by elimination without
/// pivoting; `None` unless every pivot is positive (`H` positive definite).
fn solve_tridiagonal(diag: &[f64], upper: &[f64], g: &[f64]) -> Option<Vec<f64>> {
    let m = diag.len();
    let mut pivot = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let (mut d, mut r) = (diag[i], g[i]);
        if i > 0 {
            let f = upper[i - 1] / pivot[i - 1];
            d -= f * upper[i - 1];
            r -= f * rhs[i - 1];
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        pivot.push(d);
        rhs.push(r);
    }
    let mut x = alloc::vec![0.0; m];
    for i in (0..m).rev() {
        let next = if i + 1 < m { upper[i] * x[i + 1] } else { 0.0 };
        x[i] = (rhs[i] - next) / pivot[i];
    }
    Some(x)
}

/// Quantile grid `mean + sd * Phi^{-1}((i - 1/2) / M)`.
pub fn gaussian_grid(mean: f64, var: f64, levels: usize) -> Vec<f64> {
    let sd = libm::sqrt(var);
    (0..levels)
        .map(|i| mean + sd * normal::inverse_cdf((i as f64 + 0.5) / levels as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantizerOptions {
    pub levels: usize,
    pub init: Option<Vec<f64>>,
    pub max_iter: usize,
    /// Stop once every `|de/dq_i| / sd` is below this (the gradient for the
    /// standardized source).
    pub tol: f64,
}

impl Default for QuantizerOptions {
    fn default() -> Self {
        Self {
            levels: 10,
            init: None,
            max_iter: 500,
            tol: 1e-12,
        }
    }
}

/// Scalar quantizer with nearest-level mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantizer {
    pub levels: Vec<f64>,
    pub source_mean: f64,
    pub source_var: f64,
    pub distortion: f64,
}

const MIN_STEP: f64 = 1.0 / (1u32 << 20) as f64;

/// Designs the `M`-level quantizer minimizing distortion for `N(mean, var)`.
///
/// Works on the standardized source `N(0, 1)` and maps the levels back, so
/// the result is affine-equivariant. Each iteration takes the Newton step
/// `z <- z - alpha * H^{-1} g` with the exact (tridiagonal) Hessian, falling
/// back to the per-level centroid step `g_i / (2 P_i)` when `H` is not
/// positive definite. `alpha` starts at 1 and is halved, down to `2^-20`,
/// until the levels stay ordered and the step makes progress: the distortion
/// does not increase, or, once distortion changes are at rounding level, the
/// largest gradient component shrinks.
pub fn fit_quantizer(mean: f64, var: f64, options: &QuantizerOptions) -> Result<Quantizer> {
    let sd = check_source(mean, var)?;
    let m = options.levels;
    if m == 0 {
        return Err(Error::Config("a quantizer needs at least one level".into()));
    }
    let mut z = match &options.init {
        Some(init) => {
            if init.len() != m {
                return Err(Error::Dimension {
                    expected: m,
                    got: init.len(),
                });
            }
            let mut sorted = init.clone();
            sorted.sort_by(f64::total_cmp);
            check_levels(&sorted)?;
            let z: Vec<f64> = sorted.iter().map(|q| (q - mean) / sd).collect();
            check_levels(&z)?;
            z
        }
        None => gaussian_grid(0.0, 1.0, m),
    };
    let max_abs = |g: &[f64]| g.iter().fold(0.0f64, |a, b| a.max(libm::fabs(*b)));

    let mut distortion = distortion_unchecked(&z, 0.0, 1.0);
    let mut t = newton_terms(&z, 0.0, 1.0);
    for _ in 0..=options.max_iter {
        let gmax = max_abs(&t.grad);
        if gmax < options.tol {
            return Ok(Quantizer {
                levels: z.iter().map(|v| mean + sd * v).collect(),
                source_mean: mean,
                source_var: var,
                distortion: var * distortion,
            });
        }
        let step = solve_tridiagonal(&t.diag, &t.upper, &t.grad).unwrap_or_else(|| {
            t.grad
                .iter()
                .zip(&t.mass)
                .map(|(&g, &p)| if p > 0.0 { g / (2.0 * p) } else { 0.0 })
                .collect()
        });

        let mut alpha = 1.0;
        loop {
            let candidate: Vec<f64> = z.iter().zip(&step).map(|(q, s)| q - alpha * s).collect();
            if candidate.windows(2).all(|w| w[0] < w[1]) {
                let e = distortion_unchecked(&candidate, 0.0, 1.0);
                let next = newton_terms(&candidate, 0.0, 1.0);
                let progress = e <= distortion * (1.0 + 8.0 * f64::EPSILON)
                    || (e <= distortion * (1.0 + 1e-12) && max_abs(&next.grad) < gmax);
                if progress || alpha <= MIN_STEP {
                    z = candidate;
                    distortion = e;
                    t = next;
                    break;
                }
            } else if alpha <= MIN_STEP {
                break;
            }
            alpha /= 2.0;
        }
    }
    Err(Error::Convergence {
        iterations: options.max_iter,
    })
}

impl Quantizer {
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Nearest level; a value exactly between two levels maps to the lower.
    pub fn quantize(&self, v: f64) -> f64 {
        let idx = self
            .levels
            .windows(2)
            .position(|w| v <= (w[0] + w[1]) / 2.0)
            .unwrap_or(self.levels.len() - 1);
        self.levels[idx]
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&v| self.quantize(v)).collect()
    }
}
