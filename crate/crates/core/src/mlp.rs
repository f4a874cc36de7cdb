//! Dense multilayer perceptron trained on squared error with mini-batch SGD.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::channel::Dataset;
use crate::error::check_dim;
use crate::{rng, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Activation {
    Linear,
    /// Logistic `1 / (1 + e^-x)`.
    Sigmoid,
    Relu,
}

impl Activation {
    #[inline]
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Linear => z,
            Activation::Sigmoid => 1.0 / (1.0 + libm::exp(-z)),
            Activation::Relu => z.max(0.0),
        }
    }

    /// Derivative expressed through the activation output. The ReLU
    /// derivative at 0 is taken as 0.
    #[inline]
    fn derivative(self, out: f64) -> f64 {
        match self {
            Activation::Linear => 1.0,
            Activation::Sigmoid => out * (1.0 - out),
            Activation::Relu => {
                if out > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Linear => "linear",
            Activation::Sigmoid => "sigmoid",
            Activation::Relu => "relu",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "linear" => Some(Activation::Linear),
            "sigmoid" => Some(Activation::Sigmoid),
            "relu" => Some(Activation::Relu),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerSpec {
    pub width: usize,
    pub activation: Activation,
}

impl LayerSpec {
    pub const fn new(width: usize, activation: Activation) -> Self {
        Self { width, activation }
    }
}

/// Hidden layers 100-200-100-50, ReLU first and sigmoid after.
pub fn default_hidden_layers() -> Vec<LayerSpec> {
    vec![
        LayerSpec::new(100, Activation::Relu),
        LayerSpec::new(200, Activation::Sigmoid),
        LayerSpec::new(100, Activation::Sigmoid),
        LayerSpec::new(50, Activation::Sigmoid),
    ]
}

/// `out = activation(W in + b)`, `W` row-major `outputs x inputs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl Dense {
    fn forward_into(&self, input: &[f64], out: &mut [f64]) {
        for ((o, row), b) in out
            .iter_mut()
            .zip(self.weights.chunks_exact(self.inputs))
            .zip(&self.bias)
        {
            *o = self.activation.apply(dot(row, input) + b);
        }
    }

    /// `out = activation(input W^T + b)` for `rows` stacked inputs.
    fn forward_batch(&self, rows: usize, input: &[f64], out: &mut [f64]) {
        for row in out.chunks_exact_mut(self.outputs) {
            row.copy_from_slice(&self.bias);
        }
        gemm(
            rows,
            self.inputs,
            self.outputs,
            1.0,
            (input, self.inputs, 1),
            (&self.weights, 1, self.inputs),
            1.0,
            (out, self.outputs, 1),
        );
        for o in out.iter_mut() {
            *o = self.activation.apply(*o);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub layers: Vec<Dense>,
}

/// One training pair.
#[derive(Debug, Clone, Copy)]
pub struct Sample<'a> {
    pub input: &'a [f64],
    pub target: &'a [f64],
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerGradient {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

/// Gradient of the batch loss with respect to every parameter, laid out like
/// [`MlpModel::layers`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<LayerGradient>,
}

impl Gradients {
    fn zeros(model: &MlpModel) -> Self {
        Self {
            layers: model
                .layers
                .iter()
                .map(|l| LayerGradient {
                    weights: vec![0.0; l.weights.len()],
                    bias: vec![0.0; l.bias.len()],
                })
                .collect(),
        }
    }
}

/// Per-layer activations for one sample.
struct Workspace {
    acts: Vec<Vec<f64>>,
}

impl Workspace {
    fn new(model: &MlpModel) -> Self {
        Self {
            acts: model.layers.iter().map(|l| vec![0.0; l.outputs]).collect(),
        }
    }
}

/// Row-major `rows x width` buffers for a whole mini-batch.
struct BatchWorkspace {
    input: Vec<f64>,
    target: Vec<f64>,
    acts: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
}

impl BatchWorkspace {
    fn new(model: &MlpModel, rows: usize) -> Self {
        let buffers = || model.layers.iter().map(|l| vec![0.0; rows * l.outputs]).collect();
        Self {
            input: Vec::with_capacity(rows * model.input_dim()),
            target: Vec::with_capacity(rows * model.output_dim()),
            acts: buffers(),
            deltas: buffers(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    /// Weights start as `N(0, init_scale^2 / fan_in)`.
    pub init_scale: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1.0,
            batch_size: 32,
            epochs: 300,
            seed: 0,
            init_scale: 1.0,
        }
    }
}

/// Builds `hidden` followed by a sigmoid output layer of `output_dim` units.
pub fn init_model<R: Rng + ?Sized>(
    input_dim: usize,
    hidden: &[LayerSpec],
    output_dim: usize,
    init_scale: f64,
    rng: &mut R,
) -> Result<MlpModel> {
    let mut specs = hidden.to_vec();
    specs.push(LayerSpec::new(output_dim, Activation::Sigmoid));
    MlpModel::random(input_dim, &specs, init_scale, rng)
}

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

impl MlpModel {
    /// Random layer stack with zero biases; the last spec is the output layer.
    pub fn random<R: Rng + ?Sized>(
        input_dim: usize,
        specs: &[LayerSpec],
        init_scale: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if input_dim == 0 || specs.is_empty() || specs.iter().any(|s| s.width == 0) {
            return Err(Error::Config(
                "layer widths and input dimension must be positive".into(),
            ));
        }
        if !(init_scale > 0.0) || !init_scale.is_finite() {
            return Err(Error::Config(format!("init scale must be positive, got {init_scale}")));
        }
        let mut layers = Vec::with_capacity(specs.len());
        let mut fan_in = input_dim;
        for spec in specs {
            let normal = Normal::new(0.0, init_scale / libm::sqrt(fan_in as f64))
                .map_err(|e| Error::Config(format!("weight distribution: {e}")))?;
            layers.push(Dense {
                inputs: fan_in,
                outputs: spec.width,
                weights: (0..spec.width * fan_in).map(|_| normal.sample(rng)).collect(),
                bias: vec![0.0; spec.width],
                activation: spec.activation,
            });
            fan_in = spec.width;
        }
        Ok(Self { layers })
    }

    /// Checks that layer shapes chain and every parameter is finite.
    pub fn from_layers(layers: Vec<Dense>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Config("a model needs at least one layer".into()));
        }
        for (i, l) in layers.iter().enumerate() {
            if l.inputs == 0 || l.outputs == 0 {
                return Err(Error::Config(format!("layer {i} has a zero dimension")));
            }
            check_dim(l.inputs * l.outputs, l.weights.len())?;
            check_dim(l.outputs, l.bias.len())?;
            if i > 0 {
                check_dim(layers[i - 1].outputs, l.inputs)?;
            }
            if l.weights.iter().chain(&l.bias).any(|v| !v.is_finite()) {
                return Err(Error::Numerical(format!("layer {i} has non-finite parameters")));
            }
        }
        Ok(Self { layers })
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].outputs
    }

    pub fn num_parameters(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    fn run(&self, x: &[f64], ws: &mut Workspace) {
        let (first, rest) = ws.acts.split_at_mut(1);
        self.layers[0].forward_into(x, &mut first[0]);
        let mut prev: &[f64] = &first[0];
        for (layer, out) in self.layers[1..].iter().zip(rest.iter_mut()) {
            layer.forward_into(prev, out);
            prev = out;
        }
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.input_dim(), x.len())?;
        let mut ws = Workspace::new(self);
        self.run(x, &mut ws);
        Ok(ws.acts.pop().unwrap_or_default())
    }

    /// Mean over the batch of `||f(x) - y||^2`.
    pub fn loss(&self, batch: &[Sample<'_>]) -> Result<f64> {
        if batch.is_empty() {
            return Err(Error::Config("loss of an empty batch".into()));
        }
        let mut ws = Workspace::new(self);
        let mut total = 0.0;
        for s in batch {
            check_dim(self.input_dim(), s.input.len())?;
            check_dim(self.output_dim(), s.target.len())?;
            self.run(s.input, &mut ws);
            total += squared_error(ws.acts.last().unwrap(), s.target);
        }
        Ok(total / batch.len() as f64)
    }

    /// Exact gradient of [`MlpModel::loss`] over `batch`.
    pub fn backward(&self, batch: &[Sample<'_>]) -> Result<Gradients> {
        if batch.is_empty() {
            return Err(Error::Config("gradient of an empty batch".into()));
        }
        for s in batch {
            check_dim(self.input_dim(), s.input.len())?;
            check_dim(self.output_dim(), s.target.len())?;
        }
        let mut ws = BatchWorkspace::new(self, batch.len());
        let mut grads = Gradients::zeros(self);
        self.batch_gradient(batch.iter(), &mut ws, &mut grads);
        Ok(grads)
    }

    /// Forward and backward pass over a batch held as row-major matrices;
    /// overwrites `grads` with the batch-mean gradient and returns the summed
    /// sample loss.
    fn batch_gradient<'s, 'a: 's>(
        &self,
        batch: impl ExactSizeIterator<Item = &'s Sample<'a>>,
        ws: &mut BatchWorkspace,
        grads: &mut Gradients,
    ) -> f64 {
        let rows = batch.len();
        let n_in = self.input_dim();
        let n_out = self.output_dim();
        ws.input.clear();
        ws.target.clear();
        for s in batch {
            ws.input.extend_from_slice(s.input);
            ws.target.extend_from_slice(s.target);
        }

        for (li, layer) in self.layers.iter().enumerate() {
            let (before, after) = ws.acts.split_at_mut(li);
            let input: &[f64] = if li == 0 { &ws.input } else { &before[li - 1] };
            let out = &mut after[0][..rows * layer.outputs];
            layer.forward_batch(rows, input, out);
        }

        let last = self.layers.len() - 1;
        let out_act = self.layers[last].activation;
        let mut loss = 0.0;
        let delta = &mut ws.deltas[last][..rows * n_out];
        for ((d, &o), &t) in delta.iter_mut().zip(&ws.acts[last][..rows * n_out]).zip(&ws.target) {
            let e = o - t;
            loss += e * e;
            *d = 2.0 * e * out_act.derivative(o);
        }

        let inv = 1.0 / rows as f64;
        for li in (0..=last).rev() {
            let layer = &self.layers[li];
            let input: &[f64] = if li == 0 {
                &ws.input[..rows * n_in]
            } else {
                &ws.acts[li - 1][..rows * layer.inputs]
            };
            let g = &mut grads.layers[li];
            let (lower, upper) = ws.deltas.split_at_mut(li);
            let delta = &upper[0][..rows * layer.outputs];

            // dW = delta^T input / rows
            gemm(
                layer.outputs,
                rows,
                layer.inputs,
                inv,
                (delta, 1, layer.outputs),
                (input, layer.inputs, 1),
                0.0,
                (&mut g.weights, layer.inputs, 1),
            );
            g.bias.fill(0.0);
            for row in delta.chunks_exact(layer.outputs) {
                for (gb, d) in g.bias.iter_mut().zip(row) {
                    *gb += d;
                }
            }
            g.bias.iter_mut().for_each(|b| *b *= inv);

            if li > 0 {
                let below = &mut lower[li - 1][..rows * layer.inputs];
                // delta_below = delta W, then times the activation slope
                gemm(
                    rows,
                    layer.outputs,
                    layer.inputs,
                    1.0,
                    (delta, layer.outputs, 1),
                    (&layer.weights, layer.inputs, 1),
                    0.0,
                    (below, layer.inputs, 1),
                );
                let act = self.layers[li - 1].activation;
                for (b, &a) in below.iter_mut().zip(input) {
                    *b *= act.derivative(a);
                }
            }
        }
        loss
    }

    fn step(&mut self, grads: &Gradients, learning_rate: f64) {
        for (layer, g) in self.layers.iter_mut().zip(&grads.layers) {
            for (w, gw) in layer.weights.iter_mut().zip(&g.weights) {
                *w -= learning_rate * gw;
            }
            for (b, gb) in layer.bias.iter_mut().zip(&g.bias) {
                *b -= learning_rate * gb;
            }
        }
    }

    /// Mini-batch SGD over `data` with one-hot targets. Returns the mean
    /// sample loss seen during each epoch.
    pub fn train(&mut self, data: &Dataset, config: &TrainConfig) -> Result<Vec<f64>> {
        check_dim(self.input_dim(), data.dim())?;
        check_dim(self.output_dim(), data.num_classes())?;
        let targets: Vec<Vec<f64>> = (0..data.len()).map(|i| data.one_hot(i)).collect();
        let samples: Vec<Sample<'_>> = (0..data.len())
            .map(|i| Sample {
                input: data.input(i),
                target: &targets[i],
            })
            .collect();
        self.train_samples(&samples, config)
    }

    /// [`MlpModel::train`] over explicit input/target pairs.
    pub fn train_samples(&mut self, samples: &[Sample<'_>], config: &TrainConfig) -> Result<Vec<f64>> {
        if config.epochs == 0 {
            return Ok(Vec::new());
        }
        if samples.is_empty() {
            return Err(Error::Config("cannot train on an empty dataset".into()));
        }
        if !(config.learning_rate > 0.0) || config.batch_size == 0 {
            return Err(Error::Config("learning rate and batch size must be positive".into()));
        }
        for s in samples {
            check_dim(self.input_dim(), s.input.len())?;
            check_dim(self.output_dim(), s.target.len())?;
        }

        let mut rng = rng::stream(config.seed, 1);
        let mut order: Vec<usize> = (0..samples.len()).collect();
        let mut ws = BatchWorkspace::new(self, config.batch_size.min(samples.len()));
        let mut grads = Gradients::zeros(self);
        let mut history = Vec::with_capacity(config.epochs);
        for epoch in 0..config.epochs {
            order.shuffle(&mut rng);
            let mut total = 0.0;
            for batch in order.chunks(config.batch_size) {
                total += self.batch_gradient(batch.iter().map(|&i| &samples[i]), &mut ws, &mut grads);
                self.step(&grads, config.learning_rate);
            }
            let mean = total / samples.len() as f64;
            if !mean.is_finite() {
                return Err(Error::Divergence { epoch });
            }
            history.push(mean);
        }
        Ok(history)
    }

    /// Office index with the largest output.
    pub fn classify(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.forward(x)?))
    }
}

/// Dot product with independent partial sums so the loop vectorizes.
#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    acc.iter().sum::<f64>() + tail
}

/// `c = alpha a b + beta c` with `a: m x k`, `b: k x n`, `c: m x n` given as
/// `(data, row stride, column stride)`.
#[allow(clippy::too_many_arguments)]
fn gemm(
    m: usize,
    k: usize,
    n: usize,
    alpha: f64,
    a: (&[f64], usize, usize),
    b: (&[f64], usize, usize),
    beta: f64,
    c: (&mut [f64], usize, usize),
) {
    let last = |rows: usize, cols: usize, rs: usize, cs: usize| {
        if rows == 0 || cols == 0 {
            0
        } else {
            (rows - 1) * rs + (cols - 1) * cs + 1
        }
    };
    assert!(a.0.len() >= last(m, k, a.1, a.2));
    assert!(b.0.len() >= last(k, n, b.1, b.2));
    assert!(c.0.len() >= last(m, n, c.1, c.2));
    // SAFETY: the asserts keep every strided access inside its slice, and `c`
    // is an exclusive borrow distinct from `a` and `b`.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            alpha,
            a.0.as_ptr(),
            a.1 as isize,
            a.2 as isize,
            b.0.as_ptr(),
            b.1 as isize,
            b.2 as isize,
            beta,
            c.0.as_mut_ptr(),
            c.1 as isize,
            c.2 as isize,
        );
    }
}

fn squared_error(out: &[f64], target: &[f64]) -> f64 {
    out.iter().zip(target).map(|(o, t)| (o - t) * (o - t)).sum()
}

/// Initializes from `config.seed` and trains; returns the model and loss history.
pub fn train(data: &Dataset, hidden: &[LayerSpec], config: &TrainConfig) -> Result<(MlpModel, Vec<f64>)> {
    let mut init_rng = rng::stream(config.seed, 0);
    let mut model = init_model(data.dim(), hidden, data.num_classes(), config.init_scale, &mut init_rng)?;
    let history = model.train(data, config)?;
    Ok((model, history))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_identity(n: usize) -> MlpModel {
        let mut weights = vec![0.0; n * n];
        for i in 0..n {
            weights[i * n + i] = 1.0;
        }
        MlpModel::from_layers(vec![Dense {
            inputs: n,
            outputs: n,
            weights,
            bias: vec![0.0; n],
            activation: Activation::Linear,
        }])
        .unwrap()
    }

    #[test]
    fn paper_architecture_dimensions() {
        let m = init_model(18, &default_hidden_layers(), 15, 1.0, &mut rng::stream(0, 0)).unwrap();
        let dims: Vec<(usize, usize)> = m.layers.iter().map(|l| (l.inputs, l.outputs)).collect();
        assert_eq!(dims, [(18, 100), (100, 200), (200, 100), (100, 50), (50, 15)]);
        assert_eq!(m.layers[0].activation, Activation::Relu);
        assert!(m.layers[1..].iter().all(|l| l.activation == Activation::Sigmoid));
        assert!(m.layers.iter().all(|l| l.bias.iter().all(|&b| b == 0.0)));
    }

    #[test]
    fn zero_width_is_a_config_error() {
        let specs = [LayerSpec::new(0, Activation::Relu)];
        assert!(matches!(
            init_model(4, &specs, 2, 1.0, &mut rng::stream(0, 0)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn init_is_seeded() {
        let a = init_model(6, &default_hidden_layers(), 3, 1.0, &mut rng::stream(5, 0)).unwrap();
        let b = init_model(6, &default_hidden_layers(), 3, 1.0, &mut rng::stream(5, 0)).unwrap();
        let c = init_model(6, &default_hidden_layers(), 3, 1.0, &mut rng::stream(6, 0)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn forward_basics() {
        let id = linear_identity(3);
        assert_eq!(id.forward(&[1.0, -2.0, 0.5]).unwrap(), vec![1.0, -2.0, 0.5]);
        assert!(matches!(id.forward(&[1.0]), Err(Error::Dimension { .. })));

        let mut zero = init_model(
            4,
            &[LayerSpec::new(3, Activation::Relu)],
            5,
            1.0,
            &mut rng::stream(1, 0),
        )
        .unwrap();
        for l in &mut zero.layers {
            l.weights.fill(0.0);
        }
        assert_eq!(zero.forward(&[1.0, 2.0, 3.0, 4.0]).unwrap(), vec![0.5; 5]);

        let relu = MlpModel::from_layers(vec![Dense {
            inputs: 2,
            outputs: 2,
            weights: vec![1.0, 0.0, 0.0, 1.0],
            bias: vec![0.0, 0.0],
            activation: Activation::Relu,
        }])
        .unwrap();
        assert_eq!(relu.forward(&[-3.0, 2.0]).unwrap(), vec![0.0, 2.0]);
    }

    #[test]
    fn loss_of_half_outputs_against_one_hot() {
        let mut m = init_model(2, &[], 15, 1.0, &mut rng::stream(1, 0)).unwrap();
        m.layers[0].weights.fill(0.0);
        let mut y = vec![0.0; 15];
        y[4] = 1.0;
        let x = [0.3, 0.1];
        let l = m.loss(&[Sample { input: &x, target: &y }]).unwrap();
        assert!((l - 3.75).abs() < 1e-12);
    }

    #[test]
    fn perfect_fit_has_zero_loss_and_gradient() {
        let id = linear_identity(2);
        let xs = [[1.0, 2.0], [-0.5, 3.0]];
        let batch: Vec<Sample> = xs.iter().map(|x| Sample { input: x, target: x }).collect();
        assert_eq!(id.loss(&batch).unwrap(), 0.0);
        let g = id.backward(&batch).unwrap();
        assert!(g
            .layers
            .iter()
            .all(|l| l.weights.iter().chain(&l.bias).all(|&v| v == 0.0)));
    }

    #[test]
    fn batch_gradient_is_mean_of_sample_gradients() {
        let m = init_model(
            3,
            &[LayerSpec::new(4, Activation::Relu)],
            2,
            1.0,
            &mut rng::stream(2, 0),
        )
        .unwrap();
        let xs = [[0.1, 0.2, -0.3], [1.0, -1.0, 0.5]];
        let ys = [[1.0, 0.0], [0.0, 1.0]];
        let batch: Vec<Sample> = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| Sample { input: x, target: y })
            .collect();
        let full = m.backward(&batch).unwrap();
        let a = m.backward(&batch[..1]).unwrap();
        let b = m.backward(&batch[1..]).unwrap();
        for ((f, a), b) in full.layers.iter().zip(&a.layers).zip(&b.layers) {
            for ((f, a), b) in f.weights.iter().zip(&a.weights).zip(&b.weights) {
                assert!((f - (a + b) / 2.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn classify_ties_and_ordering() {
        let id = linear_identity(5);
        assert_eq!(id.classify(&[0.0, 0.0, 1.0, 0.0, 0.0]).unwrap(), 2);
        assert_eq!(id.classify(&[0.2; 5]).unwrap(), 0);
        assert_eq!(argmax(&[1.0, 3.0, 3.0]), 1);
    }

    #[test]
    fn zero_epochs_is_a_no_op() {
        let mut m = init_model(2, &[], 2, 1.0, &mut rng::stream(0, 0)).unwrap();
        let before = m.clone();
        let x = [0.0, 1.0];
        let y = [1.0, 0.0];
        let h = m
            .train_samples(
                &[Sample { input: &x, target: &y }],
                &TrainConfig {
                    epochs: 0,
                    ..Default::default()
                },
            )
            .unwrap();
        assert!(h.is_empty());
        assert_eq!(m, before);
    }

    #[test]
    fn divergence_is_reported() {
        let mut m = linear_identity(1);
        let x = [1e200];
        let y = [0.0];
        let err = m.train_samples(
            &[Sample { input: &x, target: &y }],
            &TrainConfig {
                epochs: 5,
                learning_rate: 1.0,
                batch_size: 1,
                ..Default::default()
            },
        );
        assert!(matches!(err, Err(Error::Divergence { .. })));
    }
}
