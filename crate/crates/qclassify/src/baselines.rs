//! Classical comparison models: linear and RBF kernels reusing the SMO
//! solver, and a small sigmoid feedforward network.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qkernel::KernelMatrix;

fn check_shapes(x: &[Vec<f64>], y: Option<&[Vec<f64>]>) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::Contract("empty feature set".into()));
    }
    let d = x[0].len();
    for row in x.iter().chain(y.into_iter().flatten()) {
        if row.len() != d {
            return Err(Error::Contract(format!(
                "inconsistent feature lengths: {} vs {d}",
                row.len()
            )));
        }
    }
    Ok(d)
}

/// Plain dot-product kernel.
pub fn linear_kernel(x: &[Vec<f64>], y: Option<&[Vec<f64>]>) -> Result<KernelMatrix> {
    check_shapes(x, y)?;
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(ai, bi)| ai * bi).sum::<f64>();
    Ok(match y {
        None => {
            let n = x.len();
            let mut k = KernelMatrix::zeros(n, n, true);
            for i in 0..n {
                for j in i..n {
                    let v = dot(&x[i], &x[j]);
                    k.set(i, j, v);
                    k.set(j, i, v);
                }
            }
            k
        }
        Some(y) => {
            let mut k = KernelMatrix::zeros(y.len(), x.len(), false);
            for (i, yi) in y.iter().enumerate() {
                for (j, xj) in x.iter().enumerate() {
                    k.set(i, j, dot(yi, xj));
                }
            }
            k
        }
    })
}

/// Gaussian kernel exp(-gamma |xi - xj|^2).
pub fn rbf_kernel(x: &[Vec<f64>], y: Option<&[Vec<f64>]>, gamma: f64) -> Result<KernelMatrix> {
    if gamma <= 0.0 || !gamma.is_finite() {
        return Err(Error::Parameter(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    check_shapes(x, y)?;
    let dist_sq = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(ai, bi)| (ai - bi) * (ai - bi))
            .sum::<f64>()
    };
    Ok(match y {
        None => {
            let n = x.len();
            let mut k = KernelMatrix::zeros(n, n, true);
            for i in 0..n {
                k.set(i, i, 1.0);
                for j in (i + 1)..n {
                    let v = (-gamma * dist_sq(&x[i], &x[j])).exp();
                    k.set(i, j, v);
                    k.set(j, i, v);
                }
            }
            k
        }
        Some(y) => {
            let mut k = KernelMatrix::zeros(y.len(), x.len(), false);
            for (i, yi) in y.iter().enumerate() {
                for (j, xj) in x.iter().enumerate() {
                    k.set(i, j, (-gamma * dist_sq(yi, xj)).exp());
                }
            }
            k
        }
    })
}

/// Default RBF bandwidth 1 / (d * var(features)), scikit-style.
pub fn default_gamma(x: &[Vec<f64>]) -> f64 {
    let d = x[0].len();
    let n = (x.len() * d) as f64;
    let mean: f64 = x.iter().flatten().sum::<f64>() / n;
    let var: f64 = x
        .iter()
        .flatten()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / n;
    if var > 1e-12 {
        1.0 / (d as f64 * var)
    } else {
        1.0
    }
}

const MLP_BATCH_SIZE: usize = 32;

/// Feedforward network shape; `n_hidden = 0` means plain logistic
/// regression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlpConfig {
    pub n_hidden: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            n_hidden: 50,
            epochs: 200,
            learning_rate: 0.01,
            seed: 0,
        }
    }
}

/// Sigmoid network input -> n_hidden -> 1 (or input -> 1 when no hidden
/// layer), trained with mini-batch gradient descent on cross-entropy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub n_inputs: usize,
    pub n_hidden: usize,
    /// Hidden weights, row-major n_hidden x n_inputs; empty when n_hidden = 0.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    /// Output weights over the hidden layer (or over the inputs directly).
    pub w2: Vec<f64>,
    pub b2: f64,
    /// Mean training cross-entropy per epoch.
    pub loss_trace: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn bce(p: f64, t: f64) -> f64 {
    let p = p.clamp(1e-12, 1.0 - 1e-12);
    -(t * p.ln() + (1.0 - t) * (1.0 - p).ln())
}

impl MlpModel {
    fn init(n_inputs: usize, n_hidden: usize, rng: &mut ChaCha8Rng) -> Self {
        let bound1 = 1.0 / (n_inputs as f64).sqrt();
        let (w1, b1, w2) = if n_hidden > 0 {
            let w1: Vec<f64> = (0..n_hidden * n_inputs)
                .map(|_| rng.gen_range(-bound1..bound1))
                .collect();
            let bound2 = 1.0 / (n_hidden as f64).sqrt();
            let w2: Vec<f64> = (0..n_hidden)
                .map(|_| rng.gen_range(-bound2..bound2))
                .collect();
            (w1, vec![0.0; n_hidden], w2)
        } else {
            let w2: Vec<f64> = (0..n_inputs)
                .map(|_| rng.gen_range(-bound1..bound1))
                .collect();
            (vec![], vec![], w2)
        };
        MlpModel {
            n_inputs,
            n_hidden,
            w1,
            b1,
            w2,
            b2: 0.0,
            loss_trace: vec![],
        }
    }

    /// Forward pass returning (hidden activations, output probability).
    fn forward(&self, x: &[f64]) -> (Vec<f64>, f64) {
        if self.n_hidden == 0 {
            let z: f64 = self.w2.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>() + self.b2;
            return (vec![], sigmoid(z));
        }
        let mut h = Vec::with_capacity(self.n_hidden);
        for k in 0..self.n_hidden {
            let z: f64 = self.w1[k * self.n_inputs..(k + 1) * self.n_inputs]
                .iter()
                .zip(x)
                .map(|(w, xi)| w * xi)
                .sum::<f64>()
                + self.b1[k];
            h.push(sigmoid(z));
        }
        let z: f64 = self.w2.iter().zip(&h).map(|(w, hi)| w * hi).sum::<f64>() + self.b2;
        (h, sigmoid(z))
    }

    /// Output probability for one sample.
    pub fn probability(&self, x: &[f64]) -> f64 {
        self.forward(x).1
    }

    /// Mean cross-entropy over a batch.
    pub fn loss(&self, x: &[Vec<f64>], y01: &[f64]) -> f64 {
        x.iter()
            .zip(y01)
            .map(|(xi, &t)| bce(self.probability(xi), t))
            .sum::<f64>()
            / x.len() as f64
    }

    /// All trainable parameters flattened: w1, b1, w2, b2.
    pub fn flat_params(&self) -> Vec<f64> {
        let mut p = self.w1.clone();
        p.extend_from_slice(&self.b1);
        p.extend_from_slice(&self.w2);
        p.push(self.b2);
        p
    }

    pub fn set_flat_params(&mut self, p: &[f64]) {
        let (n1, nb) = (self.w1.len(), self.b1.len());
        assert_eq!(p.len(), n1 + nb + self.w2.len() + 1);
        self.w1.copy_from_slice(&p[..n1]);
        self.b1.copy_from_slice(&p[n1..n1 + nb]);
        let n2 = self.w2.len();
        self.w2.copy_from_slice(&p[n1 + nb..n1 + nb + n2]);
        self.b2 = p[n1 + nb + n2];
    }

    /// Analytic gradient of the mean batch loss in `flat_params` order.
    pub fn flat_gradients(&self, x: &[Vec<f64>], y01: &[f64]) -> Vec<f64> {
        let scale = 1.0 / x.len() as f64;
        let mut gw1 = vec![0.0; self.w1.len()];
        let mut gb1 = vec![0.0; self.b1.len()];
        let mut gw2 = vec![0.0; self.w2.len()];
        let mut gb2 = 0.0;
        for (xi, &t) in x.iter().zip(y01) {
            let (h, p) = self.forward(xi);
            // d(bce)/d(z_out) for sigmoid output is p - t
            let dz = p - t;
            if self.n_hidden == 0 {
                for (g, v) in gw2.iter_mut().zip(xi) {
                    *g += dz * v * scale;
                }
                gb2 += dz * scale;
                continue;
            }
            for (k, &hk) in h.iter().enumerate() {
                gw2[k] += dz * hk * scale;
                let dh = dz * self.w2[k] * hk * (1.0 - hk);
                for (j, &xj) in xi.iter().enumerate() {
                    gw1[k * self.n_inputs + j] += dh * xj * scale;
                }
                gb1[k] += dh * scale;
            }
            gb2 += dz * scale;
        }
        let mut g = gw1;
        g.extend_from_slice(&gb1);
        g.extend_from_slice(&gw2);
        g.push(gb2);
        g
    }
}

/// Train the network with shuffled mini-batches; deterministic per seed.
pub fn mlp_train(x: &[Vec<f64>], y01: &[f64], cfg: &MlpConfig) -> Result<MlpModel> {
    if x.is_empty() || x.len() != y01.len() {
        return Err(Error::Contract(format!(
            "need matching non-empty inputs, got {} samples and {} labels",
            x.len(),
            y01.len()
        )));
    }
    if cfg.learning_rate <= 0.0 || !cfg.learning_rate.is_finite() {
        return Err(Error::Parameter(format!(
            "learning rate must be positive, got {}",
            cfg.learning_rate
        )));
    }
    for &t in y01 {
        if t != 0.0 && t != 1.0 {
            return Err(Error::Contract(format!("targets must be 0/1, got {t}")));
        }
    }
    let d = check_shapes(x, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut model = MlpModel::init(d, cfg.n_hidden, &mut rng);

    let mut order: Vec<usize> = (0..x.len()).collect();
    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for chunk in order.chunks(MLP_BATCH_SIZE) {
            let bx: Vec<Vec<f64>> = chunk.iter().map(|&i| x[i].clone()).collect();
            let by: Vec<f64> = chunk.iter().map(|&i| y01[i]).collect();
            let grads = model.flat_gradients(&bx, &by);
            let mut params = model.flat_params();
            for (p, g) in params.iter_mut().zip(&grads) {
                *p -= cfg.learning_rate * g;
            }
            model.set_flat_params(&params);
            epoch_loss += model.loss(&bx, &by) * chunk.len() as f64;
        }
        epoch_loss /= x.len() as f64;
        if !epoch_loss.is_finite() {
            return Err(Error::Diverged(format!(
                "loss became non-finite at epoch {epoch}; lower the learning rate"
            )));
        }
        model.loss_trace.push(epoch_loss);
    }
    Ok(model)
}

/// Probabilities and class labels; +1 only above 0.5 strictly.
pub fn mlp_predict(model: &MlpModel, x: &[Vec<f64>]) -> (Vec<f64>, Vec<i8>) {
    let probs: Vec<f64> = x.iter().map(|xi| model.probability(xi)).collect();
    let labels = probs
        .iter()
        .map(|&p| if p > 0.5 { 1 } else { -1 })
        .collect();
    (probs, labels)
}
