//! The policy/value network: a shared tanh trunk of two hidden layers with
//! three linear heads (gate logits, permutation logits, scalar value), plus
//! the matching hand-written backward pass.
//!
//! Weights are stored row-major: `w[row * in_dim + col]` multiplies input
//! `col` into output `row`.

use qcsyn_core::Rng;

use crate::error::{AgentError, Result};

/// Network dimensions. `hidden` is the width of both trunk layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct NetShape {
    pub obs_dim: usize,
    pub hidden: usize,
    pub gate_dim: usize,
    pub perm_dim: usize,
}

/// All trainable parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct PolicyParams {
    pub shape: NetShape,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
    pub wg: Vec<f64>,
    pub bg: Vec<f64>,
    pub wp: Vec<f64>,
    pub bp: Vec<f64>,
    pub wv: Vec<f64>,
    pub bv: f64,
}

fn xavier_bound(fan_in: usize, fan_out: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt()
}

impl PolicyParams {
    /// All-zero parameters: uniform policy heads and value 0.
    pub fn zeros(shape: NetShape) -> Self {
        PolicyParams {
            shape,
            w1: vec![0.0; shape.hidden * shape.obs_dim],
            b1: vec![0.0; shape.hidden],
            w2: vec![0.0; shape.hidden * shape.hidden],
            b2: vec![0.0; shape.hidden],
            wg: vec![0.0; shape.gate_dim * shape.hidden],
            bg: vec![0.0; shape.gate_dim],
            wp: vec![0.0; shape.perm_dim * shape.hidden],
            bp: vec![0.0; shape.perm_dim],
            wv: vec![0.0; shape.hidden],
            bv: 0.0,
        }
    }

    /// Xavier-uniform weights, zero biases. Weight matrices are drawn in
    /// declaration order (w1, w2, wg, wp, wv), entries row-major.
    pub fn init(shape: NetShape, rng: &mut Rng) -> Self {
        let mut params = PolicyParams::zeros(shape);
        let fill = |w: &mut [f64], fan_in: usize, fan_out: usize, rng: &mut Rng| {
            let bound = xavier_bound(fan_in, fan_out);
            for v in w.iter_mut() {
                *v = rng.f64_range(-bound, bound);
            }
        };
        fill(&mut params.w1, shape.obs_dim, shape.hidden, rng);
        fill(&mut params.w2, shape.hidden, shape.hidden, rng);
        fill(&mut params.wg, shape.hidden, shape.gate_dim, rng);
        fill(&mut params.wp, shape.hidden, shape.perm_dim, rng);
        fill(&mut params.wv, shape.hidden, 1, rng);
        params
    }

    pub fn num_params(&self) -> usize {
        self.w1.len()
            + self.b1.len()
            + self.w2.len()
            + self.b2.len()
            + self.wg.len()
            + self.bg.len()
            + self.wp.len()
            + self.bp.len()
            + self.wv.len()
            + 1
    }

    /// Flatten in field order (w1, b1, w2, b2, wg, bg, wp, bp, wv, bv).
    pub fn to_flat(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.num_params());
        for part in [
            &self.w1, &self.b1, &self.w2, &self.b2, &self.wg, &self.bg, &self.wp, &self.bp,
            &self.wv,
        ] {
            flat.extend_from_slice(part);
        }
        flat.push(self.bv);
        flat
    }

    pub fn from_flat(shape: NetShape, flat: &[f64]) -> Result<Self> {
        let mut params = PolicyParams::zeros(shape);
        if flat.len() != params.num_params() {
            return Err(AgentError::ShapeMismatch(format!(
                "flat vector has {} entries, shape needs {}",
                flat.len(),
                params.num_params()
            )));
        }
        let mut offset = 0;
        {
            let parts: [&mut Vec<f64>; 9] = [
                &mut params.w1,
                &mut params.b1,
                &mut params.w2,
                &mut params.b2,
                &mut params.wg,
                &mut params.bg,
                &mut params.wp,
                &mut params.bp,
                &mut params.wv,
            ];
            for part in parts {
                let len = part.len();
                part.copy_from_slice(&flat[offset..offset + len]);
                offset += len;
            }
        }
        params.bv = flat[offset];
        Ok(params)
    }

    pub fn all_finite(&self) -> bool {
        self.to_flat().iter().all(|v| v.is_finite())
    }
}

/// Gradient accumulator with the same layout as [`PolicyParams`].
#[derive(Clone, Debug)]
pub struct PolicyGrad {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
    pub wg: Vec<f64>,
    pub bg: Vec<f64>,
    pub wp: Vec<f64>,
    pub bp: Vec<f64>,
    pub wv: Vec<f64>,
    pub bv: f64,
}

impl PolicyGrad {
    pub fn zeros_like(params: &PolicyParams) -> Self {
        PolicyGrad {
            w1: vec![0.0; params.w1.len()],
            b1: vec![0.0; params.b1.len()],
            w2: vec![0.0; params.w2.len()],
            b2: vec![0.0; params.b2.len()],
            wg: vec![0.0; params.wg.len()],
            bg: vec![0.0; params.bg.len()],
            wp: vec![0.0; params.wp.len()],
            bp: vec![0.0; params.bp.len()],
            wv: vec![0.0; params.wv.len()],
            bv: 0.0,
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for part in [
            &mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2, &mut self.wg, &mut self.bg,
            &mut self.wp, &mut self.bp, &mut self.wv,
        ] {
            for v in part.iter_mut() {
                *v *= factor;
            }
        }
        self.bv *= factor;
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut flat = Vec::new();
        for part in [
            &self.w1, &self.b1, &self.w2, &self.b2, &self.wg, &self.bg, &self.wp, &self.bp,
            &self.wv,
        ] {
            flat.extend_from_slice(part);
        }
        flat.push(self.bv);
        flat
    }

    /// `params -= lr * grad`.
    pub fn apply_sgd(&self, params: &mut PolicyParams, lr: f64) {
        let pairs: [(&mut Vec<f64>, &Vec<f64>); 9] = [
            (&mut params.w1, &self.w1),
            (&mut params.b1, &self.b1),
            (&mut params.w2, &self.w2),
            (&mut params.b2, &self.b2),
            (&mut params.wg, &self.wg),
            (&mut params.bg, &self.bg),
            (&mut params.wp, &self.wp),
            (&mut params.bp, &self.bp),
            (&mut params.wv, &self.wv),
        ];
        for (p, g) in pairs {
            for (pv, gv) in p.iter_mut().zip(g) {
                *pv -= lr * gv;
            }
        }
        params.bv -= lr * self.bv;
    }
}

/// Activations cached for the backward pass.
#[derive(Clone, Debug)]
pub struct ForwardCache {
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    pub gate_logits: Vec<f64>,
    pub perm_logits: Vec<f64>,
    pub value: f64,
}

fn affine(w: &[f64], b: &[f64], x: &[f64], out_dim: usize) -> Vec<f64> {
    let in_dim = x.len();
    let mut out = b.to_vec();
    for (row, out_v) in out.iter_mut().enumerate().take(out_dim) {
        let weights = &w[row * in_dim..(row + 1) * in_dim];
        let mut acc = 0.0;
        for (wv, xv) in weights.iter().zip(x) {
            acc += wv * xv;
        }
        *out_v += acc;
    }
    out
}

/// Deterministic forward pass; two independent categorical heads over the
/// shared trunk plus a scalar value estimate.
pub fn policy_forward(params: &PolicyParams, obs: &[f64]) -> ForwardCache {
    let shape = params.shape;
    assert_eq!(obs.len(), shape.obs_dim, "observation width mismatch");
    let mut h1 = affine(&params.w1, &params.b1, obs, shape.hidden);
    for v in h1.iter_mut() {
        *v = v.tanh();
    }
    let mut h2 = affine(&params.w2, &params.b2, &h1, shape.hidden);
    for v in h2.iter_mut() {
        *v = v.tanh();
    }
    let gate_logits = affine(&params.wg, &params.bg, &h2, shape.gate_dim);
    let perm_logits = affine(&params.wp, &params.bp, &h2, shape.perm_dim);
    let value = params.bv
        + params
            .wv
            .iter()
            .zip(&h2)
            .map(|(w, h)| w * h)
            .sum::<f64>();
    ForwardCache {
        h1,
        h2,
        gate_logits,
        perm_logits,
        value,
    }
}

/// Accumulate gradients for one sample given the head-level gradients
/// `d_gate = dL/d gate_logits`, `d_perm = dL/d perm_logits`, `d_value`.
pub fn policy_backward(
    params: &PolicyParams,
    obs: &[f64],
    cache: &ForwardCache,
    d_gate: &[f64],
    d_perm: &[f64],
    d_value: f64,
    grad: &mut PolicyGrad,
) {
    let shape = params.shape;
    let hidden = shape.hidden;

    let mut dh2 = vec![0.0; hidden];
    for (row, &dg) in d_gate.iter().enumerate() {
        let weights = &params.wg[row * hidden..(row + 1) * hidden];
        for (j, w) in weights.iter().enumerate() {
            dh2[j] += w * dg;
        }
        for (j, h) in cache.h2.iter().enumerate() {
            grad.wg[row * hidden + j] += dg * h;
        }
        grad.bg[row] += dg;
    }
    for (row, &dp) in d_perm.iter().enumerate() {
        let weights = &params.wp[row * hidden..(row + 1) * hidden];
        for (j, w) in weights.iter().enumerate() {
            dh2[j] += w * dp;
        }
        for (j, h) in cache.h2.iter().enumerate() {
            grad.wp[row * hidden + j] += dp * h;
        }
        grad.bp[row] += dp;
    }
    for j in 0..hidden {
        dh2[j] += params.wv[j] * d_value;
        grad.wv[j] += d_value * cache.h2[j];
    }
    grad.bv += d_value;

    // Through the second tanh layer.
    let mut dh1 = vec![0.0; hidden];
    for j in 0..hidden {
        let dz = dh2[j] * (1.0 - cache.h2[j] * cache.h2[j]);
        let weights = &params.w2[j * hidden..(j + 1) * hidden];
        for (k, w) in weights.iter().enumerate() {
            dh1[k] += w * dz;
        }
        for (k, h) in cache.h1.iter().enumerate() {
            grad.w2[j * hidden + k] += dz * h;
        }
        grad.b2[j] += dz;
    }

    // Through the first tanh layer.
    let obs_dim = shape.obs_dim;
    for k in 0..hidden {
        let dz = dh1[k] * (1.0 - cache.h1[k] * cache.h1[k]);
        for (m, x) in obs.iter().enumerate() {
            grad.w1[k * obs_dim + m] += dz * x;
        }
        grad.b1[k] += dz;
    }
}

/// Numerically stable log-softmax.
pub fn log_softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_sum = logits.iter().map(|v| (v - max).exp()).sum::<f64>().ln() + max;
    logits.iter().map(|v| v - log_sum).collect()
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    log_softmax(logits).iter().map(|v| v.exp()).collect()
}

/// Shannon entropy of a probability vector (natural log).
pub fn entropy(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// Inverse-CDF sample from a categorical distribution; one `f64_unit` draw.
pub fn sample_categorical(probs: &[f64], rng: &mut Rng) -> usize {
    let r = rng.f64_unit();
    let mut cumulative = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        cumulative += p;
        if r < cumulative {
            return i;
        }
    }
    probs.len() - 1
}
