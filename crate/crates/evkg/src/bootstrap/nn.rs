//! Small dense-math building blocks for the relation classifier: parameter
//! initialization, gradient accumulation, and the Adam update rule.

use ndarray::Array2;
use rand::Rng;
use std::collections::BTreeMap;

/// Uniform init in ±1/sqrt(fan_in); biases start at zero.
pub fn init_matrix<R: Rng>(rows: usize, cols: usize, fan_in: usize, rng: &mut R) -> Array2<f64> {
    let scale = 1.0 / (fan_in.max(1) as f64).sqrt();
    Array2::from_shape_fn((rows, cols), |_| rng.gen_range(-scale..scale))
}

/// Uniform init in ±0.1, the fallback when no pretrained vectors are given.
pub fn init_embedding<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| rng.gen_range(-0.1..0.1))
}

/// Named gradient tensors, shaped like the parameters they mirror.
#[derive(Debug, Clone, Default)]
pub struct Gradients {
    pub tensors: BTreeMap<String, Array2<f64>>,
}

impl Gradients {
    pub fn zeros_like(shapes: &[(String, (usize, usize))]) -> Self {
        Gradients {
            tensors: shapes
                .iter()
                .map(|(name, (r, c))| (name.clone(), Array2::zeros((*r, *c))))
                .collect(),
        }
    }

    pub fn get_mut(&mut self, name: &str) -> &mut Array2<f64> {
        self.tensors
            .get_mut(name)
            .unwrap_or_else(|| panic!("unknown gradient tensor `{name}`"))
    }

    pub fn add_assign(&mut self, other: &Gradients) {
        for (name, g) in &other.tensors {
            *self.get_mut(name) += g;
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for g in self.tensors.values_mut() {
            *g *= factor;
        }
    }
}

/// Adam optimizer with bias correction; one first/second moment pair per
/// named tensor.
#[derive(Debug, Clone)]
pub struct Adam {
    pub learning_rate: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    step: u64,
    moments: BTreeMap<String, (Array2<f64>, Array2<f64>)>,
}

impl Adam {
    pub fn new(learning_rate: f64) -> Self {
        Adam {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            step: 0,
            moments: BTreeMap::new(),
        }
    }

    /// Applies one update to every named parameter from its gradient.
    pub fn step<'a>(
        &mut self,
        params: impl Iterator<Item = (String, &'a mut Array2<f64>)>,
        grads: &Gradients,
    ) {
        self.step += 1;
        let bc1 = 1.0 - self.beta1.powi(self.step as i32);
        let bc2 = 1.0 - self.beta2.powi(self.step as i32);
        for (name, param) in params {
            let grad = &grads.tensors[&name];
            let (m, v) = self
                .moments
                .entry(name)
                .or_insert_with(|| (Array2::zeros(grad.dim()), Array2::zeros(grad.dim())));
            m.zip_mut_with(grad, |mi, gi| *mi = self.beta1 * *mi + (1.0 - self.beta1) * gi);
            v.zip_mut_with(grad, |vi, gi| {
                *vi = self.beta2 * *vi + (1.0 - self.beta2) * gi * gi
            });
            ndarray::Zip::from(param)
                .and(&*m)
                .and(&*v)
                .for_each(|p, mi, vi| {
                    let m_hat = mi / bc1;
                    let v_hat = vi / bc2;
                    *p -= self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
                });
        }
    }
}

/// Numerically stable softmax over a logit vector.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}
