//! Semi-supervised relation labeling: per-category classifiers trained on
//! seed-labeled instances, then iterative self-labeling of unlabeled
//! instances above an annealed confidence threshold.

pub mod model;
pub mod nn;

pub use model::{CategoryScores, ClassifierModel, EncodedInput, ModelDims, Vocab};

use crate::relation::{Category, RelationType};
use crate::seeds::TrainingInstance;
use nn::{Adam, Gradients};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum BootstrapError {
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("no labeled instances for category {0}")]
    EmptyLabeledSet(Category),
    #[error("bootstrap needs a nonempty seed set")]
    NoSeeds,
    #[error("bad checkpoint: {0}")]
    BadCheckpoint(String),
    #[error("{file}:{line}: bad embedding row: {message}")]
    BadEmbedding {
        file: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Training and self-labeling hyperparameters. Defaults are desk-scale; see
/// [`BootstrapConfig::reference_scale`] for the full-size configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    /// Initial confidence threshold, in (0, 1).
    pub tau0: f64,
    /// Number of self-labeling iterations K.
    pub iterations: u32,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub dropout: f64,
    pub d_e: usize,
    pub d_h: usize,
    pub ffn_hidden: usize,
    /// Unlabeled instances sampled as None-class negatives per positive.
    pub negative_ratio: f64,
    /// Epoch budget per classifier training run.
    pub epochs: usize,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            tau0: 0.5,
            iterations: 10,
            learning_rate: 0.001,
            batch_size: 32,
            dropout: 0.2,
            d_e: 32,
            d_h: 32,
            ffn_hidden: 64,
            negative_ratio: 1.0,
            epochs: 5,
            seed: 42,
        }
    }
}

impl BootstrapConfig {
    /// Full-scale settings: bidirectional recurrent summaries of 256, a
    /// 512-wide hidden layer, batch 512, dropout 0.2, learning rate 1e-3.
    pub fn reference_scale() -> Self {
        BootstrapConfig {
            d_e: 300,
            d_h: 256,
            ffn_hidden: 512,
            batch_size: 512,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), BootstrapError> {
        if !(self.tau0 > 0.0 && self.tau0 < 1.0) {
            return Err(BootstrapError::BadConfig(format!(
                "tau0 must lie in (0,1), got {}",
                self.tau0
            )));
        }
        if self.iterations < 1 {
            return Err(BootstrapError::BadConfig(
                "iterations must be at least 1".to_string(),
            ));
        }
        if self.batch_size == 0 || self.epochs == 0 {
            return Err(BootstrapError::BadConfig(
                "batch size and epochs must be positive".to_string(),
            ));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(BootstrapError::BadConfig(format!(
                "dropout must lie in [0,1), got {}",
                self.dropout
            )));
        }
        if self.negative_ratio < 0.0 {
            return Err(BootstrapError::BadConfig(
                "negative ratio must be nonnegative".to_string(),
            ));
        }
        if self.d_e == 0 || self.d_h == 0 || self.ffn_hidden == 0 {
            return Err(BootstrapError::BadConfig(
                "model dimensions must be positive".to_string(),
            ));
        }
        if self.d_h % 2 != 0 {
            return Err(BootstrapError::BadConfig("d_h must be even".to_string()));
        }
        Ok(())
    }

    pub fn dims(&self) -> ModelDims {
        ModelDims {
            d_e: self.d_e,
            d_h: self.d_h,
            ffn_hidden: self.ffn_hidden,
        }
    }
}

/// The annealed confidence threshold
/// τ_k = τ_0 + (1 − τ_0) / (1 + exp(−(k − K/2))).
pub fn anneal_threshold(tau0: f64, k: u32, total: u32) -> Result<f64, BootstrapError> {
    if !(tau0 > 0.0 && tau0 < 1.0) {
        return Err(BootstrapError::BadConfig(format!(
            "tau0 must lie in (0,1), got {tau0}"
        )));
    }
    if total < 1 {
        return Err(BootstrapError::BadConfig(
            "total iterations must be at least 1".to_string(),
        ));
    }
    if k > total {
        return Err(BootstrapError::BadConfig(format!(
            "iteration {k} exceeds total {total}"
        )));
    }
    let x = k as f64 - total as f64 / 2.0;
    Ok(tau0 + (1.0 - tau0) / (1.0 + (-x).exp()))
}

/// Loads pretrained embeddings from a whitespace-separated text file: one
/// word followed by its vector per line.
pub fn load_embeddings(path: &Path) -> Result<HashMap<String, Vec<f64>>, BootstrapError> {
    let name = path.display().to_string();
    let contents = std::fs::read_to_string(path)?;
    let mut out = HashMap::new();
    for (i, line) in contents.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let word = parts.next().unwrap().to_string();
        let values: Result<Vec<f64>, _> = parts.map(str::parse::<f64>).collect();
        let values = values.map_err(|e| BootstrapError::BadEmbedding {
            file: name.clone(),
            line: i + 1,
            message: e.to_string(),
        })?;
        if values.is_empty() {
            return Err(BootstrapError::BadEmbedding {
                file: name.clone(),
                line: i + 1,
                message: "row has no vector components".to_string(),
            });
        }
        out.insert(word, values);
    }
    Ok(out)
}

/// A trained classifier plus its per-epoch mean training loss.
pub struct TrainOutcome {
    pub model: ClassifierModel,
    pub epoch_losses: Vec<f64>,
}

/// Trains one category classifier on labeled positives plus None-class
/// negatives sampled from the unlabeled pool.
pub fn train_category(
    labeled: &[(&TrainingInstance, RelationType)],
    unlabeled: &[&TrainingInstance],
    category: Category,
    config: &BootstrapConfig,
    pretrained: Option<&HashMap<String, Vec<f64>>>,
) -> Result<TrainOutcome, BootstrapError> {
    config.validate()?;
    if labeled.is_empty() {
        return Err(BootstrapError::EmptyLabeledSet(category));
    }
    for (_, r) in labeled {
        if r.category() != category {
            return Err(BootstrapError::BadConfig(format!(
                "label {r} does not belong to category {category}"
            )));
        }
    }
    let mut rng = category_rng(config.seed, category);
    let vocab = Vocab::build(
        labeled
            .iter()
            .map(|(i, _)| *i)
            .chain(unlabeled.iter().copied()),
    );
    let mut model = ClassifierModel::new(category, vocab, config.dims(), pretrained, &mut rng)?;

    let mut examples: Vec<(EncodedInput, usize)> = labeled
        .iter()
        .map(|(inst, r)| {
            let target = model.type_index(*r).expect("type checked above");
            (model.encode(inst), target)
        })
        .collect();
    let n_negative = (config.negative_ratio * labeled.len() as f64).round() as usize;
    if !unlabeled.is_empty() {
        let none = model.none_index();
        for _ in 0..n_negative {
            let pick = unlabeled[rng.gen_range(0..unlabeled.len())];
            examples.push((model.encode(pick), none));
        }
    }

    let mut adam = Adam::new(config.learning_rate);
    let mut epoch_losses = Vec::with_capacity(config.epochs);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut total_loss = 0.0;
        for batch in order.chunks(config.batch_size) {
            let mut grads = Gradients::zeros_like(&model.tensor_shapes());
            for &idx in batch {
                let (input, target) = &examples[idx];
                let (loss, g) =
                    model.loss_and_grads(input, *target, config.dropout, Some(&mut rng));
                grads.add_assign(&g);
                total_loss += loss;
            }
            grads.scale(1.0 / batch.len() as f64);
            adam.step(
                model.tensors_mut().into_iter().map(|(n, t)| (n, t)),
                &grads,
            );
        }
        epoch_losses.push(total_loss / examples.len() as f64);
    }
    Ok(TrainOutcome {
        model,
        epoch_losses,
    })
}

fn category_rng(seed: u64, category: Category) -> ChaCha8Rng {
    let offset = Category::TRAINABLE
        .iter()
        .position(|c| *c == category)
        .unwrap_or(4) as u64;
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(1 + offset * 0x9e37_79b9))
}

/// One bootstrapping iteration's bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTelemetry {
    pub iter: u32,
    pub tau: f64,
    /// Cumulative (instance, type) labels, seeds included.
    pub labeled: usize,
    pub per_type: BTreeMap<String, usize>,
}

/// Final labeled instances, per-iteration telemetry, and the classifiers
/// from the last iteration.
pub struct BootstrapOutcome {
    pub instances: Vec<TrainingInstance>,
    pub telemetry: Vec<IterationTelemetry>,
    pub models: BTreeMap<Category, ClassifierModel>,
}

/// Identity of an instance inside one corpus.
fn instance_id(inst: &TrainingInstance) -> (String, String, String) {
    (
        inst.e1_key.clone(),
        inst.e2_key.clone(),
        inst.sentence_id.clone(),
    )
}

/// Runs the full bootstrapping loop: seed labels in, K iterations of
/// train → score → self-label, labels only ever added.
pub fn bootstrap(
    all_instances: &[TrainingInstance],
    seeds: &[TrainingInstance],
    config: &BootstrapConfig,
) -> Result<BootstrapOutcome, BootstrapError> {
    bootstrap_with_embeddings(all_instances, seeds, config, None)
}

/// [`bootstrap`] with optional pretrained embedding vectors.
pub fn bootstrap_with_embeddings(
    all_instances: &[TrainingInstance],
    seeds: &[TrainingInstance],
    config: &BootstrapConfig,
    pretrained: Option<&HashMap<String, Vec<f64>>>,
) -> Result<BootstrapOutcome, BootstrapError> {
    config.validate()?;
    if seeds.iter().all(|s| s.labels.is_empty()) {
        return Err(BootstrapError::NoSeeds);
    }

    // Merge the pool with the seed set, deduplicating by identity.
    let mut pool: Vec<TrainingInstance> = Vec::new();
    let mut by_id: HashMap<(String, String, String), usize> = HashMap::new();
    for inst in all_instances.iter().chain(seeds.iter()) {
        match by_id.entry(instance_id(inst)) {
            std::collections::hash_map::Entry::Occupied(slot) => {
                let existing = &mut pool[*slot.get()];
                existing.labels.extend(inst.labels.iter().copied());
            }
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(pool.len());
                pool.push(inst.clone());
            }
        }
    }

    // labels[c][i]: the type assigned to instance i for trainable category c.
    let mut labels: Vec<Vec<Option<RelationType>>> =
        vec![vec![None; pool.len()]; Category::TRAINABLE.len()];
    for (i, inst) in pool.iter().enumerate() {
        for r in &inst.labels {
            if let Some(c) = Category::TRAINABLE.iter().position(|c| *c == r.category()) {
                // first (BTreeSet-ordered) type wins within a category
                labels[c][i].get_or_insert(*r);
            }
        }
    }

    let mut telemetry = Vec::with_capacity(config.iterations as usize);
    let mut final_models: BTreeMap<Category, ClassifierModel> = BTreeMap::new();
    for k in 1..=config.iterations {
        let tau = anneal_threshold(config.tau0, k, config.iterations)?;

        // The four classifiers are independent; train and score in parallel.
        let results: Vec<(usize, Option<(ClassifierModel, Vec<(usize, RelationType)>)>)> =
            Category::TRAINABLE
                .par_iter()
                .enumerate()
                .map(|(ci, &category)| {
                    let labeled: Vec<(&TrainingInstance, RelationType)> = pool
                        .iter()
                        .enumerate()
                        .filter_map(|(i, inst)| labels[ci][i].map(|r| (inst, r)))
                        .collect();
                    if labeled.is_empty() {
                        return Ok((ci, None));
                    }
                    let unlabeled: Vec<&TrainingInstance> = pool
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| labels[ci][*i].is_none())
                        .map(|(_, inst)| inst)
                        .collect();
                    let outcome =
                        train_category(&labeled, &unlabeled, category, config, pretrained)?;
                    let mut additions = Vec::new();
                    for (i, inst) in pool.iter().enumerate() {
                        if labels[ci][i].is_some() {
                            continue;
                        }
                        let scores = outcome.model.score_instance(inst);
                        if let Some((best, p)) = scores
                            .per_type
                            .iter()
                            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                        {
                            if *p > tau {
                                additions.push((i, *best));
                            }
                        }
                    }
                    Ok((ci, Some((outcome.model, additions))))
                })
                .collect::<Result<_, BootstrapError>>()?;

        // Serialized merge of the iteration's additions.
        for (ci, result) in results {
            if let Some((model, additions)) = result {
                for (i, r) in additions {
                    labels[ci][i] = Some(r);
                }
                final_models.insert(Category::TRAINABLE[ci], model);
            }
        }

        let mut per_type: BTreeMap<String, usize> = BTreeMap::new();
        for row in &labels {
            for r in row.iter().flatten() {
                *per_type.entry(r.name().to_string()).or_insert(0) += 1;
            }
        }
        telemetry.push(IterationTelemetry {
            iter: k,
            tau,
            labeled: per_type.values().sum(),
            per_type,
        });
    }

    // Fold the per-category assignments back into the instances.
    let mut instances = pool;
    for (ci, row) in labels.iter().enumerate() {
        let _ = ci;
        for (i, r) in row.iter().enumerate() {
            if let Some(r) = r {
                instances[i].labels.insert(*r);
            }
        }
    }
    Ok(BootstrapOutcome {
        instances,
        telemetry,
        models: final_models,
    })
}
