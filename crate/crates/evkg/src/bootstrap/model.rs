//! The per-category relation classifier: three bidirectional recurrent
//! encoders (first eventuality, second eventuality, sentence) feeding a
//! two-layer feed-forward network over the combined feature vector
//! `[h1 ‖ h2 ‖ h1−h2 ‖ h1∘h2 ‖ hs]`, with softmax scores over the
//! category's relation types plus a None class.

use super::nn::{init_embedding, init_matrix, softmax, Gradients};
use super::BootstrapError;
use crate::relation::{Category, RelationType};
use crate::seeds::TrainingInstance;
use ndarray::{Array1, Array2};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::path::Path;

pub const UNK_INDEX: usize = 0;

/// Word→index map with index 0 reserved for unknown words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    words: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocab {
    /// Builds a vocabulary from every sentence token of the given instances,
    /// in first-seen order.
    pub fn build<'a>(instances: impl Iterator<Item = &'a TrainingInstance>) -> Vocab {
        let mut words = vec!["<unk>".to_string()];
        let mut index = HashMap::from([("<unk>".to_string(), 0)]);
        for inst in instances {
            for form in &inst.sentence {
                if !index.contains_key(form) {
                    index.insert(form.clone(), words.len());
                    words.push(form.clone());
                }
            }
        }
        Vocab { words, index }
    }

    pub fn from_words(words: Vec<String>) -> Vocab {
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Vocab { words, index }
    }

    pub fn id(&self, word: &str) -> usize {
        self.index.get(word).copied().unwrap_or(UNK_INDEX)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDims {
    pub d_e: usize,
    pub d_h: usize,
    pub ffn_hidden: usize,
}

#[derive(Debug, Clone)]
struct RnnCell {
    w: Array2<f64>, // dh2 × d_e
    u: Array2<f64>, // dh2 × dh2
    b: Array2<f64>, // dh2 × 1
}

impl RnnCell {
    fn new<R: Rng>(d_e: usize, dh2: usize, rng: &mut R) -> Self {
        RnnCell {
            w: init_matrix(dh2, d_e, d_e, rng),
            u: init_matrix(dh2, dh2, dh2, rng),
            b: Array2::zeros((dh2, 1)),
        }
    }

    /// Runs the recurrence over embedded inputs, returning all hidden states.
    fn run(&self, xs: &[Array1<f64>]) -> Vec<Array1<f64>> {
        let dh2 = self.b.nrows();
        let mut h = Array1::zeros(dh2);
        let mut states = Vec::with_capacity(xs.len());
        for x in xs {
            let a = self.w.dot(x) + self.u.dot(&h) + &self.b.column(0);
            h = a.mapv(f64::tanh);
            states.push(h.clone());
        }
        states
    }
}

/// One bidirectional encoder producing a `d_h`-dimensional summary: the
/// concatenation of the two directions' final states.
#[derive(Debug, Clone)]
struct BiEncoder {
    fwd: RnnCell,
    bwd: RnnCell,
}

const ENCODER_NAMES: [&str; 3] = ["enc_e1", "enc_e2", "enc_sent"];

/// A trained (or training) classifier for one relation category.
#[derive(Debug, Clone)]
pub struct ClassifierModel {
    pub category: Category,
    /// Typed outputs; the None class is the extra final index.
    pub output_types: Vec<RelationType>,
    pub vocab: Vocab,
    pub dims: ModelDims,
    emb: Array2<f64>,
    encoders: Vec<BiEncoder>,
    w1: Array2<f64>,
    b1: Array2<f64>,
    w2: Array2<f64>,
    b2: Array2<f64>,
}

/// Token-index view of one training instance plus its target class.
#[derive(Debug, Clone)]
pub struct EncodedInput {
    pub e1: Vec<usize>,
    pub e2: Vec<usize>,
    pub sent: Vec<usize>,
}

/// Softmax scores over the category's types and the None class.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryScores {
    pub per_type: BTreeMap<RelationType, f64>,
    pub none: f64,
}

struct DirectionCache {
    xs: Vec<Array1<f64>>,
    hs: Vec<Array1<f64>>,
    tokens: Vec<usize>,
}

struct EncoderCache {
    fwd: DirectionCache,
    bwd: DirectionCache,
    summary: Array1<f64>,
}

struct ForwardCache {
    encoders: Vec<EncoderCache>,
    z: Array1<f64>,
    mask_z: Option<Array1<f64>>,
    u_pre: Array1<f64>,
    r: Array1<f64>,
    mask_r: Option<Array1<f64>>,
    probs: Vec<f64>,
}

impl ClassifierModel {
    pub fn new<R: Rng>(
        category: Category,
        vocab: Vocab,
        dims: ModelDims,
        pretrained: Option<&HashMap<String, Vec<f64>>>,
        rng: &mut R,
    ) -> Result<Self, BootstrapError> {
        if dims.d_e == 0 || dims.d_h == 0 || dims.ffn_hidden == 0 {
            return Err(BootstrapError::BadConfig(
                "model dimensions must be positive".to_string(),
            ));
        }
        if dims.d_h % 2 != 0 {
            return Err(BootstrapError::BadConfig(format!(
                "d_h must be even to split across directions, got {}",
                dims.d_h
            )));
        }
        let output_types: Vec<RelationType> = category.types().to_vec();
        let n_out = output_types.len() + 1;
        let dh2 = dims.d_h / 2;
        let mut emb = init_embedding(vocab.len(), dims.d_e, rng);
        if let Some(pre) = pretrained {
            for (i, word) in vocab.words().iter().enumerate() {
                if let Some(vec) = pre.get(word) {
                    if vec.len() == dims.d_e {
                        for (j, v) in vec.iter().enumerate() {
                            emb[(i, j)] = *v;
                        }
                    }
                }
            }
        }
        let encoders = (0..3)
            .map(|_| BiEncoder {
                fwd: RnnCell::new(dims.d_e, dh2, rng),
                bwd: RnnCell::new(dims.d_e, dh2, rng),
            })
            .collect();
        let feat = 5 * dims.d_h;
        Ok(ClassifierModel {
            category,
            output_types,
            vocab,
            dims,
            emb,
            encoders,
            w1: init_matrix(dims.ffn_hidden, feat, feat, rng),
            b1: Array2::zeros((dims.ffn_hidden, 1)),
            w2: init_matrix(n_out, dims.ffn_hidden, dims.ffn_hidden, rng),
            b2: Array2::zeros((n_out, 1)),
        })
    }

    pub fn none_index(&self) -> usize {
        self.output_types.len()
    }

    /// Index of a type in the output layer.
    pub fn type_index(&self, relation: RelationType) -> Option<usize> {
        self.output_types.iter().position(|r| *r == relation)
    }

    /// Maps an instance's word forms onto vocabulary indices; unknown words
    /// map to the reserved index, never an error.
    pub fn encode(&self, instance: &TrainingInstance) -> EncodedInput {
        EncodedInput {
            e1: instance.e1_forms().iter().map(|w| self.vocab.id(w)).collect(),
            e2: instance.e2_forms().iter().map(|w| self.vocab.id(w)).collect(),
            sent: instance.sentence.iter().map(|w| self.vocab.id(w)).collect(),
        }
    }

    fn run_direction(&self, cell: &RnnCell, tokens: &[usize]) -> DirectionCache {
        let xs: Vec<Array1<f64>> = tokens.iter().map(|&t| self.emb.row(t).to_owned()).collect();
        let hs = cell.run(&xs);
        DirectionCache {
            xs,
            hs,
            tokens: tokens.to_vec(),
        }
    }

    fn encode_sequence(&self, enc: &BiEncoder, tokens: &[usize]) -> EncoderCache {
        let dh2 = self.dims.d_h / 2;
        let fwd = self.run_direction(&enc.fwd, tokens);
        let rev: Vec<usize> = tokens.iter().rev().copied().collect();
        let bwd = self.run_direction(&enc.bwd, &rev);
        let mut summary = Array1::zeros(self.dims.d_h);
        if let Some(h) = fwd.hs.last() {
            summary.slice_mut(ndarray::s![..dh2]).assign(h);
        }
        if let Some(h) = bwd.hs.last() {
            summary.slice_mut(ndarray::s![dh2..]).assign(h);
        }
        EncoderCache { fwd, bwd, summary }
    }

    fn forward<R: Rng>(
        &self,
        input: &EncodedInput,
        dropout: f64,
        rng: Option<&mut R>,
    ) -> ForwardCache {
        let seqs = [&input.e1, &input.e2, &input.sent];
        let encoders: Vec<EncoderCache> = self
            .encoders
            .iter()
            .zip(seqs)
            .map(|(enc, toks)| self.encode_sequence(enc, toks))
            .collect();
        let d_h = self.dims.d_h;
        let (h1, h2, hs) = (
            &encoders[0].summary,
            &encoders[1].summary,
            &encoders[2].summary,
        );
        let mut z = Array1::zeros(5 * d_h);
        z.slice_mut(ndarray::s![..d_h]).assign(h1);
        z.slice_mut(ndarray::s![d_h..2 * d_h]).assign(h2);
        z.slice_mut(ndarray::s![2 * d_h..3 * d_h]).assign(&(h1 - h2));
        z.slice_mut(ndarray::s![3 * d_h..4 * d_h]).assign(&(h1 * h2));
        z.slice_mut(ndarray::s![4 * d_h..]).assign(hs);

        let mut mask_z = None;
        let mut mask_r = None;
        if dropout > 0.0 {
            if let Some(rng) = rng {
                let keep = 1.0 - dropout;
                let mz = Array1::from_shape_fn(z.len(), |_| {
                    if rng.gen::<f64>() < keep {
                        1.0 / keep
                    } else {
                        0.0
                    }
                });
                z *= &mz;
                mask_z = Some(mz);
                let mr = Array1::from_shape_fn(self.dims.ffn_hidden, |_| {
                    if rng.gen::<f64>() < keep {
                        1.0 / keep
                    } else {
                        0.0
                    }
                });
                mask_r = Some(mr);
            }
        }

        let u_pre = self.w1.dot(&z) + &self.b1.column(0);
        let mut r = u_pre.mapv(|v| v.max(0.0));
        if let Some(mr) = &mask_r {
            r *= mr;
        }
        let logits = self.w2.dot(&r) + &self.b2.column(0);
        let probs = softmax(logits.as_slice().unwrap());
        ForwardCache {
            encoders,
            z,
            mask_z,
            u_pre,
            r,
            mask_r,
            probs,
        }
    }

    /// Deterministic inference scores; dropout disabled.
    pub fn score(&self, input: &EncodedInput) -> CategoryScores {
        let cache = self.forward::<rand_chacha::ChaCha8Rng>(input, 0.0, None);
        let mut per_type = BTreeMap::new();
        for (i, r) in self.output_types.iter().enumerate() {
            per_type.insert(*r, cache.probs[i]);
        }
        CategoryScores {
            per_type,
            none: cache.probs[self.none_index()],
        }
    }

    /// Convenience wrapper scoring a raw instance.
    pub fn score_instance(&self, instance: &TrainingInstance) -> CategoryScores {
        self.score(&self.encode(instance))
    }

    /// Cross-entropy loss in eval mode (no dropout).
    pub fn loss(&self, input: &EncodedInput, target: usize) -> f64 {
        let cache = self.forward::<rand_chacha::ChaCha8Rng>(input, 0.0, None);
        -cache.probs[target].max(1e-300).ln()
    }

    /// Loss and analytic gradients for one example. Dropout masks are drawn
    /// from `rng` when training.
    pub fn loss_and_grads<R: Rng>(
        &self,
        input: &EncodedInput,
        target: usize,
        dropout: f64,
        rng: Option<&mut R>,
    ) -> (f64, Gradients) {
        let cache = self.forward(input, dropout, rng);
        let loss = -cache.probs[target].max(1e-300).ln();
        let mut grads = Gradients::zeros_like(&self.tensor_shapes());

        // output layer
        let n_out = self.output_types.len() + 1;
        let mut dlogits = Array1::from_vec(cache.probs.clone());
        dlogits[target] -= 1.0;
        accumulate_outer(grads.get_mut("w2"), &dlogits, &cache.r);
        add_column(grads.get_mut("b2"), &dlogits);
        let mut dr = self.w2.t().dot(&dlogits);
        debug_assert_eq!(dlogits.len(), n_out);

        // hidden layer
        if let Some(mr) = &cache.mask_r {
            dr *= mr;
        }
        let du = &dr * &cache.u_pre.mapv(|v| if v > 0.0 { 1.0 } else { 0.0 });
        accumulate_outer(grads.get_mut("w1"), &du, &cache.z);
        add_column(grads.get_mut("b1"), &du);
        let mut dz = self.w1.t().dot(&du);
        if let Some(mz) = &cache.mask_z {
            dz *= mz;
        }

        // feature split: [h1, h2, h1-h2, h1*h2, hs]
        let d_h = self.dims.d_h;
        let h1 = &cache.encoders[0].summary;
        let h2 = &cache.encoders[1].summary;
        let dz1 = dz.slice(ndarray::s![..d_h]);
        let dz2 = dz.slice(ndarray::s![d_h..2 * d_h]);
        let dz3 = dz.slice(ndarray::s![2 * d_h..3 * d_h]);
        let dz4 = dz.slice(ndarray::s![3 * d_h..4 * d_h]);
        let dz5 = dz.slice(ndarray::s![4 * d_h..]);
        let dh1 = &dz1.to_owned() + &dz3 + &(&dz4 * h2);
        let dh2v = &dz2.to_owned() - &dz3 + &(&dz4 * h1);
        let dhs = dz5.to_owned();

        for (e, dsum) in [dh1, dh2v, dhs].into_iter().enumerate() {
            self.backprop_encoder(e, &cache.encoders[e], &dsum, &mut grads);
        }
        (loss, grads)
    }

    fn backprop_encoder(
        &self,
        enc_idx: usize,
        cache: &EncoderCache,
        dsummary: &Array1<f64>,
        grads: &mut Gradients,
    ) {
        let dh2 = self.dims.d_h / 2;
        let name = ENCODER_NAMES[enc_idx];
        let enc = &self.encoders[enc_idx];
        let dfwd = dsummary.slice(ndarray::s![..dh2]).to_owned();
        let dbwd = dsummary.slice(ndarray::s![dh2..]).to_owned();
        self.backprop_direction(&enc.fwd, &format!("{name}.fwd"), &cache.fwd, dfwd, grads);
        self.backprop_direction(&enc.bwd, &format!("{name}.bwd"), &cache.bwd, dbwd, grads);
    }

    fn backprop_direction(
        &self,
        cell: &RnnCell,
        prefix: &str,
        cache: &DirectionCache,
        dfinal: Array1<f64>,
        grads: &mut Gradients,
    ) {
        let steps = cache.hs.len();
        if steps == 0 {
            return;
        }
        let dh2 = cell.b.nrows();
        let mut dw = Array2::zeros(cell.w.dim());
        let mut du_acc = Array2::zeros(cell.u.dim());
        let mut db = Array1::zeros(dh2);
        let mut dh = dfinal;
        {
            let demb = grads.get_mut("emb");
            for t in (0..steps).rev() {
                let h_t = &cache.hs[t];
                let da = &dh * &h_t.mapv(|v| 1.0 - v * v);
                accumulate_outer(&mut dw, &da, &cache.xs[t]);
                if t > 0 {
                    accumulate_outer(&mut du_acc, &da, &cache.hs[t - 1]);
                }
                db += &da;
                let dx = cell.w.t().dot(&da);
                let row = cache.tokens[t];
                for (j, v) in dx.iter().enumerate() {
                    demb[(row, j)] += v;
                }
                dh = cell.u.t().dot(&da);
            }
        }
        *grads.get_mut(&format!("{prefix}.w")) += &dw;
        *grads.get_mut(&format!("{prefix}.u")) += &du_acc;
        add_column(grads.get_mut(&format!("{prefix}.b")), &db);
    }

    /// Shapes of every parameter tensor, keyed by name.
    pub fn tensor_shapes(&self) -> Vec<(String, (usize, usize))> {
        self.tensors()
            .into_iter()
            .map(|(n, t)| (n, t.dim()))
            .collect()
    }

    /// Read access to every named parameter tensor.
    pub fn tensors(&self) -> Vec<(String, &Array2<f64>)> {
        let mut out: Vec<(String, &Array2<f64>)> = vec![("emb".to_string(), &self.emb)];
        for (enc, name) in self.encoders.iter().zip(ENCODER_NAMES) {
            out.push((format!("{name}.fwd.w"), &enc.fwd.w));
            out.push((format!("{name}.fwd.u"), &enc.fwd.u));
            out.push((format!("{name}.fwd.b"), &enc.fwd.b));
            out.push((format!("{name}.bwd.w"), &enc.bwd.w));
            out.push((format!("{name}.bwd.u"), &enc.bwd.u));
            out.push((format!("{name}.bwd.b"), &enc.bwd.b));
        }
        out.push(("w1".to_string(), &self.w1));
        out.push(("b1".to_string(), &self.b1));
        out.push(("w2".to_string(), &self.w2));
        out.push(("b2".to_string(), &self.b2));
        out
    }

    /// Mutable access to every named parameter tensor (optimizer updates and
    /// finite-difference probes).
    pub fn tensors_mut(&mut self) -> Vec<(String, &mut Array2<f64>)> {
        let mut out: Vec<(String, &mut Array2<f64>)> = vec![("emb".to_string(), &mut self.emb)];
        for (enc, name) in self.encoders.iter_mut().zip(ENCODER_NAMES) {
            out.push((format!("{name}.fwd.w"), &mut enc.fwd.w));
            out.push((format!("{name}.fwd.u"), &mut enc.fwd.u));
            out.push((format!("{name}.fwd.b"), &mut enc.fwd.b));
            out.push((format!("{name}.bwd.w"), &mut enc.bwd.w));
            out.push((format!("{name}.bwd.u"), &mut enc.bwd.u));
            out.push((format!("{name}.bwd.b"), &mut enc.bwd.b));
        }
        out.push(("w1".to_string(), &mut self.w1));
        out.push(("b1".to_string(), &mut self.b1));
        out.push(("w2".to_string(), &mut self.w2));
        out.push(("b2".to_string(), &mut self.b2));
        out
    }

    /// Pre-ReLU activations of the hidden layer in eval mode; used by the
    /// gradient check to keep finite differences away from the kink.
    pub fn hidden_preactivations(&self, input: &EncodedInput) -> Vec<f64> {
        let cache = self.forward::<rand_chacha::ChaCha8Rng>(input, 0.0, None);
        cache.u_pre.to_vec()
    }

    /// Writes a JSON checkpoint: vocabulary, output types, and every
    /// parameter tensor with its shape.
    pub fn save(&self, path: &Path) -> Result<(), BootstrapError> {
        let file = CheckpointFile {
            category: self.category,
            output_types: self.output_types.clone(),
            vocab: self.vocab.words().to_vec(),
            dims: self.dims,
            tensors: self
                .tensors()
                .into_iter()
                .map(|(name, t)| {
                    (
                        name,
                        TensorData {
                            shape: t.dim(),
                            data: t.iter().copied().collect(),
                        },
                    )
                })
                .collect(),
        };
        let f = std::fs::File::create(path)?;
        serde_json::to_writer(std::io::BufWriter::new(f), &file)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, BootstrapError> {
        let f = std::fs::File::open(path)?;
        let file: CheckpointFile = serde_json::from_reader(std::io::BufReader::new(f))?;
        let vocab = Vocab::from_words(file.vocab);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let mut model = ClassifierModel::new(file.category, vocab, file.dims, None, &mut rng)?;
        model.output_types = file.output_types;
        for (name, tensor) in model.tensors_mut() {
            let data = file
                .tensors
                .get(&name)
                .ok_or_else(|| BootstrapError::BadCheckpoint(format!("missing tensor `{name}`")))?;
            if data.shape != tensor.dim() {
                return Err(BootstrapError::BadCheckpoint(format!(
                    "tensor `{name}` has shape {:?}, expected {:?}",
                    data.shape,
                    tensor.dim()
                )));
            }
            *tensor = Array2::from_shape_vec(data.shape, data.data.clone())
                .map_err(|e| BootstrapError::BadCheckpoint(e.to_string()))?;
        }
        Ok(model)
    }
}

use rand::SeedableRng;

#[derive(Serialize, Deserialize)]
struct TensorData {
    shape: (usize, usize),
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CheckpointFile {
    category: Category,
    output_types: Vec<RelationType>,
    vocab: Vec<String>,
    dims: ModelDims,
    tensors: BTreeMap<String, TensorData>,
}

fn accumulate_outer(target: &mut Array2<f64>, a: &Array1<f64>, b: &Array1<f64>) {
    for (i, av) in a.iter().enumerate() {
        if *av == 0.0 {
            continue;
        }
        for (j, bv) in b.iter().enumerate() {
            target[(i, j)] += av * bv;
        }
    }
}

fn add_column(target: &mut Array2<f64>, a: &Array1<f64>) {
    for (i, v) in a.iter().enumerate() {
        target[(i, 0)] += v;
    }
}
