//! Deterministic reference classifier: seeded dataset splitting, weighted
//! logistic regression trained by full-batch gradient descent, prediction,
//! and performance reporting.
//!
//! Full-batch descent keeps audits reproducible: there is no batching
//! nondeterminism, coefficients start at zero, and gradients accumulate
//! over rows in index order, so identical `(data, config, seed)` yields
//! identical models up to floating-point associativity of that fixed
//! order.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{ColumnKind, Dataset, DatasetError, Group, ProtectedAttribute, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("split ratios must be non-negative, sum to 1, and give training a positive share")]
    BadSplitSpec,
    #[error("the {0} part received no rows; use a larger dataset or different ratios")]
    EmptyPart(&'static str),
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("loss became non-finite at iteration {0}; lower the learning rate")]
    Diverged(usize),
    #[error("{0} must be positive and finite")]
    BadHyperparameter(&'static str),
    #[error("dataset is missing column '{0}' required by the model encoding")]
    EncodingMismatch(String),
    #[error("labels, predictions, and weights must have equal length")]
    LengthMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitStrategy {
    Random,
    /// Preserve each (group, label) cell's proportions in every part.
    StratifiedByGroupAndLabel,
}

/// How to partition a dataset into train / test / validation parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train: f64,
    pub test: f64,
    pub validation: f64,
    pub strategy: SplitStrategy,
    pub seed: u64,
}

impl SplitSpec {
    pub fn validate(&self) -> Result<(), ModelError> {
        let ratios = [self.train, self.test, self.validation];
        if ratios.iter().any(|r| !r.is_finite() || *r < 0.0) || self.train <= 0.0 {
            return Err(ModelError::BadSplitSpec);
        }
        if ((self.train + self.test + self.validation) - 1.0).abs() > 1e-9 {
            return Err(ModelError::BadSplitSpec);
        }
        Ok(())
    }
}

/// Largest-remainder apportionment of `total` rows over three ratios;
/// sizes always sum to `total`, ties broken by part order.
fn apportion(total: usize, ratios: [f64; 3]) -> [usize; 3] {
    let ideals: Vec<f64> = ratios.iter().map(|r| r * total as f64).collect();
    let mut sizes = [0usize; 3];
    let mut remainders: Vec<(usize, f64)> = Vec::with_capacity(3);
    let mut assigned = 0usize;
    for i in 0..3 {
        let floor = ideals[i] as usize;
        sizes[i] = floor;
        assigned += floor;
        remainders.push((i, ideals[i] - floor as f64));
    }
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    for (i, _) in remainders.into_iter().take(total - assigned) {
        sizes[i] += 1;
    }
    sizes
}

/// Disjoint, covering parts of one dataset. A part with ratio zero is
/// absent rather than an empty dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitParts {
    pub train: Dataset,
    pub test: Option<Dataset>,
    pub validation: Option<Dataset>,
}

/// Partition a dataset into disjoint, covering train / test / validation
/// parts; deterministic given the spec's seed. Rows keep their original
/// relative order within each part.
pub fn split(
    dataset: &Dataset,
    spec: &SplitSpec,
    attr: &ProtectedAttribute,
) -> Result<SplitParts, ModelError> {
    spec.validate()?;
    let mut parts: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let ratios = [spec.train, spec.test, spec.validation];

    match spec.strategy {
        SplitStrategy::Random => {
            let mut indices: Vec<usize> = (0..dataset.len()).collect();
            indices.shuffle(&mut rng);
            deal(&indices, ratios, &mut parts);
        }
        SplitStrategy::StratifiedByGroupAndLabel => {
            // strata keyed by (group, label); missing-attribute rows form
            // their own stratum per label
            let groups = dataset.groups(attr)?;
            let mut strata: alloc::collections::BTreeMap<(u8, bool), Vec<usize>> =
                alloc::collections::BTreeMap::new();
            for (i, group) in groups.iter().enumerate() {
                let g = match group {
                    Some(Group::Privileged) => 0u8,
                    Some(Group::Unprivileged) => 1,
                    None => 2,
                };
                strata.entry((g, dataset.labels()[i])).or_default().push(i);
            }
            for indices in strata.values() {
                let mut shuffled = indices.clone();
                shuffled.shuffle(&mut rng);
                deal(&shuffled, ratios, &mut parts);
            }
        }
    }

    for (part, name, ratio) in [
        (&parts[0], "train", spec.train),
        (&parts[1], "test", spec.test),
        (&parts[2], "validation", spec.validation),
    ] {
        if ratio > 0.0 && part.is_empty() {
            return Err(ModelError::EmptyPart(name));
        }
    }

    let mut sorted = parts;
    for part in &mut sorted {
        part.sort_unstable();
    }
    let take = |indices: &[usize]| -> Result<Option<Dataset>, ModelError> {
        if indices.is_empty() {
            Ok(None)
        } else {
            Ok(Some(dataset.subset(indices)?))
        }
    };
    Ok(SplitParts {
        train: dataset.subset(&sorted[0])?,
        test: take(&sorted[1])?,
        validation: take(&sorted[2])?,
    })
}

fn deal(shuffled: &[usize], ratios: [f64; 3], parts: &mut [Vec<usize>; 3]) {
    let sizes = apportion(shuffled.len(), ratios);
    let mut offset = 0;
    for (p, size) in sizes.iter().enumerate() {
        parts[p].extend_from_slice(&shuffled[offset..offset + size]);
        offset += size;
    }
}

/// Hyper-parameters for the reference logistic regression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub learning_rate: f64,
    pub max_iterations: usize,
    /// Stop when the loss delta between iterations falls below this.
    pub tolerance: f64,
    pub l2_penalty: f64,
    /// Probability at or above which a row is classified favorable.
    pub classification_threshold: f64,
    /// Reserved for stochastic variants; coefficients start at zero, so
    /// training itself draws no randomness.
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            max_iterations: 5000,
            tolerance: 1e-8,
            l2_penalty: 1e-4,
            classification_threshold: 0.5,
            seed: 0,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(ModelError::BadHyperparameter("learning_rate"));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(ModelError::BadHyperparameter("tolerance"));
        }
        if !(self.l2_penalty.is_finite() && self.l2_penalty >= 0.0) {
            return Err(ModelError::BadHyperparameter("l2_penalty"));
        }
        if !(self.classification_threshold > 0.0 && self.classification_threshold < 1.0) {
            return Err(ModelError::BadHyperparameter("classification_threshold"));
        }
        if self.max_iterations == 0 {
            return Err(ModelError::BadHyperparameter("max_iterations"));
        }
        Ok(())
    }
}

/// How one feature column is turned into numbers, frozen from the
/// training split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "encoder", rename_all = "kebab-case")]
pub enum FeatureEncoder {
    /// One column per category except the first (sorted) baseline.
    /// Missing and unseen categories encode to all zeros.
    OneHot {
        column: String,
        categories: Vec<String>,
    },
    /// Min-max scaling from the training split; missing values encode to
    /// the 0.5 midpoint.
    MinMax { column: String, min: f64, max: f64 },
}

impl FeatureEncoder {
    fn width(&self) -> usize {
        match self {
            FeatureEncoder::OneHot { categories, .. } => categories.len().saturating_sub(1),
            FeatureEncoder::MinMax { .. } => 1,
        }
    }

    fn column(&self) -> &str {
        match self {
            FeatureEncoder::OneHot { column, .. } => column,
            FeatureEncoder::MinMax { column, .. } => column,
        }
    }
}

/// Frozen feature encoding for a trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingSpec {
    pub encoders: Vec<FeatureEncoder>,
}

impl EncodingSpec {
    /// Derive the encoding from a training dataset.
    pub fn fit(dataset: &Dataset) -> Self {
        let mut encoders = Vec::new();
        for (fi, col) in dataset.schema().feature_columns().enumerate() {
            match col.kind {
                ColumnKind::Categorical => {
                    let mut categories: Vec<String> = dataset
                        .rows()
                        .iter()
                        .filter_map(|r| r[fi].as_category().map(ToString::to_string))
                        .collect();
                    categories.sort_unstable();
                    categories.dedup();
                    encoders.push(FeatureEncoder::OneHot {
                        column: col.name.clone(),
                        categories,
                    });
                }
                ColumnKind::Numeric => {
                    let mut min = f64::INFINITY;
                    let mut max = f64::NEG_INFINITY;
                    for row in dataset.rows() {
                        if let Some(x) = row[fi].as_number() {
                            if x.is_finite() {
                                min = min.min(x);
                                max = max.max(x);
                            }
                        }
                    }
                    if !min.is_finite() || !max.is_finite() {
                        // all-missing numeric column scales to a constant
                        min = 0.0;
                        max = 0.0;
                    }
                    encoders.push(FeatureEncoder::MinMax {
                        column: col.name.clone(),
                        min,
                        max,
                    });
                }
                ColumnKind::BinaryLabel => unreachable!("feature_columns excludes the label"),
            }
        }
        Self { encoders }
    }

    pub fn width(&self) -> usize {
        self.encoders.iter().map(FeatureEncoder::width).sum()
    }

    /// Encode a whole dataset into a row-major matrix of `width()`
    /// columns per row.
    pub fn encode_matrix(&self, dataset: &Dataset) -> Result<Vec<f64>, ModelError> {
        let width = self.width();
        let indices = self.column_indices(dataset)?;
        let mut matrix = vec![0.0f64; dataset.len() * width];
        for (i, row) in dataset.rows().iter().enumerate() {
            self.encode_row(row, &indices, &mut matrix[i * width..(i + 1) * width]);
        }
        Ok(matrix)
    }

    /// Feature-column indices of each encoder in `dataset`, erroring on
    /// the first column the dataset does not carry.
    fn column_indices(&self, dataset: &Dataset) -> Result<Vec<usize>, ModelError> {
        self.encoders
            .iter()
            .map(|e| {
                dataset
                    .feature_index(e.column())
                    .map_err(|_| ModelError::EncodingMismatch(e.column().to_string()))
            })
            .collect()
    }

    /// Encode one row into `out`; returns how many categorical cells fell
    /// back to the all-zeros encoding (missing or unseen category).
    fn encode_row(&self, row: &[Value], indices: &[usize], out: &mut [f64]) -> usize {
        let mut cursor = 0;
        let mut fallbacks = 0;
        for (encoder, &fi) in self.encoders.iter().zip(indices) {
            match encoder {
                FeatureEncoder::OneHot { categories, .. } => {
                    let width = categories.len().saturating_sub(1);
                    let slot = &mut out[cursor..cursor + width];
                    slot.fill(0.0);
                    match row[fi].as_category() {
                        Some(cat) => match categories.binary_search_by(|c| c.as_str().cmp(cat)) {
                            Ok(0) => {} // baseline category: all zeros
                            Ok(pos) => slot[pos - 1] = 1.0,
                            Err(_) => fallbacks += 1,
                        },
                        None => fallbacks += 1,
                    }
                    cursor += width;
                }
                FeatureEncoder::MinMax { min, max, .. } => {
                    out[cursor] = match row[fi].as_number() {
                        Some(x) if x.is_finite() && max > min => (x - min) / (max - min),
                        Some(_) => 0.0,
                        None => 0.5,
                    };
                    cursor += 1;
                }
            }
        }
        fallbacks
    }
}

/// A trained logistic-regression model. `coefficients[0]` is the
/// (unpenalized) intercept; the rest align with the encoding's columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub coefficients: Vec<f64>,
    pub encoding: EncodingSpec,
    pub config: ModelConfig,
    pub loss_log: Vec<f64>,
    pub converged: bool,
}

impl TrainedModel {
    /// Iterations where the loss increased beyond the tolerance: a
    /// diagnostic for a too-large learning rate, not a hard failure.
    pub fn loss_increases(&self) -> usize {
        self.loss_log
            .windows(2)
            .filter(|w| w[1] > w[0] + self.config.tolerance)
            .count()
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-z))
}

/// Clamp probabilities into the open interval so log-loss stays finite
/// and predicted probabilities honor the (0, 1) contract.
fn clamp_probability(p: f64) -> f64 {
    p.clamp(1e-12, 1.0 - 1e-12)
}

/// The training objective at `beta`: weighted binary cross-entropy plus
/// an L2 term over the non-intercept coefficients, normalized by total
/// weight. Writes the analytic gradient into `gradient`
/// (`width + 1` slots, intercept first) and returns the loss. Gradients
/// accumulate over rows in index order, which fixes the summation order
/// training depends on.
#[allow(clippy::too_many_arguments)]
pub fn objective(
    matrix: &[f64],
    width: usize,
    labels: &[bool],
    weights: &[f64],
    total_weight: f64,
    l2: f64,
    beta: &[f64],
    gradient: &mut [f64],
) -> f64 {
    let n = labels.len();
    gradient.fill(0.0);
    let mut loss = 0.0;
    for i in 0..n {
        let x = &matrix[i * width..(i + 1) * width];
        let mut z = beta[0];
        for j in 0..width {
            z += beta[j + 1] * x[j];
        }
        let p = clamp_probability(sigmoid(z));
        let y = if labels[i] { 1.0 } else { 0.0 };
        let w = weights[i];
        loss -= w * (y * libm::log(p) + (1.0 - y) * libm::log(1.0 - p));
        let err = w * (p - y);
        gradient[0] += err;
        for j in 0..width {
            gradient[j + 1] += err * x[j];
        }
    }
    loss /= total_weight;
    for g in gradient.iter_mut() {
        *g /= total_weight;
    }
    for j in 1..=width {
        loss += 0.5 * l2 * beta[j] * beta[j];
        gradient[j] += l2 * beta[j];
    }
    loss
}

/// Train on a dataset, honoring instance weights.
pub fn train(dataset: &Dataset, config: &ModelConfig) -> Result<TrainedModel, ModelError> {
    config.validate()?;
    let has_pos = dataset.labels().iter().any(|l| *l);
    let has_neg = dataset.labels().iter().any(|l| !*l);
    if !has_pos || !has_neg {
        return Err(ModelError::SingleClass);
    }
    let total_weight = dataset.total_weight();
    if total_weight <= 0.0 {
        return Err(ModelError::BadHyperparameter("total weight"));
    }

    let encoding = EncodingSpec::fit(dataset);
    let width = encoding.width();
    let matrix = encoding.encode_matrix(dataset)?;

    let mut beta = vec![0.0f64; width + 1];
    let mut gradient = vec![0.0f64; width + 1];
    let mut loss_log = Vec::new();
    let mut previous = f64::INFINITY;
    let mut converged = false;
    for iteration in 0..config.max_iterations {
        let loss = objective(
            &matrix,
            width,
            dataset.labels(),
            dataset.weights(),
            total_weight,
            config.l2_penalty,
            &beta,
            &mut gradient,
        );
        if !loss.is_finite() {
            return Err(ModelError::Diverged(iteration));
        }
        loss_log.push(loss);
        if (previous - loss).abs() < config.tolerance {
            converged = true;
            break;
        }
        previous = loss;
        for (b, g) in beta.iter_mut().zip(gradient.iter()) {
            *b -= config.learning_rate * g;
        }
    }

    Ok(TrainedModel {
        coefficients: beta,
        encoding,
        config: *config,
        loss_log,
        converged,
    })
}

/// Per-row probabilities and thresholded labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predictions {
    pub probabilities: Vec<f64>,
    pub labels: Vec<bool>,
    /// Categorical cells that fell back to the all-zeros encoding because
    /// the category was missing or unseen at training time.
    pub encoding_fallbacks: usize,
}

/// Score a dataset with a trained model. Ties at the threshold classify
/// favorable.
pub fn predict(model: &TrainedModel, dataset: &Dataset) -> Result<Predictions, ModelError> {
    let width = model.encoding.width();
    let indices = model.encoding.column_indices(dataset)?;
    let mut probabilities = Vec::with_capacity(dataset.len());
    let mut labels = Vec::with_capacity(dataset.len());
    let mut fallbacks = 0usize;
    let mut encoded = vec![0.0f64; width];
    for row in dataset.rows() {
        fallbacks += model.encoding.encode_row(row, &indices, &mut encoded);
        let mut z = model.coefficients[0];
        for (coefficient, x) in model.coefficients[1..].iter().zip(&encoded) {
            z += coefficient * x;
        }
        let p = clamp_probability(sigmoid(z));
        probabilities.push(p);
        labels.push(p >= model.config.classification_threshold);
    }
    Ok(Predictions {
        probabilities,
        labels,
        encoding_fallbacks: fallbacks,
    })
}

/// Weighted accuracy, precision, recall, and F1.
///
/// Precision is the undefined sentinel when nothing was predicted
/// favorable; recall when nothing truly is. F1 is defined when both are,
/// taking 0 when they sum to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerfReport {
    pub accuracy: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

pub fn performance(
    truth: &[bool],
    predicted: &[bool],
    weights: &[f64],
) -> Result<PerfReport, ModelError> {
    if truth.len() != predicted.len() || truth.len() != weights.len() || truth.is_empty() {
        return Err(ModelError::LengthMismatch);
    }
    let mut tp = 0.0;
    let mut fp = 0.0;
    let mut tn = 0.0;
    let mut fn_ = 0.0;
    for i in 0..truth.len() {
        let w = weights[i];
        match (truth[i], predicted[i]) {
            (true, true) => tp += w,
            (false, true) => fp += w,
            (false, false) => tn += w,
            (true, false) => fn_ += w,
        }
    }
    let total = tp + fp + tn + fn_;
    let precision = (tp + fp > 0.0).then(|| tp / (tp + fp));
    let recall = (tp + fn_ > 0.0).then(|| tp / (tp + fn_));
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        (Some(_), Some(_)) => Some(0.0),
        _ => None,
    };
    Ok(PerfReport {
        accuracy: (tp + tn) / total,
        precision,
        recall,
        f1,
    })
}
