//! Bias Index and Fairness Score: a single certification rating derived
//! from per-metric deviations.
//!
//! Each metric value is mapped to a deviation in [0, 1] measuring its
//! distance from the ideal (0 for the difference metrics, 1 for disparate
//! impact). An attribute's bias index is the mean deviation over the
//! metrics selected for rating; the overall Bias Index is the worst
//! attribute, and the Fairness Score is exactly `1 − B`. Certification
//! passes when `B` stays within the audit's bias tolerance.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::metrics::{MetricId, MetricValue};

/// Default bias tolerance: the four-fifths disparate-impact convention
/// mapped through the deviation function (DI 0.8 → deviation 0.2).
pub const DEFAULT_TOLERANCE: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RatingError {
    #[error("no metric values to rate for attribute '{0}'")]
    EmptyMetricSet(String),
    #[error("no attribute ratings to aggregate")]
    EmptyAttributeSet,
}

/// One metric's distance from its ideal, in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub metric: MetricId,
    /// The raw metric value; `None` is the undefined sentinel.
    pub raw: Option<f64>,
    pub deviation: f64,
}

/// Deviation of a single metric value.
///
/// Difference metrics: `min(|value|, 1)`. Disparate impact:
/// `1 − min(DI, 1/DI)`, which treats ratios above and below 1
/// symmetrically. Undefined values (and DI = 0) rate as maximal
/// deviation 1.
pub fn deviation(value: &MetricValue) -> Deviation {
    let d = match (value.id, value.value) {
        (_, None) => 1.0,
        (MetricId::DisparateImpact, Some(di)) => {
            if di <= 0.0 {
                1.0
            } else {
                let closeness = if di < 1.0 / di { di } else { 1.0 / di };
                1.0 - closeness
            }
        }
        (_, Some(v)) => {
            let a = if v < 0.0 { -v } else { v };
            if a > 1.0 {
                1.0
            } else {
                a
            }
        }
    };
    Deviation {
        metric: value.id,
        raw: value.value,
        deviation: d,
    }
}

/// Rating of a single protected attribute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeRating {
    pub attribute: String,
    pub bias_index: f64,
    pub deviations: Vec<Deviation>,
}

/// Mean deviation over the metrics selected for one attribute, clamped to
/// [0, 1].
pub fn bias_index(
    attribute: impl Into<String>,
    values: &[MetricValue],
) -> Result<AttributeRating, RatingError> {
    let attribute = attribute.into();
    if values.is_empty() {
        return Err(RatingError::EmptyMetricSet(attribute));
    }
    let deviations: Vec<Deviation> = values.iter().map(deviation).collect();
    let mean = deviations.iter().map(|d| d.deviation).sum::<f64>() / deviations.len() as f64;
    Ok(AttributeRating {
        attribute,
        bias_index: mean.clamp(0.0, 1.0),
        deviations,
    })
}

/// Overall rating: worst per-attribute bias index and its complement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingResult {
    pub attributes: Vec<AttributeRating>,
    /// Maximum per-attribute bias index.
    pub bias_index: f64,
    /// Exactly `1 − bias_index`.
    pub fairness_score: f64,
}

impl RatingResult {
    /// Certification verdict for a bias tolerance.
    pub fn certified(&self, tolerance: f64) -> bool {
        self.bias_index <= tolerance
    }
}

/// Aggregate per-attribute ratings into the overall Bias Index `B` (the
/// worst attribute) and Fairness Score `F = 1 − B`.
pub fn fairness_score(attributes: Vec<AttributeRating>) -> Result<RatingResult, RatingError> {
    if attributes.is_empty() {
        return Err(RatingError::EmptyAttributeSet);
    }
    let bias = attributes
        .iter()
        .map(|a| a.bias_index)
        .fold(0.0f64, f64::max)
        .clamp(0.0, 1.0);
    Ok(RatingResult {
        attributes,
        bias_index: bias,
        fairness_score: 1.0 - bias,
    })
}
