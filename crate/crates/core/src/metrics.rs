//! The five group-fairness metrics, at dataset and model level.
//!
//! Sign convention throughout: unprivileged minus privileged, so a negative
//! difference (or a disparate-impact ratio below 1) reads as bias against
//! the unprivileged group. Dataset-level metrics take the true labels as
//! the outcome; model-level metrics take predictions, with the confusion
//! metrics comparing predictions against truth. All rates are weighted.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, DatasetError, Group, ProtectedAttribute};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("predictions length {predictions} does not match dataset rows {rows}")]
    LengthMismatch { predictions: usize, rows: usize },
    #[error("{rate} undefined for the {group} group")]
    UndefinedRate { group: Group, rate: &'static str },
    #[error("{group} group of '{column}' has zero total weight")]
    ZeroWeightGroup { column: String, group: Group },
}

/// Identifier of one of the five supported metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricId {
    #[serde(rename = "SPD")]
    StatisticalParityDifference,
    #[serde(rename = "DI")]
    DisparateImpact,
    #[serde(rename = "EOD")]
    EqualOpportunityDifference,
    #[serde(rename = "EMOD")]
    EqualMisopportunityDifference,
    #[serde(rename = "AOD")]
    AverageOddsDifference,
}

impl MetricId {
    pub const ALL: [MetricId; 5] = [
        MetricId::StatisticalParityDifference,
        MetricId::DisparateImpact,
        MetricId::EqualOpportunityDifference,
        MetricId::EqualMisopportunityDifference,
        MetricId::AverageOddsDifference,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            MetricId::StatisticalParityDifference => "SPD",
            MetricId::DisparateImpact => "DI",
            MetricId::EqualOpportunityDifference => "EOD",
            MetricId::EqualMisopportunityDifference => "EMOD",
            MetricId::AverageOddsDifference => "AOD",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MetricId::StatisticalParityDifference => "statistical parity difference",
            MetricId::DisparateImpact => "disparate impact",
            MetricId::EqualOpportunityDifference => "equal opportunity difference",
            MetricId::EqualMisopportunityDifference => "equal mis-opportunity difference",
            MetricId::AverageOddsDifference => "average odds difference",
        }
    }

    /// True for the metrics that need predictions and truth, not just an
    /// outcome column.
    pub fn needs_confusion(&self) -> bool {
        matches!(
            self,
            MetricId::EqualOpportunityDifference
                | MetricId::EqualMisopportunityDifference
                | MetricId::AverageOddsDifference
        )
    }

    /// The value this metric takes on a perfectly fair system.
    pub fn ideal(&self) -> f64 {
        match self {
            MetricId::DisparateImpact => 1.0,
            _ => 0.0,
        }
    }
}

impl core::fmt::Display for MetricId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.code())
    }
}

/// Whether a metric was computed from true labels or from predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricLevel {
    Dataset,
    Model,
}

/// One computed metric. `value: None` is the undefined sentinel; it is
/// carried through reports and serialization explicitly (JSON `null`),
/// never dropped or coerced to a number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub id: MetricId,
    pub value: Option<f64>,
    pub level: MetricLevel,
}

/// Rows left out of a metric computation. A missing protected-attribute
/// value hides the row's group, so those land in `unknown_group`;
/// the per-group fields count excluded rows whose group was known.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupExclusions {
    pub privileged: usize,
    pub unprivileged: usize,
    pub unknown_group: usize,
}

/// Weighted favorable-outcome rates per group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRates {
    pub privileged: f64,
    pub unprivileged: f64,
    pub level: MetricLevel,
    pub exclusions: GroupExclusions,
}

/// Outcome column to evaluate: the dataset's labels, or an aligned
/// prediction vector.
#[derive(Debug, Clone, Copy)]
pub enum Outcome<'a> {
    Labels,
    Predictions(&'a [bool]),
}

impl Outcome<'_> {
    pub fn level(&self) -> MetricLevel {
        match self {
            Outcome::Labels => MetricLevel::Dataset,
            Outcome::Predictions(_) => MetricLevel::Model,
        }
    }
}

/// Weighted favorable rate of each group under the chosen outcome.
pub fn base_rates(
    dataset: &Dataset,
    attr: &ProtectedAttribute,
    outcome: Outcome<'_>,
) -> Result<GroupRates, MetricError> {
    let outcomes: &[bool] = match outcome {
        Outcome::Labels => dataset.labels(),
        Outcome::Predictions(p) => {
            if p.len() != dataset.len() {
                return Err(MetricError::LengthMismatch {
                    predictions: p.len(),
                    rows: dataset.len(),
                });
            }
            p
        }
    };
    let groups = dataset.groups(attr)?;
    let mut favorable = [0.0f64; 2];
    let mut total = [0.0f64; 2];
    let mut count = [0usize; 2];
    let mut exclusions = GroupExclusions::default();
    for (i, group) in groups.iter().enumerate() {
        match group {
            None => exclusions.unknown_group += 1,
            Some(g) => {
                let k = *g as usize;
                count[k] += 1;
                total[k] += dataset.weights()[i];
                if outcomes[i] {
                    favorable[k] += dataset.weights()[i];
                }
            }
        }
    }
    for group in [Group::Privileged, Group::Unprivileged] {
        let k = group as usize;
        if count[k] == 0 {
            return Err(DatasetError::EmptyGroup {
                column: attr.column().to_string(),
                group,
            }
            .into());
        }
        if total[k] <= 0.0 {
            return Err(MetricError::ZeroWeightGroup {
                column: attr.column().to_string(),
                group,
            });
        }
    }
    Ok(GroupRates {
        privileged: favorable[Group::Privileged as usize] / total[Group::Privileged as usize],
        unprivileged: favorable[Group::Unprivileged as usize]
            / total[Group::Unprivileged as usize],
        level: outcome.level(),
        exclusions,
    })
}

/// SPD = unprivileged rate − privileged rate; ideal 0.
pub fn statistical_parity_difference(rates: &GroupRates) -> MetricValue {
    MetricValue {
        id: MetricId::StatisticalParityDifference,
        value: Some(rates.unprivileged - rates.privileged),
        level: rates.level,
    }
}

/// DI = unprivileged rate / privileged rate; ideal 1.
///
/// A 0/0 ratio is taken as 1 (no favorable outcomes anywhere is not
/// discrimination); a positive rate over a zero privileged rate is the
/// undefined sentinel, which the rating layer treats as maximal deviation.
pub fn disparate_impact(rates: &GroupRates) -> MetricValue {
    let value = if rates.privileged == 0.0 {
        if rates.unprivileged == 0.0 {
            Some(1.0)
        } else {
            None
        }
    } else {
        Some(rates.unprivileged / rates.privileged)
    };
    MetricValue {
        id: MetricId::DisparateImpact,
        value,
        level: rates.level,
    }
}

/// Weighted confusion counts for one group.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfusionCell {
    pub true_positive: f64,
    pub false_positive: f64,
    pub true_negative: f64,
    pub false_negative: f64,
}

impl ConfusionCell {
    pub fn tpr(&self) -> Option<f64> {
        let positives = self.true_positive + self.false_negative;
        (positives > 0.0).then(|| self.true_positive / positives)
    }

    pub fn fpr(&self) -> Option<f64> {
        let negatives = self.false_positive + self.true_negative;
        (negatives > 0.0).then(|| self.false_positive / negatives)
    }
}

/// Per-group weighted confusion matrices for (truth, prediction) pairs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GroupConfusion {
    pub privileged: ConfusionCell,
    pub unprivileged: ConfusionCell,
    pub exclusions: GroupExclusions,
}

impl GroupConfusion {
    pub fn cell(&self, group: Group) -> &ConfusionCell {
        match group {
            Group::Privileged => &self.privileged,
            Group::Unprivileged => &self.unprivileged,
        }
    }

    fn tpr_pair(&self) -> Result<(f64, f64), MetricError> {
        let p = self.privileged.tpr().ok_or(MetricError::UndefinedRate {
            group: Group::Privileged,
            rate: "TPR",
        })?;
        let u = self.unprivileged.tpr().ok_or(MetricError::UndefinedRate {
            group: Group::Unprivileged,
            rate: "TPR",
        })?;
        Ok((p, u))
    }

    fn fpr_pair(&self) -> Result<(f64, f64), MetricError> {
        let p = self.privileged.fpr().ok_or(MetricError::UndefinedRate {
            group: Group::Privileged,
            rate: "FPR",
        })?;
        let u = self.unprivileged.fpr().ok_or(MetricError::UndefinedRate {
            group: Group::Unprivileged,
            rate: "FPR",
        })?;
        Ok((p, u))
    }
}

/// Weighted per-group confusion counts of `predictions` against `truth`.
pub fn confusion_by_group(
    truth: &[bool],
    predictions: &[bool],
    dataset: &Dataset,
    attr: &ProtectedAttribute,
) -> Result<GroupConfusion, MetricError> {
    if truth.len() != dataset.len() || predictions.len() != dataset.len() {
        return Err(MetricError::LengthMismatch {
            predictions: truth.len().min(predictions.len()),
            rows: dataset.len(),
        });
    }
    let groups = dataset.groups(attr)?;
    let mut conf = GroupConfusion::default();
    for (i, group) in groups.iter().enumerate() {
        let Some(g) = group else {
            conf.exclusions.unknown_group += 1;
            continue;
        };
        let cell = match g {
            Group::Privileged => &mut conf.privileged,
            Group::Unprivileged => &mut conf.unprivileged,
        };
        let w = dataset.weights()[i];
        match (truth[i], predictions[i]) {
            (true, true) => cell.true_positive += w,
            (true, false) => cell.false_negative += w,
            (false, true) => cell.false_positive += w,
            (false, false) => cell.true_negative += w,
        }
    }
    Ok(conf)
}

/// EOD = TPR_unprivileged − TPR_privileged; ideal 0.
pub fn equal_opportunity_difference(conf: &GroupConfusion) -> Result<MetricValue, MetricError> {
    let (p, u) = conf.tpr_pair()?;
    Ok(MetricValue {
        id: MetricId::EqualOpportunityDifference,
        value: Some(u - p),
        level: MetricLevel::Model,
    })
}

/// EMOD = FPR_unprivileged − FPR_privileged; ideal 0.
pub fn equal_misopportunity_difference(
    conf: &GroupConfusion,
) -> Result<MetricValue, MetricError> {
    let (p, u) = conf.fpr_pair()?;
    Ok(MetricValue {
        id: MetricId::EqualMisopportunityDifference,
        value: Some(u - p),
        level: MetricLevel::Model,
    })
}

/// AOD = (EOD + EMOD) / 2; ideal 0.
pub fn average_odds_difference(conf: &GroupConfusion) -> Result<MetricValue, MetricError> {
    let (tp, tu) = conf.tpr_pair()?;
    let (fp, fu) = conf.fpr_pair()?;
    Ok(MetricValue {
        id: MetricId::AverageOddsDifference,
        value: Some(((tu - tp) + (fu - fp)) / 2.0),
        level: MetricLevel::Model,
    })
}

/// Metric values for one protected attribute, with anything that stopped a
/// value from being computed reported in-band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeMetrics {
    pub attribute: String,
    pub values: Vec<MetricValue>,
    pub exclusions: GroupExclusions,
    /// Set when the whole attribute could not be evaluated (e.g. an empty
    /// group); `values` is then empty.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Per-metric notes, e.g. why a value is the undefined sentinel.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Output of [`evaluate_all`]: one entry per protected attribute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub level: MetricLevel,
    pub entries: Vec<AttributeMetrics>,
}

impl MetricReport {
    pub fn entry(&self, attribute: &str) -> Option<&AttributeMetrics> {
        self.entries.iter().find(|e| e.attribute == attribute)
    }

    pub fn value(&self, attribute: &str, id: MetricId) -> Option<f64> {
        self.entry(attribute)?
            .values
            .iter()
            .find(|v| v.id == id)?
            .value
    }
}

/// Evaluate the selected metrics for every protected attribute.
///
/// Attribute-level failures become in-band error entries instead of
/// aborting the report. A confusion metric requested without predictions
/// is carried as an undefined sentinel with a note. Attributes are
/// independent, so evaluation order cannot change the result.
pub fn evaluate_all(
    dataset: &Dataset,
    attrs: &[ProtectedAttribute],
    outcome: Outcome<'_>,
    selection: &[MetricId],
) -> MetricReport {
    let level = outcome.level();
    let entries = attrs
        .iter()
        .map(|attr| evaluate_attribute(dataset, attr, outcome, selection))
        .collect();
    MetricReport { level, entries }
}

fn evaluate_attribute(
    dataset: &Dataset,
    attr: &ProtectedAttribute,
    outcome: Outcome<'_>,
    selection: &[MetricId],
) -> AttributeMetrics {
    let level = outcome.level();
    let rates = match base_rates(dataset, attr, outcome) {
        Ok(r) => r,
        Err(e) => {
            return AttributeMetrics {
                attribute: attr.column().to_string(),
                values: Vec::new(),
                exclusions: GroupExclusions::default(),
                error: Some(e.to_string()),
                notes: Vec::new(),
            }
        }
    };
    let confusion = match outcome {
        Outcome::Predictions(p) if selection.iter().any(MetricId::needs_confusion) => {
            match confusion_by_group(dataset.labels(), p, dataset, attr) {
                Ok(c) => Some(c),
                Err(e) => {
                    return AttributeMetrics {
                        attribute: attr.column().to_string(),
                        values: Vec::new(),
                        exclusions: rates.exclusions,
                        error: Some(e.to_string()),
                        notes: Vec::new(),
                    }
                }
            }
        }
        _ => None,
    };

    let mut values = Vec::with_capacity(selection.len());
    let mut notes = Vec::new();
    for id in selection {
        let value = match id {
            MetricId::StatisticalParityDifference => statistical_parity_difference(&rates),
            MetricId::DisparateImpact => disparate_impact(&rates),
            confusion_id => match &confusion {
                None => {
                    notes.push(alloc::format!("{confusion_id} requires predictions"));
                    MetricValue {
                        id: *confusion_id,
                        value: None,
                        level,
                    }
                }
                Some(conf) => {
                    let computed = match confusion_id {
                        MetricId::EqualOpportunityDifference => equal_opportunity_difference(conf),
                        MetricId::EqualMisopportunityDifference => {
                            equal_misopportunity_difference(conf)
                        }
                        _ => average_odds_difference(conf),
                    };
                    match computed {
                        Ok(v) => v,
                        Err(e) => {
                            notes.push(alloc::format!("{confusion_id}: {e}"));
                            MetricValue {
                                id: *confusion_id,
                                value: None,
                                level,
                            }
                        }
                    }
                }
            },
        };
        values.push(value);
    }
    AttributeMetrics {
        attribute: attr.column().to_string(),
        values,
        exclusions: rates.exclusions,
        error: None,
        notes,
    }
}
