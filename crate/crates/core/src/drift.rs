//! Categorical drift between training and production data.
//!
//! Compares the class distribution of each protected attribute's column
//! across two datasets with total variation distance: half the L1 gap
//! between the distributions, bounded in [0, 1] and therefore directly
//! threshold-friendly. TVD 0 means identical distributions; 1 means
//! disjoint support.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::dataset::{ColumnKind, Dataset, DatasetError, ProtectedAttribute};

/// Default TVD above which an attribute is flagged as drifted.
pub const DEFAULT_DRIFT_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DriftError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("column '{0}' has no non-missing values to build a distribution from")]
    EmptyDistribution(String),
}

/// Unweighted class proportions of one categorical column, over its
/// non-missing values.
pub fn distribution(
    dataset: &Dataset,
    column: &str,
) -> Result<BTreeMap<String, f64>, DriftError> {
    let idx = dataset.feature_index(column)?;
    if dataset.schema().feature_kind(column) != Some(ColumnKind::Categorical) {
        return Err(DatasetError::NotCategorical(column.to_string()).into());
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut total = 0usize;
    for row in dataset.rows() {
        if let Some(cat) = row[idx].as_category() {
            *counts.entry(cat.to_string()).or_insert(0) += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(DriftError::EmptyDistribution(column.to_string()));
    }
    Ok(counts
        .into_iter()
        .map(|(k, v)| (k, v as f64 / total as f64))
        .collect())
}

/// Total variation distance between two categorical distributions, taken
/// over the union of their supports.
pub fn total_variation_distance(
    p: &BTreeMap<String, f64>,
    q: &BTreeMap<String, f64>,
) -> f64 {
    let keys: alloc::collections::BTreeSet<&String> = p.keys().chain(q.keys()).collect();
    let mut sum = 0.0;
    for key in keys {
        let a = p.get(key).copied().unwrap_or(0.0);
        let b = q.get(key).copied().unwrap_or(0.0);
        sum += if a > b { a - b } else { b - a };
    }
    sum / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeDrift {
    pub attribute: String,
    pub training: BTreeMap<String, f64>,
    pub production: BTreeMap<String, f64>,
    pub tvd: f64,
    pub flagged: bool,
}

/// Per-attribute drift between a training and a production dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub threshold: f64,
    pub attributes: Vec<AttributeDrift>,
}

impl DriftReport {
    pub fn any_flagged(&self) -> bool {
        self.attributes.iter().any(|a| a.flagged)
    }
}

/// Compare protected-class distributions between training and production
/// data, flagging attributes whose TVD exceeds the threshold.
pub fn drift_check(
    training: &Dataset,
    production: &Dataset,
    attrs: &[ProtectedAttribute],
    threshold: f64,
) -> Result<DriftReport, DriftError> {
    let attributes = attrs
        .iter()
        .map(|attr| {
            let train_dist = distribution(training, attr.column())?;
            let prod_dist = distribution(production, attr.column())?;
            let tvd = total_variation_distance(&train_dist, &prod_dist);
            Ok(AttributeDrift {
                attribute: attr.column().to_string(),
                training: train_dist,
                production: prod_dist,
                tvd,
                flagged: tvd > threshold,
            })
        })
        .collect::<Result<Vec<_>, DriftError>>()?;
    Ok(DriftReport {
        threshold,
        attributes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_dataset, single_column_schema, t10, t10_attr};
    use crate::dataset::Value;
    use alloc::vec;
    use alloc::vec::Vec;

    const EPS: f64 = 1e-12;

    fn dataset_with_groups(privileged: usize, unprivileged: usize) -> Dataset {
        let mut rows: Vec<Vec<Value>> = Vec::new();
        for _ in 0..privileged {
            rows.push(vec![Value::from("male")]);
        }
        for _ in 0..unprivileged {
            rows.push(vec![Value::from("female")]);
        }
        let n = rows.len();
        let schema = crate::dataset::Schema::new(
            vec![
                crate::dataset::Column::new("g", ColumnKind::Categorical),
                crate::dataset::Column::new("outcome", ColumnKind::BinaryLabel),
            ],
            "outcome",
            "1",
            alloc::collections::BTreeMap::new(),
        )
        .unwrap();
        Dataset::with_unit_weights(schema, rows, vec![true; n], alloc::collections::BTreeMap::new())
            .unwrap()
    }

    #[test]
    fn identical_distributions_have_zero_tvd() {
        let ds = t10();
        let report = drift_check(&ds, &ds, &[t10_attr()], DEFAULT_DRIFT_THRESHOLD).unwrap();
        assert_eq!(report.attributes[0].tvd, 0.0);
        assert!(!report.any_flagged());
    }

    #[test]
    fn known_shift_yields_tvd_019() {
        let training = dataset_with_groups(69, 31);
        let production = dataset_with_groups(50, 50);
        let attr = ProtectedAttribute::new("g", ["male"], ["female"]).unwrap();
        let report = drift_check(&training, &production, &[attr], 0.1).unwrap();
        let drift = &report.attributes[0];
        assert!((drift.tvd - 0.19).abs() < EPS);
        assert!(drift.flagged);
    }

    #[test]
    fn disjoint_supports_have_tvd_one() {
        let mut p = BTreeMap::new();
        p.insert("a".to_string(), 1.0);
        let mut q = BTreeMap::new();
        q.insert("b".to_string(), 1.0);
        assert!((total_variation_distance(&p, &q) - 1.0).abs() < EPS);
    }

    #[test]
    fn distributions_sum_to_one() {
        for seed in 0..50u64 {
            let ds = random_dataset(seed, 40, true, false);
            let dist = distribution(&ds, "g").unwrap();
            let sum: f64 = dist.values().sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn tvd_is_symmetric_and_bounded() {
        for seed in 0..50u64 {
            let a = distribution(&random_dataset(seed, 40, true, false), "g").unwrap();
            let b = distribution(&random_dataset(seed + 1000, 40, true, false), "g").unwrap();
            let ab = total_variation_distance(&a, &b);
            let ba = total_variation_distance(&b, &a);
            assert!((ab - ba).abs() < EPS);
            assert!((0.0..=1.0).contains(&ab));
        }
    }

    #[test]
    fn all_missing_column_errors() {
        let schema = single_column_schema();
        let rows = vec![vec![Value::Missing], vec![Value::Missing]];
        let ds = Dataset::with_unit_weights(
            schema,
            rows,
            vec![true, false],
            alloc::collections::BTreeMap::new(),
        )
        .unwrap();
        assert!(matches!(
            distribution(&ds, "g"),
            Err(DriftError::EmptyDistribution(_))
        ));
    }
}
