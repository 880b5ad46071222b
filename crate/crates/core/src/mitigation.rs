//! Pre-processing bias mitigation: reweighing and duplication-based
//! resampling.
//!
//! Reweighing assigns every (group, label) cell the ratio of its expected
//! to observed mass, which decouples group membership from the label and
//! drives the weighted statistical parity difference to zero without
//! touching any row. Resampling equalizes favorable rates by duplicating
//! or deleting existing rows (never by synthesizing new ones), with the
//! affected counts logged so an auditor can see how much the data moved.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, DatasetError, Group, ProtectedAttribute};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MitigationError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("the ({group}, {label}) cell of '{column}' is empty")]
    EmptyCell {
        column: String,
        group: Group,
        label: &'static str,
    },
    #[error("undersampling '{column}' would empty the ({group}, favorable) cell")]
    WouldEmptyCell { column: String, group: Group },
}

fn label_name(favorable: bool) -> &'static str {
    if favorable {
        "favorable"
    } else {
        "unfavorable"
    }
}

/// Multiplicative cell weights for reweighing:
/// `w(g, y) = (W_g · W_y) / (W · W_{g,y})` over the dataset's weighted
/// contingency table. For unit input weights this reduces to the classical
/// count-based scheme; using weighted mass keeps the transform idempotent
/// and SPD-zeroing for already-weighted datasets too.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightPlan {
    pub privileged_favorable: f64,
    pub privileged_unfavorable: f64,
    pub unprivileged_favorable: f64,
    pub unprivileged_unfavorable: f64,
}

impl WeightPlan {
    pub fn cell(&self, group: Group, favorable: bool) -> f64 {
        match (group, favorable) {
            (Group::Privileged, true) => self.privileged_favorable,
            (Group::Privileged, false) => self.privileged_unfavorable,
            (Group::Unprivileged, true) => self.unprivileged_favorable,
            (Group::Unprivileged, false) => self.unprivileged_unfavorable,
        }
    }
}

/// Compute the reweighing plan for one protected attribute.
///
/// Errors if any (group, label) cell is empty: a group with no favorable
/// or no unfavorable examples has no finite correcting weight.
pub fn weight_plan(
    dataset: &Dataset,
    attr: &ProtectedAttribute,
) -> Result<WeightPlan, MitigationError> {
    let table = dataset.group_counts(attr)?;
    for group in [Group::Privileged, Group::Unprivileged] {
        for favorable in [true, false] {
            if table.cell(group, favorable).count == 0 {
                return Err(MitigationError::EmptyCell {
                    column: attr.column().to_string(),
                    group,
                    label: label_name(favorable),
                });
            }
        }
    }
    let total = table.total_weight();
    let cell = |group: Group, favorable: bool| {
        table.group_weight(group) * table.label_weight(favorable)
            / (total * table.cell(group, favorable).weight)
    };
    Ok(WeightPlan {
        privileged_favorable: cell(Group::Privileged, true),
        privileged_unfavorable: cell(Group::Privileged, false),
        unprivileged_favorable: cell(Group::Unprivileged, true),
        unprivileged_unfavorable: cell(Group::Unprivileged, false),
    })
}

/// Reweigh a dataset for one protected attribute.
///
/// Returns a new snapshot whose weights are the old weights multiplied by
/// the plan's cell weight; rows and labels are untouched, and rows with a
/// missing attribute value keep their weight. The result has weighted
/// statistical parity difference 0 (within 1e−12) and the same total
/// weight as the input.
pub fn reweigh(
    dataset: &Dataset,
    attr: &ProtectedAttribute,
) -> Result<(Dataset, WeightPlan), MitigationError> {
    let plan = weight_plan(dataset, attr)?;
    let groups = dataset.groups(attr)?;
    let weights = dataset
        .weights()
        .iter()
        .zip(groups.iter().zip(dataset.labels()))
        .map(|(w, (group, label))| match group {
            Some(g) => w * plan.cell(*g, *label),
            None => *w,
        })
        .collect();
    Ok((dataset.with_weights(weights)?, plan))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResampleStrategy {
    Oversample,
    Undersample,
}

/// What a resampling pass did, for the audit trail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResampleLog {
    pub strategy: ResampleStrategy,
    pub seed: u64,
    /// Group whose favorable cell was grown or shrunk; `None` when the
    /// rates were already equal and the dataset is unchanged.
    pub adjusted_group: Option<Group>,
    pub rows_added: usize,
    pub rows_removed: usize,
    pub rows_before: usize,
    pub rows_after: usize,
}

/// Equalize unweighted favorable rates across groups by duplicating rows
/// (oversample) or deleting rows (undersample).
///
/// Oversampling draws rows with replacement from the favorable cell of the
/// lower-rate group until that group's rate reaches the other's, so the
/// remaining gap is below one row's worth. Undersampling removes rows from
/// the favorable cell of the higher-rate group, erroring if equalization
/// would empty the cell. Every output row is a copy of an input row;
/// missing-attribute rows are never touched. Deterministic in
/// `(dataset, seed)`.
pub fn resample(
    dataset: &Dataset,
    attr: &ProtectedAttribute,
    strategy: ResampleStrategy,
    seed: u64,
) -> Result<(Dataset, ResampleLog), MitigationError> {
    let table = dataset.group_counts(attr)?;
    for group in [Group::Privileged, Group::Unprivileged] {
        for favorable in [true, false] {
            if table.cell(group, favorable).count == 0 {
                return Err(MitigationError::EmptyCell {
                    column: attr.column().to_string(),
                    group,
                    label: label_name(favorable),
                });
            }
        }
    }

    let rate = |g: Group| {
        table.cell(g, true).count as f64 / table.group_count(g) as f64
    };
    let mut log = ResampleLog {
        strategy,
        seed,
        adjusted_group: None,
        rows_added: 0,
        rows_removed: 0,
        rows_before: dataset.len(),
        rows_after: dataset.len(),
    };
    if rate(Group::Privileged) == rate(Group::Unprivileged) {
        return Ok((dataset.clone(), log));
    }
    let (low, high) = if rate(Group::Privileged) < rate(Group::Unprivileged) {
        (Group::Privileged, Group::Unprivileged)
    } else {
        (Group::Unprivileged, Group::Privileged)
    };

    let groups = dataset.groups(attr)?;
    let cell_indices = |g: Group| -> Vec<usize> {
        (0..dataset.len())
            .filter(|&i| groups[i] == Some(g) && dataset.labels()[i])
            .collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    match strategy {
        ResampleStrategy::Oversample => {
            // smallest k with (fav_low + k) / (n_low + k) >= fav_high / n_high,
            // kept in integer arithmetic so the minimum is exact
            let fav_low = table.cell(low, true).count as u64;
            let n_low = table.group_count(low) as u64;
            let fav_high = table.cell(high, true).count as u64;
            let n_high = table.group_count(high) as u64;
            let mut k = 0u64;
            while (fav_low + k) * n_high < fav_high * (n_low + k) {
                k += 1;
            }
            let k = k as usize;
            let pool = cell_indices(low);
            let mut indices: Vec<usize> = (0..dataset.len()).collect();
            for _ in 0..k {
                indices.push(pool[rng.gen_range(0..pool.len())]);
            }
            log.adjusted_group = Some(low);
            log.rows_added = k;
            log.rows_after = dataset.len() + k;
            Ok((dataset.subset(&indices)?, log))
        }
        ResampleStrategy::Undersample => {
            // smallest k with (fav_high − k) / (n_high − k) <= fav_low / n_low
            let fav = table.cell(high, true).count;
            let fav_low = table.cell(low, true).count as u64;
            let n_low = table.group_count(low) as u64;
            let n_high = table.group_count(high) as u64;
            let mut k = 0usize;
            while (fav - k) as u64 * n_low > fav_low * (n_high - k as u64) {
                k += 1;
                if k >= fav {
                    return Err(MitigationError::WouldEmptyCell {
                        column: attr.column().to_string(),
                        group: high,
                    });
                }
            }
            let pool = cell_indices(high);
            let victims: alloc::collections::BTreeSet<usize> = sample(&mut rng, pool.len(), k)
                .into_iter()
                .map(|j| pool[j])
                .collect();
            let indices: Vec<usize> = (0..dataset.len())
                .filter(|i| !victims.contains(i))
                .collect();
            log.adjusted_group = Some(high);
            log.rows_removed = k;
            log.rows_after = dataset.len() - k;
            Ok((dataset.subset(&indices)?, log))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{base_rates, statistical_parity_difference, Outcome};
    use crate::testutil::{random_dataset, single_column_schema, t10, t10_attr};
    use alloc::collections::BTreeMap;
    use alloc::vec;
    use alloc::vec::Vec;
    use crate::dataset::Value;

    const EPS: f64 = 1e-12;

    #[test]
    fn t10_weight_plan_matches_expected_cells() {
        let plan = weight_plan(&t10(), &t10_attr()).unwrap();
        assert!((plan.unprivileged_favorable - 2.0).abs() < EPS);
        assert!((plan.privileged_favorable - 0.75).abs() < EPS);
        assert!((plan.privileged_unfavorable - 1.5).abs() < EPS);
        assert!((plan.unprivileged_unfavorable - 2.0 / 3.0).abs() < EPS);
    }

    #[test]
    fn t10_reweigh_equalizes_rates() {
        let (reweighed, _) = reweigh(&t10(), &t10_attr()).unwrap();
        let rates = base_rates(&reweighed, &t10_attr(), Outcome::Labels).unwrap();
        assert!((rates.privileged - 0.5).abs() < EPS);
        assert!((rates.unprivileged - 0.5).abs() < EPS);
        let spd = statistical_parity_difference(&rates).value.unwrap();
        assert!(spd.abs() <= EPS);
        // unweighted data untouched
        assert_eq!(reweighed.rows(), t10().rows());
        assert_eq!(reweighed.labels(), t10().labels());
    }

    #[test]
    fn balanced_dataset_gets_unit_weights() {
        let rows: Vec<Vec<Value>> = ["P", "P", "Q", "Q"]
            .iter()
            .map(|g| vec![Value::from(*g)])
            .collect();
        let ds = Dataset::with_unit_weights(
            single_column_schema(),
            rows,
            vec![true, false, true, false],
            BTreeMap::new(),
        )
        .unwrap();
        let plan = weight_plan(&ds, &t10_attr()).unwrap();
        for w in [
            plan.privileged_favorable,
            plan.privileged_unfavorable,
            plan.unprivileged_favorable,
            plan.unprivileged_unfavorable,
        ] {
            assert!((w - 1.0).abs() < EPS);
        }
    }

    #[test]
    fn empty_cell_is_an_error() {
        let rows: Vec<Vec<Value>> = ["P", "P", "Q", "Q"]
            .iter()
            .map(|g| vec![Value::from(*g)])
            .collect();
        // unprivileged group has no favorable rows
        let ds = Dataset::with_unit_weights(
            single_column_schema(),
            rows,
            vec![true, false, false, false],
            BTreeMap::new(),
        )
        .unwrap();
        assert!(matches!(
            weight_plan(&ds, &t10_attr()),
            Err(MitigationError::EmptyCell {
                group: Group::Unprivileged,
                label: "favorable",
                ..
            })
        ));
        assert!(matches!(
            resample(&ds, &t10_attr(), ResampleStrategy::Oversample, 1),
            Err(MitigationError::EmptyCell { .. })
        ));
    }

    #[test]
    fn reweigh_zeroes_spd_on_random_datasets() {
        for seed in 0..200u64 {
            let ds = random_dataset(seed, 100, false, seed % 2 == 1);
            let attr = t10_attr();
            let Ok((reweighed, _)) = reweigh(&ds, &attr) else {
                continue; // some random draws have an empty cell
            };
            let rates = base_rates(&reweighed, &attr, Outcome::Labels).unwrap();
            let spd = statistical_parity_difference(&rates).value.unwrap();
            assert!(spd.abs() <= EPS, "seed {seed}: |SPD| = {}", spd.abs());
        }
    }

    #[test]
    fn reweigh_preserves_total_weight() {
        for seed in 0..100u64 {
            let ds = random_dataset(seed, 60, false, true);
            if let Ok((reweighed, _)) = reweigh(&ds, &t10_attr()) {
                assert!((reweighed.total_weight() - ds.total_weight()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn reweigh_is_idempotent() {
        for seed in 0..100u64 {
            let ds = random_dataset(seed, 60, false, true);
            if let Ok((reweighed, _)) = reweigh(&ds, &t10_attr()) {
                let plan = weight_plan(&reweighed, &t10_attr()).unwrap();
                for w in [
                    plan.privileged_favorable,
                    plan.privileged_unfavorable,
                    plan.unprivileged_favorable,
                    plan.unprivileged_unfavorable,
                ] {
                    assert!((w - 1.0).abs() < EPS, "seed {seed}: cell weight {w}");
                }
            }
        }
    }

    #[test]
    fn missing_attribute_rows_keep_their_weight() {
        let rows = vec![
            vec![Value::from("P")],
            vec![Value::from("P")],
            vec![Value::from("Q")],
            vec![Value::from("Q")],
            vec![Value::Missing],
        ];
        let ds = Dataset::new(
            single_column_schema(),
            rows,
            vec![true, false, true, false, true],
            vec![1.0, 1.0, 1.0, 1.0, 3.25],
            BTreeMap::new(),
        )
        .unwrap();
        let (reweighed, _) = reweigh(&ds, &t10_attr()).unwrap();
        assert_eq!(reweighed.weights()[4], 3.25);
    }

    #[test]
    fn t10_oversample_closes_the_gap() {
        let (resampled, log) =
            resample(&t10(), &t10_attr(), ResampleStrategy::Oversample, 42).unwrap();
        // unprivileged favorable cell grows from 1/4 until it reaches 2/3
        assert_eq!(log.adjusted_group, Some(Group::Unprivileged));
        assert_eq!(log.rows_added, 5);
        assert_eq!(resampled.len(), 15);
        let rates = base_rates(&resampled, &t10_attr(), Outcome::Labels).unwrap();
        let spd = statistical_parity_difference(&rates).value.unwrap();
        assert!(spd.abs() <= 1.0 / resampled.len() as f64);
    }

    #[test]
    fn oversample_gap_bound_on_random_datasets() {
        for seed in 0..100u64 {
            let ds = random_dataset(seed, 60, false, false);
            let Ok((resampled, log)) =
                resample(&ds, &t10_attr(), ResampleStrategy::Oversample, seed)
            else {
                continue;
            };
            let Some(group) = log.adjusted_group else {
                continue;
            };
            let table = resampled.group_counts(&t10_attr()).unwrap();
            let rates = base_rates(&resampled, &t10_attr(), Outcome::Labels).unwrap();
            let spd = statistical_parity_difference(&rates).value.unwrap();
            // the grown group's rate passes the other's within one row
            assert!(
                spd.abs() <= 1.0 / table.group_count(group) as f64,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn balanced_dataset_resamples_to_itself() {
        let rows: Vec<Vec<Value>> = ["P", "P", "Q", "Q"]
            .iter()
            .map(|g| vec![Value::from(*g)])
            .collect();
        let ds = Dataset::with_unit_weights(
            single_column_schema(),
            rows,
            vec![true, false, true, false],
            BTreeMap::new(),
        )
        .unwrap();
        for strategy in [ResampleStrategy::Oversample, ResampleStrategy::Undersample] {
            let (out, log) = resample(&ds, &t10_attr(), strategy, 7).unwrap();
            assert_eq!(out, ds);
            assert_eq!(log.adjusted_group, None);
        }
    }

    #[test]
    fn resample_is_deterministic_in_seed() {
        let ds = random_dataset(3, 40, false, false);
        let a = resample(&ds, &t10_attr(), ResampleStrategy::Oversample, 99).unwrap();
        let b = resample(&ds, &t10_attr(), ResampleStrategy::Oversample, 99).unwrap();
        assert_eq!(a.0, b.0);
        let c = resample(&ds, &t10_attr(), ResampleStrategy::Oversample, 100).unwrap();
        assert_eq!(c.0.len(), a.0.len()); // same k, possibly different rows
    }

    #[test]
    fn resample_never_fabricates_rows() {
        for seed in 0..50u64 {
            let ds = random_dataset(seed, 40, false, false);
            for strategy in [ResampleStrategy::Oversample, ResampleStrategy::Undersample] {
                if let Ok((out, _)) = resample(&ds, &t10_attr(), strategy, seed) {
                    for row in out.rows() {
                        assert!(ds.rows().iter().any(|r| r == row));
                    }
                }
            }
        }
    }

    #[test]
    fn undersample_that_would_empty_a_cell_errors() {
        // privileged all favorable except one; equalizing down to 1/4
        // would need removing all favorable rows
        assert!(matches!(
            resample(&t10(), &t10_attr(), ResampleStrategy::Undersample, 5),
            Err(MitigationError::WouldEmptyCell {
                group: Group::Privileged,
                ..
            })
        ));
    }

    #[test]
    fn undersample_equalizes_when_feasible() {
        // privileged 6 rows with 4 favorable (2/3), unprivileged 4 rows
        // with 2 favorable (1/2): remove 2 privileged favorable rows
        let mut rows: Vec<Vec<Value>> = Vec::new();
        let mut labels = Vec::new();
        for (g, l) in [
            ("P", true),
            ("P", true),
            ("P", true),
            ("P", true),
            ("P", false),
            ("P", false),
            ("Q", true),
            ("Q", true),
            ("Q", false),
            ("Q", false),
        ] {
            rows.push(vec![Value::from(g)]);
            labels.push(l);
        }
        let ds =
            Dataset::with_unit_weights(single_column_schema(), rows, labels, BTreeMap::new())
                .unwrap();
        let (out, log) =
            resample(&ds, &t10_attr(), ResampleStrategy::Undersample, 11).unwrap();
        assert_eq!(log.rows_removed, 2);
        let rates = base_rates(&out, &t10_attr(), Outcome::Labels).unwrap();
        assert!((rates.privileged - rates.unprivileged).abs() < EPS);
    }
}
