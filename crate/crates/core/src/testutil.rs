//! Shared test fixtures and dataset generators.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Column, ColumnKind, Dataset, ProtectedAttribute, Schema, Value};

pub fn single_column_schema() -> Schema {
    Schema::new(
        vec![
            Column::new("g", ColumnKind::Categorical),
            Column::new("outcome", ColumnKind::BinaryLabel),
        ],
        "outcome",
        "1",
        BTreeMap::new(),
    )
    .unwrap()
}

/// Ten rows over one protected column: six privileged (four favorable),
/// four unprivileged (one favorable).
pub fn t10() -> Dataset {
    let labels = vec![
        true, true, true, true, false, false, // P
        true, false, false, false, // Q
    ];
    let rows = (0..10)
        .map(|i| vec![Value::from(if i < 6 { "P" } else { "Q" })])
        .collect();
    Dataset::with_unit_weights(single_column_schema(), rows, labels, BTreeMap::new()).unwrap()
}

pub fn t10_attr() -> ProtectedAttribute {
    ProtectedAttribute::new("g", ["P"], ["Q"]).unwrap()
}

/// Random single-attribute dataset where both groups hold at least one row.
/// Optionally sprinkles missing attribute values and non-unit weights.
pub fn random_dataset(seed: u64, max_rows: usize, with_missing: bool, with_weights: bool) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_rows.max(2));
    let mut rows: Vec<Vec<Value>> = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // force one row in each group so the attribute is evaluable
        let cat: Value = if i == 0 {
            Value::from("P")
        } else if i == 1 {
            Value::from("Q")
        } else if with_missing && rng.gen_bool(0.1) {
            Value::Missing
        } else if rng.gen_bool(0.5) {
            Value::from("P")
        } else {
            Value::from("Q")
        };
        rows.push(vec![cat]);
        labels.push(rng.gen_bool(0.5));
        weights.push(if with_weights {
            rng.gen_range(0.1..4.0)
        } else {
            1.0
        });
    }
    Dataset::new(single_column_schema(), rows, labels, weights, BTreeMap::new()).unwrap()
}

/// (group, truth, prediction) triples pooled into a dataset plus aligned
/// vectors, for confusion-based metric tests.
pub fn labelled_dataset(
    cases: &[(&str, bool, bool)],
) -> (Dataset, Vec<bool>, Vec<bool>) {
    let rows = cases
        .iter()
        .map(|(g, _, _)| vec![Value::from(*g)])
        .collect();
    let truth: Vec<bool> = cases.iter().map(|(_, t, _)| *t).collect();
    let predictions: Vec<bool> = cases.iter().map(|(_, _, p)| *p).collect();
    let ds = Dataset::with_unit_weights(
        single_column_schema(),
        rows,
        truth.clone(),
        BTreeMap::new(),
    )
    .unwrap();
    (ds, truth, predictions)
}

/// The eight-row confusion fixture: privileged truth [1,1,0,0] predicted
/// [1,0,0,0]; unprivileged truth [1,1,0,0] predicted [1,1,1,0].
pub fn c8() -> (Dataset, Vec<bool>, Vec<bool>) {
    labelled_dataset(&[
        ("P", true, true),
        ("P", true, false),
        ("P", false, false),
        ("P", false, false),
        ("Q", true, true),
        ("Q", true, true),
        ("Q", false, true),
        ("Q", false, false),
    ])
}

pub fn attr_pq() -> ProtectedAttribute {
    ProtectedAttribute::new("g", ["P"], ["Q"]).unwrap()
}

