//! Immutable tabular dataset snapshots and protected-attribute semantics.
//!
//! A [`Dataset`] couples feature rows with binary labels, per-row instance
//! weights, and free-text provenance. Datasets are never mutated: every
//! transform (reweighing, resampling, splitting) produces a new snapshot,
//! so concurrent readers are always safe.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Default missing-value fraction above which a column is flagged incomplete.
pub const DEFAULT_MISSING_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DatasetError {
    #[error("empty dataset")]
    Empty,
    #[error("duplicate column name '{0}'")]
    DuplicateColumn(String),
    #[error("schema must declare exactly one binary-label column, found {0}")]
    LabelColumnCount(usize),
    #[error("label_column '{0}' does not name the binary-label column")]
    LabelColumnMismatch(String),
    #[error("rows, labels, and weights must have equal length ({rows}/{labels}/{weights})")]
    LengthMismatch {
        rows: usize,
        labels: usize,
        weights: usize,
    },
    #[error("row {row} has {actual} values, schema expects {expected}")]
    RowArity {
        row: usize,
        expected: usize,
        actual: usize,
    },
    #[error("row {0} has a negative or non-finite weight")]
    BadWeight(usize),
    #[error("unknown column '{0}'")]
    UnknownColumn(String),
    #[error("column '{0}' is not categorical")]
    NotCategorical(String),
    #[error("category '{category}' in column '{column}' is in both privileged and unprivileged sets")]
    OverlappingGroups { column: String, category: String },
    #[error("privileged and unprivileged sets must both be non-empty for column '{0}'")]
    EmptyGroupSpec(String),
    #[error("category '{category}' in column '{column}' is covered by neither group")]
    UncoveredCategory { column: String, category: String },
    #[error("{group} group of '{column}' has no members")]
    EmptyGroup { column: String, group: Group },
}

/// What a column holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColumnKind {
    Categorical,
    Numeric,
    BinaryLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

impl Column {
    pub fn new(name: impl Into<String>, kind: ColumnKind) -> Self {
        Self {
            name: name.into(),
            kind,
        }
    }
}

/// Column layout of a dataset plus label semantics.
///
/// `value_maps` translate raw file tokens to canonical categories at load
/// time (e.g. coded values to readable ones); they must cover every token
/// observed in the mapped column or loading fails.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    columns: Vec<Column>,
    label_column: String,
    favorable_label: String,
    value_maps: BTreeMap<String, BTreeMap<String, String>>,
}

impl Schema {
    pub fn new(
        columns: Vec<Column>,
        label_column: impl Into<String>,
        favorable_label: impl Into<String>,
        value_maps: BTreeMap<String, BTreeMap<String, String>>,
    ) -> Result<Self, DatasetError> {
        let label_column = label_column.into();
        let mut seen = BTreeSet::new();
        for c in &columns {
            if !seen.insert(c.name.clone()) {
                return Err(DatasetError::DuplicateColumn(c.name.clone()));
            }
        }
        let label_count = columns
            .iter()
            .filter(|c| c.kind == ColumnKind::BinaryLabel)
            .count();
        if label_count != 1 {
            return Err(DatasetError::LabelColumnCount(label_count));
        }
        let declared = columns
            .iter()
            .find(|c| c.kind == ColumnKind::BinaryLabel)
            .expect("exactly one label column");
        if declared.name != label_column {
            return Err(DatasetError::LabelColumnMismatch(label_column));
        }
        for mapped in value_maps.keys() {
            if !columns.iter().any(|c| &c.name == mapped) {
                return Err(DatasetError::UnknownColumn(mapped.clone()));
            }
        }
        Ok(Self {
            columns,
            label_column,
            favorable_label: favorable_label.into(),
            value_maps,
        })
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn label_column(&self) -> &str {
        &self.label_column
    }

    pub fn favorable_label(&self) -> &str {
        &self.favorable_label
    }

    pub fn value_map(&self, column: &str) -> Option<&BTreeMap<String, String>> {
        self.value_maps.get(column)
    }

    pub fn value_maps(&self) -> &BTreeMap<String, BTreeMap<String, String>> {
        &self.value_maps
    }

    /// Feature columns in schema order (everything but the label column).
    pub fn feature_columns(&self) -> impl Iterator<Item = &Column> {
        self.columns
            .iter()
            .filter(|c| c.kind != ColumnKind::BinaryLabel)
    }

    pub fn feature_count(&self) -> usize {
        self.columns.len() - 1
    }

    /// Index of a feature column within a row, or `None` for the label
    /// column and unknown names.
    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_columns().position(|c| c.name == name)
    }

    pub fn feature_kind(&self, name: &str) -> Option<ColumnKind> {
        self.feature_columns()
            .find(|c| c.name == name)
            .map(|c| c.kind)
    }
}

/// A single cell. Numeric comparison goes through the bit pattern so rows
/// containing NaN still have a total equality for duplicate counting.
#[derive(Debug, Clone)]
pub enum Value {
    Cat(String),
    Num(f64),
    Missing,
}

impl Value {
    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }

    pub fn as_category(&self) -> Option<&str> {
        match self {
            Value::Cat(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Num(x) => Some(*x),
            _ => None,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Cat(a), Value::Cat(b)) => a == b,
            (Value::Num(a), Value::Num(b)) => a.to_bits() == b.to_bits(),
            (Value::Missing, Value::Missing) => true,
            _ => false,
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Cat(s.to_string())
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

/// Which side of a protected attribute's partition a row falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Privileged,
    Unprivileged,
}

impl core::fmt::Display for Group {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Group::Privileged => f.write_str("privileged"),
            Group::Unprivileged => f.write_str("unprivileged"),
        }
    }
}

/// A categorical column partitioned into privileged and unprivileged
/// classes. The partition must cover every category observed in any
/// dataset the attribute is evaluated on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtectedAttribute {
    column: String,
    privileged: BTreeSet<String>,
    unprivileged: BTreeSet<String>,
}

impl ProtectedAttribute {
    pub fn new(
        column: impl Into<String>,
        privileged: impl IntoIterator<Item = impl Into<String>>,
        unprivileged: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self, DatasetError> {
        let column = column.into();
        let privileged: BTreeSet<String> = privileged.into_iter().map(Into::into).collect();
        let unprivileged: BTreeSet<String> = unprivileged.into_iter().map(Into::into).collect();
        if privileged.is_empty() || unprivileged.is_empty() {
            return Err(DatasetError::EmptyGroupSpec(column));
        }
        if let Some(both) = privileged.intersection(&unprivileged).next() {
            return Err(DatasetError::OverlappingGroups {
                column,
                category: both.clone(),
            });
        }
        Ok(Self {
            column,
            privileged,
            unprivileged,
        })
    }

    pub fn column(&self) -> &str {
        &self.column
    }

    pub fn privileged(&self) -> &BTreeSet<String> {
        &self.privileged
    }

    pub fn unprivileged(&self) -> &BTreeSet<String> {
        &self.unprivileged
    }

    /// Group of one cell; `None` for missing values.
    pub fn group_of(&self, value: &Value) -> Result<Option<Group>, DatasetError> {
        match value {
            Value::Missing => Ok(None),
            Value::Cat(c) if self.privileged.contains(c) => Ok(Some(Group::Privileged)),
            Value::Cat(c) if self.unprivileged.contains(c) => Ok(Some(Group::Unprivileged)),
            Value::Cat(c) => Err(DatasetError::UncoveredCategory {
                column: self.column.clone(),
                category: c.clone(),
            }),
            Value::Num(_) => Err(DatasetError::NotCategorical(self.column.clone())),
        }
    }
}

/// Immutable snapshot of a tabular dataset.
///
/// Rows hold the feature columns in schema order; the label column is
/// stored separately as booleans (`true` = favorable). Weights default to
/// 1.0 and must be non-negative and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Schema,
    rows: Vec<Vec<Value>>,
    labels: Vec<bool>,
    weights: Vec<f64>,
    provenance: BTreeMap<String, String>,
}

impl Dataset {
    pub fn new(
        schema: Schema,
        rows: Vec<Vec<Value>>,
        labels: Vec<bool>,
        weights: Vec<f64>,
        provenance: BTreeMap<String, String>,
    ) -> Result<Self, DatasetError> {
        if rows.is_empty() {
            return Err(DatasetError::Empty);
        }
        if rows.len() != labels.len() || rows.len() != weights.len() {
            return Err(DatasetError::LengthMismatch {
                rows: rows.len(),
                labels: labels.len(),
                weights: weights.len(),
            });
        }
        let expected = schema.feature_count();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != expected {
                return Err(DatasetError::RowArity {
                    row: i,
                    expected,
                    actual: row.len(),
                });
            }
        }
        for (i, w) in weights.iter().enumerate() {
            if !w.is_finite() || *w < 0.0 {
                return Err(DatasetError::BadWeight(i));
            }
        }
        Ok(Self {
            schema,
            rows,
            labels,
            weights,
            provenance,
        })
    }

    /// Construct with all weights 1.0.
    pub fn with_unit_weights(
        schema: Schema,
        rows: Vec<Vec<Value>>,
        labels: Vec<bool>,
        provenance: BTreeMap<String, String>,
    ) -> Result<Self, DatasetError> {
        let n = rows.len();
        Self::new(schema, rows, labels, alloc::vec![1.0; n], provenance)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn provenance(&self) -> &BTreeMap<String, String> {
        &self.provenance
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// New snapshot with replaced weights (same rows, labels, provenance).
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self, DatasetError> {
        Self::new(
            self.schema.clone(),
            self.rows.clone(),
            self.labels.clone(),
            weights,
            self.provenance.clone(),
        )
    }

    /// New snapshot containing the given row indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self, DatasetError> {
        let rows = indices.iter().map(|&i| self.rows[i].clone()).collect();
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        let weights = indices.iter().map(|&i| self.weights[i]).collect();
        Self::new(
            self.schema.clone(),
            rows,
            labels,
            weights,
            self.provenance.clone(),
        )
    }

    pub fn feature_index(&self, column: &str) -> Result<usize, DatasetError> {
        self.schema
            .feature_index(column)
            .ok_or_else(|| DatasetError::UnknownColumn(column.to_string()))
    }

    /// Feature index of a protected attribute's column, checking it is
    /// declared categorical.
    pub fn attribute_index(&self, attr: &ProtectedAttribute) -> Result<usize, DatasetError> {
        let idx = self.feature_index(attr.column())?;
        match self.schema.feature_kind(attr.column()) {
            Some(ColumnKind::Categorical) => Ok(idx),
            _ => Err(DatasetError::NotCategorical(attr.column().to_string())),
        }
    }

    /// Group membership per row for one protected attribute; `None` where
    /// the attribute value is missing.
    pub fn groups(&self, attr: &ProtectedAttribute) -> Result<Vec<Option<Group>>, DatasetError> {
        let idx = self.attribute_index(attr)?;
        self.rows
            .iter()
            .map(|row| attr.group_of(&row[idx]))
            .collect()
    }

    /// Joint (group, label) contingency counts for one protected attribute.
    ///
    /// Rows with a missing attribute value are excluded and counted. Errors
    /// if either group ends up with no members.
    pub fn group_counts(&self, attr: &ProtectedAttribute) -> Result<ContingencyTable, DatasetError> {
        let groups = self.groups(attr)?;
        let mut table = ContingencyTable::default();
        for (i, group) in groups.iter().enumerate() {
            match group {
                None => table.excluded_missing_attribute += 1,
                Some(g) => {
                    let cell = table.cell_mut(*g, self.labels[i]);
                    cell.count += 1;
                    cell.weight += self.weights[i];
                }
            }
        }
        for group in [Group::Privileged, Group::Unprivileged] {
            if table.group_count(group) == 0 {
                return Err(DatasetError::EmptyGroup {
                    column: attr.column().to_string(),
                    group,
                });
            }
        }
        Ok(table)
    }

    /// Structural quality report: per-column missing counts, kind
    /// violations, and duplicate rows. Never fails; the dataset stays
    /// untouched.
    pub fn validate(&self, missing_threshold: f64) -> ValidationReport {
        let n = self.rows.len();
        let mut columns = Vec::new();
        let mut incomplete = false;
        for (fi, col) in self.schema.feature_columns().enumerate() {
            let mut missing = 0usize;
            let mut violations = 0usize;
            for row in &self.rows {
                match (&row[fi], col.kind) {
                    (Value::Missing, _) => missing += 1,
                    (Value::Cat(_), ColumnKind::Categorical) => {}
                    (Value::Num(x), ColumnKind::Numeric) => {
                        if !x.is_finite() {
                            violations += 1;
                        }
                    }
                    _ => violations += 1,
                }
            }
            if missing as f64 / n as f64 > missing_threshold {
                incomplete = true;
            }
            columns.push(ColumnValidation {
                column: col.name.clone(),
                missing,
                kind_violations: violations,
            });
        }
        // label column is parsed to booleans at construction, so it can
        // contribute neither missing values nor violations
        columns.push(ColumnValidation {
            column: self.schema.label_column().to_string(),
            missing: 0,
            kind_violations: 0,
        });

        let mut seen: BTreeSet<Vec<CellKey>> = BTreeSet::new();
        let mut duplicates = 0usize;
        for (i, row) in self.rows.iter().enumerate() {
            let mut key: Vec<CellKey> = row.iter().map(CellKey::from).collect();
            key.push(CellKey::Cat(if self.labels[i] { "1" } else { "0" }.to_string()));
            if !seen.insert(key) {
                duplicates += 1;
            }
        }

        ValidationReport {
            rows: n,
            missing_threshold,
            columns,
            duplicate_rows: duplicates,
            incomplete,
        }
    }

    /// Demographic profile: group sizes, favorable base rates, skew
    /// indicators, and missing-value exposure per group for each protected
    /// attribute. Attribute-level failures are recorded in the profile
    /// rather than aborting it.
    pub fn profile(&self, attrs: &[ProtectedAttribute]) -> DatasetProfile {
        let n = self.rows.len();
        let column_missing = self
            .schema
            .feature_columns()
            .enumerate()
            .map(|(fi, col)| ColumnMissing {
                column: col.name.clone(),
                missing: self.rows.iter().filter(|r| r[fi].is_missing()).count(),
            })
            .collect();

        let attributes = attrs
            .iter()
            .map(|attr| match self.attribute_profile(attr) {
                Ok(stats) => AttributeProfile {
                    attribute: attr.column().to_string(),
                    stats: Some(stats),
                    error: None,
                },
                Err(e) => AttributeProfile {
                    attribute: attr.column().to_string(),
                    stats: None,
                    error: Some(e.to_string()),
                },
            })
            .collect();

        DatasetProfile {
            rows: n,
            column_missing,
            attributes,
            provenance: self.provenance.clone(),
        }
    }

    fn attribute_profile(&self, attr: &ProtectedAttribute) -> Result<AttributeStats, DatasetError> {
        let table = self.group_counts(attr)?;
        let idx = self.attribute_index(attr)?;
        let groups = self.groups(attr)?;

        // rows per group that an incomplete-row-dropping policy would lose
        let mut missing_rows = [0usize; 2];
        for (i, group) in groups.iter().enumerate() {
            if let Some(g) = group {
                let has_missing = self.rows[i]
                    .iter()
                    .enumerate()
                    .any(|(fi, v)| fi != idx && v.is_missing());
                if has_missing {
                    missing_rows[*g as usize] += 1;
                }
            }
        }

        let priv_size = table.group_count(Group::Privileged);
        let unpriv_size = table.group_count(Group::Unprivileged);
        let priv_rate = table.cell(Group::Privileged, true).weight
            / table.group_weight(Group::Privileged);
        let unpriv_rate = table.cell(Group::Unprivileged, true).weight
            / table.group_weight(Group::Unprivileged);

        Ok(AttributeStats {
            privileged_size: priv_size,
            unprivileged_size: unpriv_size,
            privileged_base_rate: priv_rate,
            unprivileged_base_rate: unpriv_rate,
            privileged_rows_with_missing: missing_rows[Group::Privileged as usize],
            unprivileged_rows_with_missing: missing_rows[Group::Unprivileged as usize],
            missing_attribute_rows: table.excluded_missing_attribute,
            size_skew: abs_diff(priv_size as f64, unpriv_size as f64)
                / (priv_size + unpriv_size) as f64,
            rate_skew: abs_diff(priv_rate, unpriv_rate),
        })
    }
}

fn abs_diff(a: f64, b: f64) -> f64 {
    if a > b {
        a - b
    } else {
        b - a
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum CellKey {
    Cat(String),
    Num(u64),
    Missing,
}

impl From<&Value> for CellKey {
    fn from(v: &Value) -> Self {
        match v {
            Value::Cat(s) => CellKey::Cat(s.clone()),
            Value::Num(x) => CellKey::Num(x.to_bits()),
            Value::Missing => CellKey::Missing,
        }
    }
}

/// One (group, label) cell: unweighted count and summed weight.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub count: usize,
    pub weight: f64,
}

/// Joint counts over (group, label) for one protected attribute.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub privileged_favorable: Cell,
    pub privileged_unfavorable: Cell,
    pub unprivileged_favorable: Cell,
    pub unprivileged_unfavorable: Cell,
    pub excluded_missing_attribute: usize,
}

impl ContingencyTable {
    pub fn cell(&self, group: Group, favorable: bool) -> &Cell {
        match (group, favorable) {
            (Group::Privileged, true) => &self.privileged_favorable,
            (Group::Privileged, false) => &self.privileged_unfavorable,
            (Group::Unprivileged, true) => &self.unprivileged_favorable,
            (Group::Unprivileged, false) => &self.unprivileged_unfavorable,
        }
    }

    fn cell_mut(&mut self, group: Group, favorable: bool) -> &mut Cell {
        match (group, favorable) {
            (Group::Privileged, true) => &mut self.privileged_favorable,
            (Group::Privileged, false) => &mut self.privileged_unfavorable,
            (Group::Unprivileged, true) => &mut self.unprivileged_favorable,
            (Group::Unprivileged, false) => &mut self.unprivileged_unfavorable,
        }
    }

    /// Included rows (missing-attribute rows are not part of any cell).
    pub fn rows(&self) -> usize {
        self.privileged_favorable.count
            + self.privileged_unfavorable.count
            + self.unprivileged_favorable.count
            + self.unprivileged_unfavorable.count
    }

    pub fn group_count(&self, group: Group) -> usize {
        self.cell(group, true).count + self.cell(group, false).count
    }

    pub fn group_weight(&self, group: Group) -> f64 {
        self.cell(group, true).weight + self.cell(group, false).weight
    }

    pub fn label_count(&self, favorable: bool) -> usize {
        self.cell(Group::Privileged, favorable).count
            + self.cell(Group::Unprivileged, favorable).count
    }

    pub fn label_weight(&self, favorable: bool) -> f64 {
        self.cell(Group::Privileged, favorable).weight
            + self.cell(Group::Unprivileged, favorable).weight
    }

    pub fn total_weight(&self) -> f64 {
        self.group_weight(Group::Privileged) + self.group_weight(Group::Unprivileged)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnValidation {
    pub column: String,
    pub missing: usize,
    pub kind_violations: usize,
}

/// Output of [`Dataset::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub rows: usize,
    pub missing_threshold: f64,
    pub columns: Vec<ColumnValidation>,
    pub duplicate_rows: usize,
    /// True when any column's missing fraction exceeds the threshold.
    pub incomplete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnMissing {
    pub column: String,
    pub missing: usize,
}

/// Per-attribute demographic statistics inside a [`DatasetProfile`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeStats {
    pub privileged_size: usize,
    pub unprivileged_size: usize,
    /// Weighted favorable-outcome rate of the privileged group.
    pub privileged_base_rate: f64,
    pub unprivileged_base_rate: f64,
    /// Rows per group carrying at least one missing value in another
    /// column; what a drop-incomplete-rows policy would delete.
    pub privileged_rows_with_missing: usize,
    pub unprivileged_rows_with_missing: usize,
    pub missing_attribute_rows: usize,
    /// |priv − unpriv| / (priv + unpriv) over group sizes.
    pub size_skew: f64,
    /// |priv − unpriv| over base rates.
    pub rate_skew: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeProfile {
    pub attribute: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<AttributeStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Output of [`Dataset::profile`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetProfile {
    pub rows: usize,
    pub column_missing: Vec<ColumnMissing>,
    pub attributes: Vec<AttributeProfile>,
    pub provenance: BTreeMap<String, String>,
}
