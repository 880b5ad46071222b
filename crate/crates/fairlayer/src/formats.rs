//! On-disk formats: schema documents, delimited data files, and dataset
//! snapshots.
//!
//! Two dataset representations are supported. Raw delimited files
//! (RFC 4180 quoting with a configurable delimiter, so space-separated
//! files work too) are loaded against a schema document. Snapshots are
//! self-describing JSON carrying schema, rows, labels, weights, and
//! provenance; they round-trip exactly and are what `mitigate` writes, so
//! a transformed dataset can feed any later stage.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use fairlayer_core::dataset::{Column, ColumnKind, Dataset, ProtectedAttribute, Schema, Value};

use crate::error::{Error, Result};

/// Schema document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemaFile {
    pub columns: Vec<ColumnSpec>,
    pub label_column: String,
    pub favorable_label: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub value_maps: BTreeMap<String, BTreeMap<String, String>>,
    /// Free-text dataset metadata (source, collection date, collector);
    /// copied into the loaded dataset's provenance.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub provenance: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
}

impl SchemaFile {
    pub fn from_schema(schema: &Schema, provenance: &BTreeMap<String, String>) -> Self {
        Self {
            columns: schema
                .columns()
                .iter()
                .map(|c| ColumnSpec {
                    name: c.name.clone(),
                    kind: c.kind,
                })
                .collect(),
            label_column: schema.label_column().to_string(),
            favorable_label: schema.favorable_label().to_string(),
            value_maps: schema.value_maps().clone(),
            provenance: provenance.clone(),
        }
    }

    pub fn into_schema(self) -> Result<(Schema, BTreeMap<String, String>)> {
        let columns = self
            .columns
            .into_iter()
            .map(|c| Column::new(c.name, c.kind))
            .collect();
        let schema = Schema::new(
            columns,
            self.label_column,
            self.favorable_label,
            self.value_maps,
        )?;
        Ok((schema, self.provenance))
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_schema(path: &Path) -> Result<(Schema, BTreeMap<String, String>)> {
    read_json::<SchemaFile>(path)?.into_schema()
}

/// What to do with a data row whose label cell is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MissingLabelPolicy {
    /// Reject the file, naming the row.
    #[default]
    Error,
    /// Drop the row and record the count in the dataset provenance.
    Drop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LoadOptions {
    /// Single-character field delimiter.
    pub delimiter: char,
    pub has_header: bool,
    /// Tokens read as missing values (in addition to the empty string).
    pub missing_tokens: Vec<String>,
    pub missing_label: MissingLabelPolicy,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            delimiter: ',',
            has_header: true,
            missing_tokens: vec![String::new()],
            missing_label: MissingLabelPolicy::Error,
        }
    }
}

impl LoadOptions {
    fn is_missing(&self, token: &str) -> bool {
        token.is_empty() || self.missing_tokens.iter().any(|t| t == token)
    }
}

/// Load a delimited file against a schema.
///
/// Value maps are applied to raw tokens before anything else and must
/// cover every non-missing token observed in their column. The label
/// column must end up binary with the favorable label among its observed
/// values.
pub fn load_csv(path: &Path, schema: &Schema, options: &LoadOptions) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter as u8)
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;

    let columns = schema.columns();
    // map schema column -> field position in the file
    let mut positions: Vec<usize> = (0..columns.len()).collect();
    let mut records = reader.records();
    if options.has_header {
        let header = records
            .next()
            .transpose()
            .map_err(|source| Error::Csv {
                path: path.to_path_buf(),
                source,
            })?
            .ok_or(Error::Dataset(
                fairlayer_core::dataset::DatasetError::Empty,
            ))?;
        let names: Vec<&str> = header.iter().collect();
        for (i, col) in columns.iter().enumerate() {
            positions[i] = names
                .iter()
                .position(|n| *n == col.name)
                .ok_or_else(|| Error::MissingHeaderColumn(col.name.clone()))?;
        }
    }

    let label_pos = columns
        .iter()
        .position(|c| c.kind == ColumnKind::BinaryLabel)
        .expect("schema has a label column");

    let mut rows: Vec<Vec<Value>> = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();
    let mut dropped_missing_label = 0usize;
    for (row_idx, record) in records.enumerate() {
        let record = record.map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        if record.len() == 1 && record[0].trim().is_empty() {
            continue; // blank line
        }
        // headerless files must match the schema arity exactly; with a
        // header, extra columns are allowed since fields map by name
        let max_pos = positions.iter().max().copied().unwrap_or(0);
        let arity_ok = if options.has_header {
            record.len() > max_pos
        } else {
            record.len() == columns.len()
        };
        if !arity_ok {
            return Err(Error::RowArity {
                row: row_idx,
                expected: columns.len(),
                actual: record.len(),
            });
        }

        let mut row: Vec<Value> = Vec::with_capacity(columns.len() - 1);
        let mut label: Option<String> = None;
        for (i, col) in columns.iter().enumerate() {
            let raw = record[positions[i]].trim();
            if options.is_missing(raw) {
                if i == label_pos {
                    match options.missing_label {
                        MissingLabelPolicy::Error => {
                            return Err(Error::MissingLabel { row: row_idx })
                        }
                        MissingLabelPolicy::Drop => {
                            label = None;
                            break;
                        }
                    }
                }
                row.push(Value::Missing);
                continue;
            }
            let token = match schema.value_map(&col.name) {
                Some(map) => map
                    .get(raw)
                    .ok_or_else(|| Error::UnmappedToken {
                        row: row_idx,
                        column: col.name.clone(),
                        token: raw.to_string(),
                    })?
                    .clone(),
                None => raw.to_string(),
            };
            match col.kind {
                ColumnKind::BinaryLabel => label = Some(token),
                ColumnKind::Categorical => row.push(Value::Cat(token)),
                ColumnKind::Numeric => {
                    let x: f64 = token.parse().map_err(|_| Error::BadNumber {
                        row: row_idx,
                        column: col.name.clone(),
                        token: token.clone(),
                    })?;
                    row.push(Value::Num(x));
                }
            }
        }
        match label {
            Some(l) => {
                rows.push(row);
                raw_labels.push(l);
            }
            None => dropped_missing_label += 1,
        }
    }

    let mut observed: Vec<String> = raw_labels.clone();
    observed.sort_unstable();
    observed.dedup();
    if observed.len() > 2 {
        return Err(Error::NonBinaryLabel(observed));
    }
    if !rows.is_empty() && !observed.iter().any(|l| l == schema.favorable_label()) {
        return Err(Error::UnknownFavorableLabel {
            favorable: schema.favorable_label().to_string(),
            observed,
        });
    }
    let labels: Vec<bool> = raw_labels
        .iter()
        .map(|l| l == schema.favorable_label())
        .collect();

    let mut provenance = BTreeMap::new();
    provenance.insert("source".to_string(), path.display().to_string());
    if dropped_missing_label > 0 {
        provenance.insert(
            "rows_dropped_missing_label".to_string(),
            dropped_missing_label.to_string(),
        );
    }
    Ok(Dataset::with_unit_weights(
        schema.clone(),
        rows,
        labels,
        provenance,
    )?)
}

/// One snapshot cell: JSON string, number, or null.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SnapshotCell {
    Num(f64),
    Cat(String),
}

fn to_snapshot_cell(value: &Value) -> Option<SnapshotCell> {
    match value {
        Value::Cat(s) => Some(SnapshotCell::Cat(s.clone())),
        Value::Num(x) => Some(SnapshotCell::Num(*x)),
        Value::Missing => None,
    }
}

fn from_snapshot_cell(cell: Option<SnapshotCell>) -> Value {
    match cell {
        Some(SnapshotCell::Cat(s)) => Value::Cat(s),
        Some(SnapshotCell::Num(x)) => Value::Num(x),
        None => Value::Missing,
    }
}

/// Self-describing dataset snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSnapshot {
    pub schema: SchemaFile,
    pub rows: Vec<Vec<Option<SnapshotCell>>>,
    /// 1 = favorable.
    pub labels: Vec<u8>,
    pub weights: Vec<f64>,
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

impl DatasetSnapshot {
    pub fn from_dataset(dataset: &Dataset) -> Self {
        Self {
            schema: SchemaFile::from_schema(dataset.schema(), &BTreeMap::new()),
            rows: dataset
                .rows()
                .iter()
                .map(|r| r.iter().map(to_snapshot_cell).collect())
                .collect(),
            labels: dataset.labels().iter().map(|l| u8::from(*l)).collect(),
            weights: dataset.weights().to_vec(),
            provenance: dataset.provenance().clone(),
        }
    }

    pub fn into_dataset(self) -> Result<Dataset> {
        let (schema, _) = self.schema.into_schema()?;
        let rows = self
            .rows
            .into_iter()
            .map(|r| r.into_iter().map(from_snapshot_cell).collect())
            .collect();
        let labels = self.labels.into_iter().map(|l| l != 0).collect();
        Ok(Dataset::new(
            schema,
            rows,
            labels,
            self.weights,
            self.provenance,
        )?)
    }
}

pub fn save_snapshot(dataset: &Dataset, path: &Path) -> Result<()> {
    write_json(path, &DatasetSnapshot::from_dataset(dataset))
}

pub fn load_snapshot(path: &Path) -> Result<Dataset> {
    read_json::<DatasetSnapshot>(path)?.into_dataset()
}

/// Load a dataset from either a snapshot (`.json`) or a delimited file
/// (anything else, requiring a schema).
pub fn load_dataset(
    path: &Path,
    schema: Option<&Schema>,
    options: &LoadOptions,
) -> Result<Dataset> {
    if path.extension().is_some_and(|e| e == "json") {
        load_snapshot(path)
    } else {
        let schema = schema.ok_or_else(|| {
            Error::Config(format!(
                "loading {} requires a schema document",
                path.display()
            ))
        })?;
        load_csv(path, schema, options)
    }
}

/// Protected attribute as configured in audit and schema documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSpec {
    pub column: String,
    pub privileged: Vec<String>,
    pub unprivileged: Vec<String>,
}

impl AttributeSpec {
    pub fn into_attribute(self) -> Result<ProtectedAttribute> {
        Ok(ProtectedAttribute::new(
            self.column,
            self.privileged,
            self.unprivileged,
        )?)
    }
}
