//! Error type shared by the IO layer, the pipeline, and the CLI.

use std::path::PathBuf;

use fairlayer_core::checklist::ChecklistError;
use fairlayer_core::dataset::DatasetError;
use fairlayer_core::drift::DriftError;
use fairlayer_core::metrics::MetricError;
use fairlayer_core::mitigation::MitigationError;
use fairlayer_core::model::ModelError;
use fairlayer_core::rating::RatingError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("failed to write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid json in {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("failed to serialize output: {0}")]
    Serialize(#[from] serde_json::Error),
    #[error("csv error in {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("row {row}: expected {expected} fields, found {actual}")]
    RowArity {
        row: usize,
        expected: usize,
        actual: usize,
    },
    #[error("row {row}: column '{column}' has unmapped token '{token}'")]
    UnmappedToken {
        row: usize,
        column: String,
        token: String,
    },
    #[error("row {row}: column '{column}' has non-numeric token '{token}'")]
    BadNumber {
        row: usize,
        column: String,
        token: String,
    },
    #[error("row {row}: missing label")]
    MissingLabel { row: usize },
    #[error("favorable label '{favorable}' never occurs in the label column (observed: {observed:?})")]
    UnknownFavorableLabel {
        favorable: String,
        observed: Vec<String>,
    },
    #[error("label column has more than two distinct values: {0:?}")]
    NonBinaryLabel(Vec<String>),
    #[error("header is missing column '{0}'")]
    MissingHeaderColumn(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Mitigation(#[from] MitigationError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Rating(#[from] RatingError),
    #[error(transparent)]
    Checklist(#[from] ChecklistError),
    #[error(transparent)]
    Drift(#[from] DriftError),
    #[error("layer {layer}: {source}")]
    Layer { layer: u8, source: Box<Error> },
}

impl Error {
    /// Tag an error with the audit layer it arose in.
    pub fn in_layer(self, layer: u8) -> Self {
        Error::Layer {
            layer,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
