//! Audit configuration: one committable JSON document drives a full run.
//!
//! Paths inside a config resolve relative to the config file's directory,
//! so a fixture tree keeps working from any working directory. An explicit
//! seed passed on the command line overrides every seed in the file
//! (split, model, resampling) to keep "same invocation, same report"
//! trivially true.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use fairlayer_core::dataset::{Dataset, ProtectedAttribute, Schema};
use fairlayer_core::metrics::MetricId;
use fairlayer_core::mitigation::ResampleStrategy;
use fairlayer_core::model::{ModelConfig, SplitSpec, SplitStrategy};

use crate::error::{Error, Result};
use crate::formats::{self, AttributeSpec, LoadOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitSettings {
    pub train: f64,
    pub test: f64,
    pub validation: f64,
    pub strategy: SplitStrategy,
    pub seed: u64,
}

impl Default for SplitSettings {
    fn default() -> Self {
        Self {
            train: 0.7,
            test: 0.3,
            validation: 0.0,
            strategy: SplitStrategy::Random,
            seed: 42,
        }
    }
}

impl SplitSettings {
    pub fn to_spec(&self, seed_override: Option<u64>) -> SplitSpec {
        SplitSpec {
            train: self.train,
            test: self.test,
            validation: self.validation,
            strategy: self.strategy,
            seed: seed_override.unwrap_or(self.seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelSettings {
    pub learning_rate: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub l2_penalty: f64,
    pub classification_threshold: f64,
    pub seed: u64,
}

impl Default for ModelSettings {
    fn default() -> Self {
        let d = ModelConfig::default();
        Self {
            learning_rate: d.learning_rate,
            max_iterations: d.max_iterations,
            tolerance: d.tolerance,
            l2_penalty: d.l2_penalty,
            classification_threshold: d.classification_threshold,
            seed: d.seed,
        }
    }
}

impl ModelSettings {
    pub fn to_config(&self, seed_override: Option<u64>) -> ModelConfig {
        ModelConfig {
            learning_rate: self.learning_rate,
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            l2_penalty: self.l2_penalty,
            classification_threshold: self.classification_threshold,
            seed: seed_override.unwrap_or(self.seed),
        }
    }
}

/// Pre-processing mitigation directive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MitigationSpec {
    Reweigh,
    Resample { strategy: ResampleStrategy, seed: u64 },
}

fn default_metrics() -> Vec<MetricId> {
    MetricId::ALL.to_vec()
}

fn default_tolerance() -> f64 {
    fairlayer_core::rating::DEFAULT_TOLERANCE
}

fn default_drift_threshold() -> f64 {
    fairlayer_core::drift::DEFAULT_DRIFT_THRESHOLD
}

fn default_missing_threshold() -> f64 {
    fairlayer_core::dataset::DEFAULT_MISSING_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    /// Dataset file: a snapshot (`.json`) or a delimited file.
    pub dataset: PathBuf,
    /// Schema document; required for delimited datasets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<PathBuf>,
    #[serde(default)]
    pub load: LoadOptions,
    pub protected_attributes: Vec<AttributeSpec>,
    #[serde(default)]
    pub split: SplitSettings,
    #[serde(default)]
    pub model: ModelSettings,
    /// Metrics to compute and rate.
    #[serde(default = "default_metrics")]
    pub metrics: Vec<MetricId>,
    /// Bias tolerance for layer-6 certification: pass iff B <= tolerance.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_drift_threshold")]
    pub drift_threshold: f64,
    #[serde(default = "default_missing_threshold")]
    pub missing_threshold: f64,
    /// Checklist response files keyed by layer ("1".."7"); layers without
    /// a file count as unanswered.
    #[serde(default)]
    pub checklists: BTreeMap<String, PathBuf>,
    /// Custom checklist definitions; the bundled seven-layer set when
    /// absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checklist_definitions: Option<PathBuf>,
    /// Item ids exempted from gating for this audit.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub optional_items: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mitigation: Option<MitigationSpec>,
    /// Production data for the layer-7 drift check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub production_data: Option<PathBuf>,
}

impl AuditConfig {
    /// Read a config and resolve its paths against the config directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut config: AuditConfig = formats::read_json(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        config.resolve_paths(base);
        config.validate()?;
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&p);
            }
        };
        resolve(&mut self.dataset);
        if let Some(schema) = &mut self.schema {
            resolve(schema);
        }
        for path in self.checklists.values_mut() {
            resolve(path);
        }
        if let Some(defs) = &mut self.checklist_definitions {
            resolve(defs);
        }
        if let Some(prod) = &mut self.production_data {
            resolve(prod);
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.tolerance) {
            return Err(Error::Config(format!(
                "tolerance {} outside [0, 1]",
                self.tolerance
            )));
        }
        if self.protected_attributes.is_empty() {
            return Err(Error::Config(
                "at least one protected attribute is required".to_string(),
            ));
        }
        if self.metrics.is_empty() {
            return Err(Error::Config("metric selection is empty".to_string()));
        }
        for key in self.checklists.keys() {
            match key.parse::<u8>() {
                Ok(1..=7) => {}
                _ => {
                    return Err(Error::Config(format!(
                        "checklist key '{key}' is not a layer in 1..=7"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn attributes(&self) -> Result<Vec<ProtectedAttribute>> {
        self.protected_attributes
            .iter()
            .cloned()
            .map(AttributeSpec::into_attribute)
            .collect()
    }

    /// Load the schema document, when configured.
    pub fn load_schema(&self) -> Result<Option<(Schema, BTreeMap<String, String>)>> {
        match &self.schema {
            Some(path) => Ok(Some(formats::load_schema(path)?)),
            None => Ok(None),
        }
    }

    /// Load the audit dataset, folding schema provenance into the
    /// dataset's own.
    pub fn load_dataset(&self) -> Result<Dataset> {
        let schema = self.load_schema()?;
        let ds = formats::load_dataset(
            &self.dataset,
            schema.as_ref().map(|(s, _)| s),
            &self.load,
        )?;
        match schema {
            Some((_, provenance)) if !provenance.is_empty() => {
                let mut merged = ds.provenance().clone();
                merged.extend(provenance);
                Ok(Dataset::new(
                    ds.schema().clone(),
                    ds.rows().to_vec(),
                    ds.labels().to_vec(),
                    ds.weights().to_vec(),
                    merged,
                )?)
            }
            _ => Ok(ds),
        }
    }

    pub fn load_production(&self) -> Result<Option<Dataset>> {
        match &self.production_data {
            None => Ok(None),
            Some(path) => {
                let schema = self.load_schema()?;
                Ok(Some(formats::load_dataset(
                    path,
                    schema.as_ref().map(|(s, _)| s),
                    &self.load,
                )?))
            }
        }
    }
}
