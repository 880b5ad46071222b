//! The seven-layer audit pipeline.
//!
//! `run_audit` executes, in order: the layer-1 checklist; layer 2 with
//! dataset profile, validation, and dataset-level metrics; layer 3 with
//! optional mitigation and post-mitigation metrics; the layer-4 checklist;
//! layer 5 with split, training, prediction, model-level metrics, and
//! performance; layer 6 with the Bias Index / Fairness Score rating and
//! certification; layer 7 with the production drift check. Layers 1 and 4
//! are checklist-only. The whole run is deterministic given the config's
//! seeds: reports from identical configurations are byte-identical except
//! for the timestamp.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use fairlayer_core::checklist::{
    evaluate_layer, ChecklistDefinition, ChecklistResponse, LayerVerdict, Verdict,
};
use fairlayer_core::dataset::{Dataset, DatasetProfile, ProtectedAttribute, ValidationReport};
use fairlayer_core::drift::{drift_check, DriftReport};
use fairlayer_core::metrics::{evaluate_all, MetricId, MetricReport, MetricValue, Outcome};
use fairlayer_core::mitigation::{reweigh, resample, ResampleLog, WeightPlan};
use fairlayer_core::model::{predict, split, train, PerfReport, SplitStrategy};
use fairlayer_core::rating::{bias_index, fairness_score, RatingResult};

use crate::checklists;
use crate::config::{AuditConfig, MitigationSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    /// RFC 3339 creation time; the single field excluded from determinism
    /// guarantees.
    pub timestamp: String,
    pub tool_version: String,
    /// SHA-256 over the effective configuration (after seed overrides).
    pub config_digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub strategy: SplitStrategy,
    pub seed: u64,
    pub train_rows: usize,
    pub test_rows: usize,
    pub validation_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSummary {
    pub iterations: usize,
    pub final_loss: f64,
    pub converged: bool,
    /// Loss-log entries that increased: a nonzero value flags a too-large
    /// learning rate.
    pub loss_increases: usize,
    /// Categorical cells that fell back to the all-zeros encoding when
    /// scoring the test part.
    pub encoding_fallbacks: usize,
}

/// What layer-3 mitigation did. With several protected attributes the
/// transforms compose in configuration order, one entry per attribute;
/// only the last attribute's parity is exactly zeroed then.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MitigationOutcome {
    pub directive: MitigationSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub weight_plans: BTreeMap<String, WeightPlan>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub resample_logs: BTreeMap<String, ResampleLog>,
    /// Dataset-level metrics recomputed on the mitigated data.
    pub mitigated_metrics: MetricReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub tolerance: f64,
    /// True iff the overall Bias Index is within tolerance.
    pub certified: bool,
}

/// One layer's slice of the report: its checklist verdict plus whatever
/// quantitative results the layer produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSection {
    pub layer: u8,
    pub name: String,
    pub checklist: LayerVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<DatasetProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    /// Dataset-level metrics on the data as loaded (pre-mitigation).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dataset_metrics: Option<MetricReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mitigation: Option<MitigationOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub training: Option<TrainingSummary>,
    /// Model-level metrics on the held-out test part.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_metrics: Option<MetricReport>,
    /// Model-level metrics over the full dataset, reported alongside the
    /// test-part numbers for comparison.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_metrics_full: Option<MetricReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub performance: Option<PerfReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rating: Option<RatingResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certification: Option<Certification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift: Option<DriftReport>,
}

impl LayerSection {
    fn new(layer: u8, name: &str, checklist: LayerVerdict) -> Self {
        Self {
            layer,
            name: name.to_string(),
            checklist,
            profile: None,
            validation: None,
            dataset_metrics: None,
            mitigation: None,
            split: None,
            training: None,
            model_metrics: None,
            model_metrics_full: None,
            performance: None,
            rating: None,
            certification: None,
            drift: None,
        }
    }
}

/// Full audit output; serializes loss-lessly to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub metadata: ReportMetadata,
    pub layers: Vec<LayerSection>,
    pub overall_verdict: Verdict,
}

impl AuditReport {
    pub fn layer(&self, layer: u8) -> Option<&LayerSection> {
        self.layers.iter().find(|l| l.layer == layer)
    }

    pub fn rating(&self) -> Option<&RatingResult> {
        self.layer(6)?.rating.as_ref()
    }

    /// Recompute the overall verdict from the report's own parts.
    pub fn recomputed_verdict(&self) -> Verdict {
        let verdicts = self.layers.iter().map(|l| l.checklist.verdict);
        let certified = self
            .layer(6)
            .and_then(|l| l.certification.as_ref())
            .map(|c| c.certified)
            .unwrap_or(false);
        combine_verdicts(verdicts, certified)
    }
}

fn combine_verdicts(layers: impl Iterator<Item = Verdict>, certified: bool) -> Verdict {
    let mut any_fail = false;
    let mut any_incomplete = false;
    for v in layers {
        match v {
            Verdict::Fail => any_fail = true,
            Verdict::Incomplete => any_incomplete = true,
            Verdict::Pass => {}
        }
    }
    if !any_fail && !any_incomplete && certified {
        Verdict::Pass
    } else if any_fail || !certified {
        Verdict::Fail
    } else {
        Verdict::Incomplete
    }
}

/// Runtime knobs that override the config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Overrides every seed in the config (split, model, resample).
    pub seed: Option<u64>,
}

fn checklist_verdict(
    defs: &[ChecklistDefinition],
    responses: &BTreeMap<u8, ChecklistResponse>,
    layer: u8,
) -> Result<LayerVerdict> {
    let def = defs
        .iter()
        .find(|d| d.layer == layer)
        .ok_or_else(|| Error::Config(format!("no checklist definition for layer {layer}")))?;
    let empty = ChecklistResponse {
        layer,
        answers: BTreeMap::new(),
    };
    let response = responses.get(&layer).unwrap_or(&empty);
    Ok(evaluate_layer(def, response)?)
}

fn rating_values(
    dataset_metrics: &MetricReport,
    model_metrics: &MetricReport,
    attrs: &[ProtectedAttribute],
    selection: &[MetricId],
) -> Result<RatingResult> {
    let mut ratings = Vec::new();
    for attr in attrs {
        let mut values: Vec<MetricValue> = Vec::new();
        for report in [dataset_metrics, model_metrics] {
            if let Some(entry) = report.entry(attr.column()) {
                if let Some(error) = &entry.error {
                    return Err(Error::Config(format!(
                        "cannot rate attribute '{}': {error}",
                        attr.column()
                    )));
                }
                values.extend(entry.values.iter().cloned());
            }
        }
        // dataset-level outcome metrics + model-level confusion metrics:
        // drop the placeholder sentinels the dataset-level pass carries
        // for confusion metrics, and the model-level duplicates of SPD/DI
        let rated: Vec<MetricValue> = values
            .into_iter()
            .filter(|v| {
                let model_side = v.id.needs_confusion();
                let from_model = v.level == fairlayer_core::metrics::MetricLevel::Model;
                (model_side == from_model) && selection.contains(&v.id)
            })
            .collect();
        ratings.push(bias_index(attr.column(), &rated)?);
    }
    Ok(fairness_score(ratings)?)
}

/// Execute the full seven-layer audit described by `config`.
pub fn run_audit(config: &AuditConfig, options: RunOptions) -> Result<AuditReport> {
    let mut effective = config.clone();
    if let Some(seed) = options.seed {
        effective.split.seed = seed;
        effective.model.seed = seed;
        if let Some(MitigationSpec::Resample { seed: s, .. }) = &mut effective.mitigation {
            *s = seed;
        }
    }
    let config = &effective;

    let attrs = config.attributes()?;
    let (defs, _warnings) = checklists::definitions_for_audit(
        config.checklist_definitions.as_deref(),
        &config.optional_items,
    )?;
    let responses = checklists::load_responses(&config.checklists)?;
    let verdict_for = |layer: u8| checklist_verdict(&defs, &responses, layer);
    let layer_name = |layer: u8| {
        defs.iter()
            .find(|d| d.layer == layer)
            .map(|d| d.name.clone())
            .unwrap_or_default()
    };

    // layer 1: requirements and context (checklist only)
    let layer1 = LayerSection::new(1, &layer_name(1), verdict_for(1).map_err(|e| e.in_layer(1))?);

    // layer 2: data selection: profile, validation, dataset-level metrics
    let dataset = config.load_dataset().map_err(|e| e.in_layer(2))?;
    let mut layer2 =
        LayerSection::new(2, &layer_name(2), verdict_for(2).map_err(|e| e.in_layer(2))?);
    layer2.profile = Some(dataset.profile(&attrs));
    layer2.validation = Some(dataset.validate(config.missing_threshold));
    let dataset_metrics = evaluate_all(&dataset, &attrs, Outcome::Labels, &config.metrics);
    layer2.dataset_metrics = Some(dataset_metrics.clone());

    // layer 3: pre-processing, with optional mitigation
    let mut layer3 =
        LayerSection::new(3, &layer_name(3), verdict_for(3).map_err(|e| e.in_layer(3))?);
    let working = match &config.mitigation {
        None => dataset.clone(),
        Some(directive) => {
            let mut out = dataset.clone();
            let mut weight_plans = BTreeMap::new();
            let mut resample_logs = BTreeMap::new();
            for attr in &attrs {
                match directive {
                    MitigationSpec::Reweigh => {
                        let (next, plan) =
                            reweigh(&out, attr).map_err(|e| Error::from(e).in_layer(3))?;
                        out = next;
                        weight_plans.insert(attr.column().to_string(), plan);
                    }
                    MitigationSpec::Resample { strategy, seed } => {
                        let (next, log) = resample(&out, attr, *strategy, *seed)
                            .map_err(|e| Error::from(e).in_layer(3))?;
                        out = next;
                        resample_logs.insert(attr.column().to_string(), log);
                    }
                }
            }
            let mitigated_metrics = evaluate_all(&out, &attrs, Outcome::Labels, &config.metrics);
            layer3.mitigation = Some(MitigationOutcome {
                directive: *directive,
                weight_plans,
                resample_logs,
                mitigated_metrics,
            });
            out
        }
    };

    // layer 4: algorithm selection (checklist only)
    let layer4 = LayerSection::new(4, &layer_name(4), verdict_for(4).map_err(|e| e.in_layer(4))?);

    // layer 5: split, train, predict, model metrics, performance
    let mut layer5 =
        LayerSection::new(5, &layer_name(5), verdict_for(5).map_err(|e| e.in_layer(5))?);
    let split_spec = config.split.to_spec(options.seed);
    let parts = split(&working, &split_spec, &attrs[0]).map_err(|e| Error::from(e).in_layer(5))?;
    layer5.split = Some(SplitSummary {
        strategy: split_spec.strategy,
        seed: split_spec.seed,
        train_rows: parts.train.len(),
        test_rows: parts.test.as_ref().map_or(0, Dataset::len),
        validation_rows: parts.validation.as_ref().map_or(0, Dataset::len),
    });
    let model_config = config.model.to_config(options.seed);
    let model = train(&parts.train, &model_config).map_err(|e| Error::from(e).in_layer(5))?;
    // model-level metrics are computed on the held-out test part; fall
    // back to the training part when the split has no test share
    let eval_part = parts.test.as_ref().unwrap_or(&parts.train);
    let predictions = predict(&model, eval_part).map_err(|e| Error::from(e).in_layer(5))?;
    layer5.training = Some(TrainingSummary {
        iterations: model.loss_log.len(),
        final_loss: *model.loss_log.last().unwrap_or(&f64::NAN),
        converged: model.converged,
        loss_increases: model.loss_increases(),
        encoding_fallbacks: predictions.encoding_fallbacks,
    });
    let model_metrics = evaluate_all(
        eval_part,
        &attrs,
        Outcome::Predictions(&predictions.labels),
        &config.metrics,
    );
    layer5.model_metrics = Some(model_metrics.clone());
    let full_predictions = predict(&model, &working).map_err(|e| Error::from(e).in_layer(5))?;
    layer5.model_metrics_full = Some(evaluate_all(
        &working,
        &attrs,
        Outcome::Predictions(&full_predictions.labels),
        &config.metrics,
    ));
    layer5.performance = Some(
        fairlayer_core::model::performance(
            eval_part.labels(),
            &predictions.labels,
            eval_part.weights(),
        )
        .map_err(|e| Error::from(e).in_layer(5))?,
    );

    // layer 6: rating over the audited pipeline (post-mitigation
    // dataset-level SPD/DI plus model-level EOD/EMOD/AOD)
    let mut layer6 =
        LayerSection::new(6, &layer_name(6), verdict_for(6).map_err(|e| e.in_layer(6))?);
    let rated_dataset_metrics = layer3
        .mitigation
        .as_ref()
        .map(|m| &m.mitigated_metrics)
        .unwrap_or(&dataset_metrics);
    let rating = rating_values(rated_dataset_metrics, &model_metrics, &attrs, &config.metrics)
        .map_err(|e| e.in_layer(6))?;
    let certification = Certification {
        tolerance: config.tolerance,
        certified: rating.certified(config.tolerance),
    };
    layer6.rating = Some(rating);
    layer6.certification = Some(certification);

    // layer 7: drift against production data when available
    let mut layer7 =
        LayerSection::new(7, &layer_name(7), verdict_for(7).map_err(|e| e.in_layer(7))?);
    if let Some(production) = config.load_production().map_err(|e| e.in_layer(7))? {
        let report = drift_check(&parts.train, &production, &attrs, config.drift_threshold)
            .map_err(|e| Error::from(e).in_layer(7))?;
        layer7.drift = Some(report);
    }

    let layers = vec![layer1, layer2, layer3, layer4, layer5, layer6, layer7];
    let overall_verdict = combine_verdicts(
        layers.iter().map(|l| l.checklist.verdict),
        layer6_certified(&layers),
    );

    Ok(AuditReport {
        metadata: ReportMetadata {
            timestamp: chrono::Utc::now().to_rfc3339(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_digest: config_digest(config)?,
        },
        layers,
        overall_verdict,
    })
}

fn layer6_certified(layers: &[LayerSection]) -> bool {
    layers
        .iter()
        .find(|l| l.layer == 6)
        .and_then(|l| l.certification.as_ref())
        .map(|c| c.certified)
        .unwrap_or(false)
}

/// SHA-256 of the effective config's canonical JSON.
pub fn config_digest(config: &AuditConfig) -> Result<String> {
    let bytes = serde_json::to_vec(config)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}
