//! Report rendering: loss-less JSON and human-readable Markdown.
//!
//! JSON output re-parses to an equal `AuditReport`. The Markdown layout is
//! stable line-for-line for a given report, so golden-file comparisons in
//! CI stay meaningful. Undefined metric values print as the word
//! `undefined`, never as a number.

use std::fmt::Write as _;

use fairlayer_core::metrics::{AttributeMetrics, MetricReport};
use fairlayer_core::rating::RatingResult;

use crate::error::Result;
use crate::pipeline::{AuditReport, LayerSection};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown format '{other}' (expected json or markdown)")),
        }
    }
}

pub fn render(report: &AuditReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => render_json(report),
        ReportFormat::Markdown => Ok(render_markdown(report)),
    }
}

pub fn render_json(report: &AuditReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

pub fn parse_json(text: &str) -> Result<AuditReport> {
    Ok(serde_json::from_str(text)?)
}

fn fmt_value(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.4}"),
        None => "undefined".to_string(),
    }
}

fn metric_table(out: &mut String, report: &MetricReport) {
    let _ = writeln!(out, "| attribute | metric | value | level |");
    let _ = writeln!(out, "|---|---|---|---|");
    for entry in &report.entries {
        write_entry_rows(out, entry);
    }
    let _ = writeln!(out);
}

fn write_entry_rows(out: &mut String, entry: &AttributeMetrics) {
    if let Some(error) = &entry.error {
        let _ = writeln!(out, "| {} | — | error: {} | — |", entry.attribute, error);
        return;
    }
    for value in &entry.values {
        let level = match value.level {
            fairlayer_core::metrics::MetricLevel::Dataset => "dataset",
            fairlayer_core::metrics::MetricLevel::Model => "model",
        };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            entry.attribute,
            value.id.code(),
            fmt_value(value.value),
            level
        );
    }
    if entry.exclusions.unknown_group > 0 {
        let _ = writeln!(
            out,
            "| {} | excluded rows (missing attribute) | {} | — |",
            entry.attribute, entry.exclusions.unknown_group
        );
    }
    for note in &entry.notes {
        let _ = writeln!(out, "| {} | note | {} | — |", entry.attribute, note);
    }
}

fn rating_section(out: &mut String, rating: &RatingResult) {
    let _ = writeln!(out, "**Bias Index:** {:.4}", rating.bias_index);
    let _ = writeln!(out, "**Fairness Score:** {:.4}", rating.fairness_score);
    let _ = writeln!(out);
    let _ = writeln!(out, "| attribute | metric | raw value | deviation |");
    let _ = writeln!(out, "|---|---|---|---|");
    for attr in &rating.attributes {
        for d in &attr.deviations {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {:.4} |",
                attr.attribute,
                d.metric.code(),
                fmt_value(d.raw),
                d.deviation
            );
        }
        let _ = writeln!(
            out,
            "| {} | bias index | {:.4} | |",
            attr.attribute, attr.bias_index
        );
    }
    let _ = writeln!(out);
}

fn layer_section(out: &mut String, layer: &LayerSection) {
    let _ = writeln!(out, "## Layer {}: {}", layer.layer, layer.name);
    let _ = writeln!(out);
    let _ = writeln!(out, "**Checklist verdict:** {}", layer.checklist.verdict);
    if !layer.checklist.failing.is_empty() {
        let _ = writeln!(out, "- failing items: {}", layer.checklist.failing.join(", "));
    }
    if !layer.checklist.missing.is_empty() {
        let _ = writeln!(
            out,
            "- unanswered items: {}",
            layer.checklist.missing.join(", ")
        );
    }
    let _ = writeln!(out);

    if let Some(validation) = &layer.validation {
        let _ = writeln!(
            out,
            "**Data validation:** {} rows, {} duplicate rows, incomplete: {}",
            validation.rows, validation.duplicate_rows, validation.incomplete
        );
        let _ = writeln!(out);
    }
    if let Some(profile) = &layer.profile {
        let _ = writeln!(out, "**Group profile:**");
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "| attribute | privileged n | unprivileged n | privileged rate | unprivileged rate |"
        );
        let _ = writeln!(out, "|---|---|---|---|---|");
        for attr in &profile.attributes {
            match &attr.stats {
                Some(s) => {
                    let _ = writeln!(
                        out,
                        "| {} | {} | {} | {:.4} | {:.4} |",
                        attr.attribute,
                        s.privileged_size,
                        s.unprivileged_size,
                        s.privileged_base_rate,
                        s.unprivileged_base_rate
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "| {} | error: {} | | | |",
                        attr.attribute,
                        attr.error.as_deref().unwrap_or("unknown")
                    );
                }
            }
        }
        let _ = writeln!(out);
    }
    if let Some(metrics) = &layer.dataset_metrics {
        let _ = writeln!(out, "**Dataset-level fairness metrics:**");
        let _ = writeln!(out);
        metric_table(out, metrics);
    }
    if let Some(mitigation) = &layer.mitigation {
        let _ = writeln!(out, "**Mitigation applied:** {:?}", mitigation.directive);
        let _ = writeln!(out);
        for (attr, log) in &mitigation.resample_logs {
            let _ = writeln!(
                out,
                "- {}: +{} / −{} rows ({} → {})",
                attr, log.rows_added, log.rows_removed, log.rows_before, log.rows_after
            );
        }
        let _ = writeln!(out, "**Post-mitigation dataset-level metrics:**");
        let _ = writeln!(out);
        metric_table(out, &mitigation.mitigated_metrics);
    }
    if let Some(split) = &layer.split {
        let _ = writeln!(
            out,
            "**Split:** {:?}, seed {}, train/test/validation = {}/{}/{}",
            split.strategy, split.seed, split.train_rows, split.test_rows, split.validation_rows
        );
        let _ = writeln!(out);
    }
    if let Some(training) = &layer.training {
        let _ = writeln!(
            out,
            "**Training:** {} iterations, final loss {:.6}, converged: {}",
            training.iterations, training.final_loss, training.converged
        );
        let _ = writeln!(out);
    }
    if let Some(metrics) = &layer.model_metrics {
        let _ = writeln!(out, "**Model-level fairness metrics (test part):**");
        let _ = writeln!(out);
        metric_table(out, metrics);
    }
    if let Some(metrics) = &layer.model_metrics_full {
        let _ = writeln!(out, "**Model-level fairness metrics (full dataset):**");
        let _ = writeln!(out);
        metric_table(out, metrics);
    }
    if let Some(perf) = &layer.performance {
        let _ = writeln!(
            out,
            "**Performance:** accuracy {:.4}, precision {}, recall {}, f1 {}",
            perf.accuracy,
            fmt_value(perf.precision),
            fmt_value(perf.recall),
            fmt_value(perf.f1)
        );
        let _ = writeln!(out);
    }
    if let Some(rating) = &layer.rating {
        let _ = writeln!(out, "**Rating:**");
        let _ = writeln!(out);
        rating_section(out, rating);
    }
    if let Some(cert) = &layer.certification {
        let _ = writeln!(
            out,
            "**Certification:** tolerance {:.4}, certified: {}",
            cert.tolerance, cert.certified
        );
        let _ = writeln!(out);
    }
    if let Some(drift) = &layer.drift {
        let _ = writeln!(out, "**Drift (threshold {:.4}):**", drift.threshold);
        let _ = writeln!(out);
        let _ = writeln!(out, "| attribute | TVD | flagged |");
        let _ = writeln!(out, "|---|---|---|");
        for attr in &drift.attributes {
            let _ = writeln!(
                out,
                "| {} | {:.4} | {} |",
                attr.attribute, attr.tvd, attr.flagged
            );
        }
        let _ = writeln!(out);
    }
}

/// Render the full report as Markdown: every layer verdict, the metric
/// tables, the rating with its deviation breakdown, and the config digest.
pub fn render_markdown(report: &AuditReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Fairness Audit Report");
    let _ = writeln!(out);
    let _ = writeln!(out, "- generated: {}", report.metadata.timestamp);
    let _ = writeln!(out, "- tool version: {}", report.metadata.tool_version);
    let _ = writeln!(out, "- config digest: {}", report.metadata.config_digest);
    let _ = writeln!(out, "- **overall verdict: {}**", report.overall_verdict);
    let _ = writeln!(out);
    for layer in &report.layers {
        layer_section(&mut out, layer);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use fairlayer_core::checklist::{LayerVerdict, Verdict};
    use fairlayer_core::metrics::{
        GroupExclusions, MetricId, MetricLevel, MetricReport, MetricValue,
    };
    use crate::pipeline::ReportMetadata;

    fn tiny_report() -> AuditReport {
        let metrics = MetricReport {
            level: MetricLevel::Dataset,
            entries: vec![fairlayer_core::metrics::AttributeMetrics {
                attribute: "g".to_string(),
                values: vec![
                    MetricValue {
                        id: MetricId::StatisticalParityDifference,
                        value: Some(-0.4166666666666667),
                        level: MetricLevel::Dataset,
                    },
                    MetricValue {
                        id: MetricId::DisparateImpact,
                        value: None,
                        level: MetricLevel::Dataset,
                    },
                ],
                exclusions: GroupExclusions::default(),
                error: None,
                notes: vec![],
            }],
        };
        let mut layer2 = crate::pipeline::LayerSection {
            layer: 2,
            name: "Data Collection and Selection Layer".to_string(),
            checklist: LayerVerdict {
                layer: 2,
                verdict: Verdict::Pass,
                failing: vec![],
                missing: vec![],
            },
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
        };
        layer2.dataset_metrics = Some(metrics);
        AuditReport {
            metadata: ReportMetadata {
                timestamp: "2026-01-01T00:00:00+00:00".to_string(),
                tool_version: "0.0.0".to_string(),
                config_digest: "abc123".to_string(),
            },
            layers: vec![layer2],
            overall_verdict: Verdict::Pass,
        }
    }

    #[test]
    fn json_round_trips_to_equal_report() {
        let report = tiny_report();
        let json = render_json(&report).unwrap();
        let back = parse_json(&json).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn markdown_prints_undefined_sentinels_as_words() {
        let md = render_markdown(&tiny_report());
        assert!(md.contains("| g | DI | undefined | dataset |"));
        assert!(!md.contains("NaN"));
    }

    #[test]
    fn markdown_layout_is_stable() {
        let md = render_markdown(&tiny_report());
        let expected = "\
# Fairness Audit Report

- generated: 2026-01-01T00:00:00+00:00
- tool version: 0.0.0
- config digest: abc123
- **overall verdict: pass**

## Layer 2: Data Collection and Selection Layer

**Checklist verdict:** pass

**Dataset-level fairness metrics:**

| attribute | metric | value | level |
|---|---|---|---|
| g | SPD | -0.4167 | dataset |
| g | DI | undefined | dataset |

";
        assert_eq!(md, expected);
    }
}
