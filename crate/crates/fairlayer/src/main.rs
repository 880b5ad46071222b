//! Command-line surface for auditors and CI pipelines.
//!
//! Machine-readable output (JSON) goes to stdout or `--out`; everything
//! meant for humans goes to stderr. Exit codes: 0 success or audit pass,
//! 1 audit ran but the verdict is fail or incomplete, 2 usage error,
//! 3 runtime error (IO, parse, numeric).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fairlayer::core::checklist::{bundled_definitions, evaluate_layer, validate_response, Verdict};
use fairlayer::core::drift::drift_check;
use fairlayer::core::metrics::{evaluate_all, MetricReport, Outcome};
use fairlayer::core::mitigation::{reweigh, resample};
use fairlayer::core::model::{predict, split, train, TrainedModel};
use fairlayer::core::rating::{bias_index, fairness_score};
use fairlayer::config::{AuditConfig, MitigationSpec};
use fairlayer::error::Error;
use fairlayer::pipeline::{run_audit, RunOptions};
use fairlayer::report::{parse_json, render, render_json, ReportFormat};
use fairlayer::{checklists, formats};

const EXIT_VERDICT: u8 = 1;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fairlayer",
    version,
    about = "Seven-layer fairness audits for tabular ML systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Audit configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides every seed in the config (split, model, resampling).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write machine output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for reports.
    #[arg(long, global = true, default_value = "json")]
    format: ReportFormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ReportFormatArg {
    Json,
    Markdown,
}

impl From<ReportFormatArg> for ReportFormat {
    fn from(f: ReportFormatArg) -> Self {
        match f {
            ReportFormatArg::Json => ReportFormat::Json,
            ReportFormatArg::Markdown => ReportFormat::Markdown,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Profile and validate the configured dataset.
    Inspect(Common),
    /// Compute fairness metrics (dataset-level, or model-level with
    /// --predictions).
    Metrics {
        #[command(flatten)]
        common: Common,
        /// JSON file with an array of 0/1 predicted labels aligned with
        /// the dataset rows.
        #[arg(long)]
        predictions: Option<PathBuf>,
    },
    /// Apply the configured mitigation and write the transformed dataset
    /// snapshot.
    Mitigate(Common),
    /// Split the configured dataset and train the reference model.
    Train(Common),
    /// Score the configured dataset with a trained model.
    Predict {
        #[command(flatten)]
        common: Common,
        /// Trained model JSON (output of `train`).
        #[arg(long)]
        model: PathBuf,
    },
    /// Performance of predictions against the dataset labels.
    Perf {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        predictions: PathBuf,
    },
    /// Rate fairness metrics into a Bias Index and Fairness Score.
    Rate {
        #[command(flatten)]
        common: Common,
        /// Rate a previously computed metric report instead of
        /// recomputing dataset-level metrics.
        #[arg(long)]
        metrics: Option<PathBuf>,
    },
    /// Checklist tooling.
    #[command(subcommand)]
    Checklist(ChecklistCommand),
    /// Compare protected-class distributions against production data.
    Drift(Common),
    /// Audit pipeline.
    #[command(subcommand)]
    Audit(AuditCommand),
    /// Report tooling.
    #[command(subcommand)]
    Report(ReportCommand),
    /// How to obtain the German Credit case-study data.
    FetchInstructions,
}

#[derive(Subcommand)]
enum ChecklistCommand {
    /// Check a response file's internal invariants.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        responses: PathBuf,
        /// Custom definitions file (bundled definitions when absent).
        #[arg(long)]
        definitions: Option<PathBuf>,
    },
    /// Evaluate a response file into a layer verdict.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        responses: PathBuf,
        #[arg(long)]
        definitions: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AuditCommand {
    /// Run the full seven-layer audit.
    Run(Common),
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Re-render a JSON audit report.
    Render {
        #[command(flatten)]
        common: Common,
        /// Report JSON produced by `audit run`.
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

fn load_config(common: &Common) -> Result<AuditConfig, Error> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("this command needs --config".to_string()))?;
    AuditConfig::load(path)
}

fn emit(common: &Common, text: &str) -> Result<(), Error> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Write {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| Error::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn emit_json<T: serde::Serialize>(common: &Common, value: &T) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(common, &text)
}

fn load_predictions(path: &Path, expected: usize) -> Result<Vec<bool>, Error> {
    let raw: Vec<u8> = formats::read_json(path)?;
    if raw.len() != expected {
        return Err(Error::Config(format!(
            "{} predictions for {} rows",
            raw.len(),
            expected
        )));
    }
    Ok(raw.into_iter().map(|v| v != 0).collect())
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Inspect(common) => {
            let config = load_config(&common)?;
            let dataset = config.load_dataset()?;
            let attrs = config.attributes()?;
            let output = serde_json::json!({
                "profile": dataset.profile(&attrs),
                "validation": dataset.validate(config.missing_threshold),
            });
            emit_json(&common, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Metrics {
            common,
            predictions,
        } => {
            let config = load_config(&common)?;
            let dataset = config.load_dataset()?;
            let attrs = config.attributes()?;
            let report = match &predictions {
                None => evaluate_all(&dataset, &attrs, Outcome::Labels, &config.metrics),
                Some(path) => {
                    let labels = load_predictions(path, dataset.len())?;
                    evaluate_all(
                        &dataset,
                        &attrs,
                        Outcome::Predictions(&labels),
                        &config.metrics,
                    )
                }
            };
            emit_json(&common, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Mitigate(common) => {
            let config = load_config(&common)?;
            let directive = config.mitigation.ok_or_else(|| {
                Error::Config("config has no mitigation directive".to_string())
            })?;
            let attrs = config.attributes()?;
            let mut dataset = config.load_dataset()?;
            for attr in &attrs {
                dataset = match directive {
                    MitigationSpec::Reweigh => reweigh(&dataset, attr)?.0,
                    MitigationSpec::Resample { strategy, seed } => {
                        let seed = common.seed.unwrap_or(seed);
                        resample(&dataset, attr, strategy, seed)?.0
                    }
                };
            }
            let out = common.out.clone().ok_or_else(|| {
                Error::Config("mitigate writes a dataset snapshot; pass --out".to_string())
            })?;
            formats::save_snapshot(&dataset, &out)?;
            eprintln!("wrote mitigated snapshot to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Train(common) => {
            let config = load_config(&common)?;
            let dataset = config.load_dataset()?;
            let attrs = config.attributes()?;
            let parts = split(&dataset, &config.split.to_spec(common.seed), &attrs[0])?;
            let model = train(&parts.train, &config.model.to_config(common.seed))?;
            emit_json(&common, &model)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Predict { common, model } => {
            let config = load_config(&common)?;
            let dataset = config.load_dataset()?;
            let model: TrainedModel = formats::read_json(&model)?;
            let predictions = predict(&model, &dataset)?;
            emit_json(&common, &predictions)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Perf {
            common,
            predictions,
        } => {
            let config = load_config(&common)?;
            let dataset = config.load_dataset()?;
            let labels = load_predictions(&predictions, dataset.len())?;
            let perf = fairlayer::core::model::performance(
                dataset.labels(),
                &labels,
                dataset.weights(),
            )?;
            emit_json(&common, &perf)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Rate { common, metrics } => {
            let config = load_config(&common)?;
            let report: MetricReport = match &metrics {
                Some(path) => formats::read_json(path)?,
                None => {
                    let dataset = config.load_dataset()?;
                    let attrs = config.attributes()?;
                    evaluate_all(&dataset, &attrs, Outcome::Labels, &config.metrics)
                }
            };
            let mut ratings = Vec::new();
            for entry in &report.entries {
                if let Some(error) = &entry.error {
                    return Err(Error::Config(format!(
                        "cannot rate attribute '{}': {error}",
                        entry.attribute
                    )));
                }
                // confusion metrics are only meaningful in a model-level
                // report; their dataset-level placeholders must not rate
                // as maximal deviation
                let values: Vec<_> = entry
                    .values
                    .iter()
                    .filter(|v| {
                        report.level == fairlayer::core::metrics::MetricLevel::Model
                            || !v.id.needs_confusion()
                    })
                    .cloned()
                    .collect();
                ratings.push(bias_index(entry.attribute.clone(), &values)?);
            }
            let rating = fairness_score(ratings)?;
            let certified = rating.certified(config.tolerance);
            let output = serde_json::json!({
                "rating": rating,
                "tolerance": config.tolerance,
                "certified": certified,
            });
            emit_json(&common, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Checklist(cmd) => checklist_command(cmd),
        Command::Drift(common) => {
            let config = load_config(&common)?;
            let dataset = config.load_dataset()?;
            let production = config.load_production()?.ok_or_else(|| {
                Error::Config("config has no production_data for the drift check".to_string())
            })?;
            let attrs = config.attributes()?;
            let report = drift_check(&dataset, &production, &attrs, config.drift_threshold)?;
            emit_json(&common, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Audit(AuditCommand::Run(common)) => {
            let config = load_config(&common)?;
            let report = run_audit(&config, RunOptions { seed: common.seed })?;
            let text = render(&report, common.format.into())?;
            emit(&common, &text)?;
            eprintln!("overall verdict: {}", report.overall_verdict);
            Ok(match report.overall_verdict {
                Verdict::Pass => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_VERDICT),
            })
        }
        Command::Report(ReportCommand::Render { common, input }) => {
            let text = std::fs::read_to_string(&input).map_err(|source| Error::Read {
                path: input.clone(),
                source,
            })?;
            let report = parse_json(&text)?;
            // round-trip guard: re-encoding must preserve the report
            debug_assert_eq!(parse_json(&render_json(&report)?)?, report);
            emit(&common, &render(&report, common.format.into())?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::FetchInstructions => {
            print_fetch_instructions();
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn checklist_command(cmd: ChecklistCommand) -> Result<ExitCode, Error> {
    match cmd {
        ChecklistCommand::Validate {
            common,
            responses,
            definitions,
        } => {
            let defs = match &definitions {
                Some(path) => {
                    let (defs, warnings) = checklists::load_definitions(path)?;
                    for w in warnings {
                        eprintln!("warning: {w}");
                    }
                    defs
                }
                None => bundled_definitions(),
            };
            let response = checklists::load_response(&responses)?;
            let def = defs
                .iter()
                .find(|d| d.layer == response.layer)
                .ok_or_else(|| {
                    Error::Config(format!("no definition for layer {}", response.layer))
                })?;
            let violations = validate_response(def, &response)?;
            emit_json(&common, &violations)?;
            Ok(if violations.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERDICT)
            })
        }
        ChecklistCommand::Evaluate {
            common,
            responses,
            definitions,
        } => {
            let defs = match &definitions {
                Some(path) => checklists::load_definitions(path)?.0,
                None => bundled_definitions(),
            };
            let response = checklists::load_response(&responses)?;
            let def = defs
                .iter()
                .find(|d| d.layer == response.layer)
                .ok_or_else(|| {
                    Error::Config(format!("no definition for layer {}", response.layer))
                })?;
            let verdict = evaluate_layer(def, &response)?;
            emit_json(&common, &verdict)?;
            Ok(match verdict.verdict {
                Verdict::Pass => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_VERDICT),
            })
        }
    }
}

fn print_fetch_instructions() {
    println!("German Credit case-study data");
    println!("=============================");
    println!();
    println!("The bundled fixture at fixtures/german/german.data is a synthetic");
    println!("stand-in that reproduces the published marginals of the Statlog");
    println!("German Credit data (1000 rows; personal-status codes A91=50,");
    println!("A92=310, A93=548, A94=92, A95=0; outcomes 700 good / 300 bad).");
    println!();
    println!("To audit the original file, download it from the UCI repository:");
    println!();
    println!("  https://archive.ics.uci.edu/dataset/144/statlog+german+credit+data");
    println!("  (data file: german.data, space-delimited, 1000 rows, 20 attributes + outcome)");
    println!();
    println!("Integrity checks for the downloaded file:");
    println!("  - exactly 1000 data rows, 21 space-separated fields each");
    println!("  - attribute 9 counts: A91=50, A92=310, A93=548, A94=92, A95=0");
    println!("  - outcome counts: 1 (good) = 700, 2 (bad) = 300");
    println!("  - `fairlayer inspect` with fixtures/german/schema.json reports");
    println!("    male 690 / female 310 for the sex attribute");
    println!();
    println!("No content digest is pinned here: UCI serves the file without a");
    println!("published checksum and mirrors differ in line endings, so the");
    println!("structural counts above are the integrity contract. Point an");
    println!("audit config at the downloaded path (or set GERMAN_CREDIT_PATH");
    println!("for the test suite) to use the real data.");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
