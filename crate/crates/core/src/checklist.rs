//! Lifecycle fairness checklists: machine-readable definitions, auditor
//! responses, and per-layer gating.
//!
//! The bundled definitions cover the seven lifecycle layers with 53 checks
//! distributed 12/12/7/6/7/4/5. A layer passes only when every required
//! item is satisfied or justified not-applicable; an unanswered required
//! item makes the layer incomplete rather than failed. Open-ended
//! (narrative) items have no boolean truth value, so they gate on a
//! non-empty justification; evidence-backed items require at least one
//! evidence reference when satisfied.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChecklistError {
    #[error("duplicate item id '{0}'")]
    DuplicateItemId(String),
    #[error("layer id {0} is outside 1..=7")]
    BadLayerId(u8),
    #[error("response references unknown item id '{0}'")]
    UnknownItemId(String),
    #[error("response targets layer {response} but the definition is layer {definition}")]
    LayerMismatch { definition: u8, response: u8 },
    #[error("response has {0} outstanding violations; fix them before evaluating")]
    InvalidResponse(usize),
}

/// How an item is answered and gated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ItemKind {
    /// Yes/no check.
    Boolean,
    /// Open question; gates on a non-empty justification.
    Narrative,
    /// Yes/no check that needs at least one evidence reference when
    /// satisfied.
    BooleanEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChecklistItem {
    pub id: String,
    pub question: String,
    pub kind: ItemKind,
    pub required: bool,
}

/// One layer's checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChecklistDefinition {
    pub layer: u8,
    pub name: String,
    pub items: Vec<ChecklistItem>,
}

impl ChecklistDefinition {
    pub fn validate(&self) -> Result<(), ChecklistError> {
        if !(1..=7).contains(&self.layer) {
            return Err(ChecklistError::BadLayerId(self.layer));
        }
        let mut seen = BTreeSet::new();
        for item in &self.items {
            if !seen.insert(item.id.as_str()) {
                return Err(ChecklistError::DuplicateItemId(item.id.clone()));
            }
        }
        Ok(())
    }

    pub fn item(&self, id: &str) -> Option<&ChecklistItem> {
        self.items.iter().find(|i| i.id == id)
    }
}

/// Expected item count per layer for the bundled definitions.
pub const BUNDLED_ITEM_COUNTS: [(u8, usize); 7] =
    [(1, 12), (2, 12), (3, 7), (4, 6), (5, 7), (6, 4), (7, 5)];

pub const LAYER_NAMES: [&str; 7] = [
    "Requirements, Context, and Purpose Layer",
    "Data Collection and Selection Layer",
    "Data Pre-processing and Feature Engineering Layer",
    "Algorithm Layer",
    "AI System Training Layer",
    "Independent Audit Layer",
    "Usage Layer",
];

type ItemSpec = (&'static str, &'static str, ItemKind);

const LAYER1_ITEMS: &[ItemSpec] = &[
    (
        "L1.Q01",
        "What are the expectations from the AI model?",
        ItemKind::Narrative,
    ),
    (
        "L1.Q02",
        "Are the requirements clear and formally documented?",
        ItemKind::BooleanEvidence,
    ),
    (
        "L1.Q03",
        "Have the developers understood the scope and context of the problem?",
        ItemKind::Boolean,
    ),
    (
        "L1.Q04",
        "How is the problem being dealt with presently?",
        ItemKind::Narrative,
    ),
    (
        "L1.Q05",
        "Which fairness technique is appropriate and why?",
        ItemKind::Narrative,
    ),
    (
        "L1.Q06",
        "How were the tolerance limits for fairness and bias decided?",
        ItemKind::Narrative,
    ),
    (
        "L1.Q07",
        "Was the relevant AI literature reviewed?",
        ItemKind::Boolean,
    ),
    (
        "L1.Q08",
        "Is the data generated internally or from external third-party/ public sources?",
        ItemKind::Narrative,
    ),
    (
        "L1.Q09",
        "Were benchmarks and baselines identified?",
        ItemKind::Boolean,
    ),
    (
        "L1.Q10",
        "Are Pre-trained models already available that can be repurposed?",
        ItemKind::Boolean,
    ),
    (
        "L1.Q11",
        "What are the alternate solutions and flows?",
        ItemKind::Narrative,
    ),
    (
        "L1.Q12",
        "Are the stakeholders, domain experts and auditors identified?",
        ItemKind::Boolean,
    ),
];

// Layer 2 splits into dataset-selection (S) and collection/labelling (C)
// sub-sections, evaluated as one layer.
const LAYER2_ITEMS: &[ItemSpec] = &[
    (
        "L2.S01",
        "Is the dataset collected from a known and verifiable data repository?",
        ItemKind::BooleanEvidence,
    ),
    (
        "L2.S02",
        "Is there a way to audit the dataset for validity and accuracy?",
        ItemKind::Boolean,
    ),
    (
        "L2.S03",
        "Is the dataset complete? Are there too many missing values?",
        ItemKind::Boolean,
    ),
    (
        "L2.S04",
        "Is the dataset cleaned and pre-processed or raw?",
        ItemKind::Narrative,
    ),
    (
        "L2.S05",
        "How distributed is the dataset? Does it include data from all sections of society? Is it skewed in favour of certain groups?",
        ItemKind::Narrative,
    ),
    (
        "L2.S06",
        "Is there any metadata available along with the dataset that increases its explainability? Is the information available around who collected it, when it was collected, and the collection processes used?",
        ItemKind::BooleanEvidence,
    ),
    ("L2.S07", "Why was this data collected?", ItemKind::Narrative),
    (
        "L2.S08",
        "How old is the dataset? Do the situations/ assumptions at the time of data collection still apply?",
        ItemKind::Narrative,
    ),
    (
        "L2.S09",
        "Is more than one dataset being considered? If yes, what is the correlation between them?",
        ItemKind::Boolean,
    ),
    (
        "L2.C01",
        "Is the dataset already labelled?",
        ItemKind::Boolean,
    ),
    (
        "L2.C02",
        "In the case of manual labelling, are the people labelling the data trained and well aware of the context of the problem?",
        ItemKind::Boolean,
    ),
    (
        "L2.C03",
        "Are quality assurance and verification processes included to ensure no developer bias gets into the dataset?",
        ItemKind::BooleanEvidence,
    ),
];

const LAYER3_ITEMS: &[ItemSpec] = &[
    (
        "L3.Q01",
        "What are the approaches taken to clean the dataset? Are they leading to an imbalanced dataset?",
        ItemKind::Narrative,
    ),
    (
        "L3.Q02",
        "How is feature engineering done? Was it done by a single developer or reviewed by others also?",
        ItemKind::Narrative,
    ),
    (
        "L3.Q03",
        "Were any features dropped? If yes, why and what effect do they have on the problem?",
        ItemKind::Boolean,
    ),
    (
        "L3.Q04",
        "Would the pre-processing process remove an enormous chunk of data from particular demography?",
        ItemKind::Boolean,
    ),
    (
        "L3.Q05",
        "As part of over-sampling, did the algorithm add too much synthetic data?",
        ItemKind::Boolean,
    ),
    (
        "L3.Q06",
        "How were the normalisation and scaling techniques decided?",
        ItemKind::Narrative,
    ),
    (
        "L3.Q07",
        "How were the protected attributes and privileged classes selected?",
        ItemKind::Narrative,
    ),
];

const LAYER4_ITEMS: &[ItemSpec] = &[
    (
        "L4.Q01",
        "Is the development process transparent?",
        ItemKind::Boolean,
    ),
    (
        "L4.Q02",
        "Are there regular reviews and quality assessments to make sure the developer's individual biases are not affecting the model?",
        ItemKind::BooleanEvidence,
    ),
    (
        "L4.Q03",
        "What were the criteria for selecting the algorithm technique?",
        ItemKind::Narrative,
    ),
    (
        "L4.Q04",
        "Were the stakeholders consulted? Was the context of the problem statement taken into consideration?",
        ItemKind::Boolean,
    ),
    (
        "L4.Q05",
        "Which fairness technique was selected - individual fairness or group fairness, or something else?",
        ItemKind::Narrative,
    ),
    (
        "L4.Q06",
        "Is the model developed per the requirements specified in layer 1?",
        ItemKind::Boolean,
    ),
];

const LAYER5_ITEMS: &[ItemSpec] = &[
    (
        "L5.Q01",
        "How was the dataset divided into training, testing, and validation sets? Was the data distributed to them randomly?",
        ItemKind::Narrative,
    ),
    (
        "L5.Q02",
        "Were the resultant three datasets balanced? Did they have an equal/ proportional distribution of privileged and unprivileged classes?",
        ItemKind::Boolean,
    ),
    (
        "L5.Q03",
        "How were the hyper-parameters selected?",
        ItemKind::Narrative,
    ),
    (
        "L5.Q04",
        "What are the fairness metrics used, and why?",
        ItemKind::Narrative,
    ),
    (
        "L5.Q05",
        "Is fairness checked for each protected attribute or not?",
        ItemKind::Boolean,
    ),
    (
        "L5.Q06",
        "What are the identified benchmarks, parameters, and metrics for measuring model performance, and why?",
        ItemKind::Narrative,
    ),
    (
        "L5.Q07",
        "The choice of metrics, parameters, and benchmarks should be well documented and available for external auditing and explainability.",
        ItemKind::BooleanEvidence,
    ),
];

const LAYER6_ITEMS: &[ItemSpec] = &[
    (
        "L6.Q01",
        "Is the auditor independent? If it is an in-house team, then is it different from the developers? If it is a third-party auditor, then is it accredited?",
        ItemKind::Boolean,
    ),
    (
        "L6.Q02",
        "Is a standard fairness assessment process followed?",
        ItemKind::BooleanEvidence,
    ),
    ("L6.Q03", "Is the rating matric universal?", ItemKind::Boolean),
    (
        "L6.Q04",
        "Has the auditor checked all the protected attributes?",
        ItemKind::Boolean,
    ),
];

const LAYER7_ITEMS: &[ItemSpec] = &[
    (
        "L7.Q01",
        "Are fairness KPIs regularly monitored after the release?",
        ItemKind::Boolean,
    ),
    (
        "L7.Q02",
        "How much time has passed since the last round of model training?",
        ItemKind::Narrative,
    ),
    (
        "L7.Q03",
        "Have the underlying ground realities changed since deploying the model?",
        ItemKind::Boolean,
    ),
    (
        "L7.Q04",
        "Is the distribution of protected classes in the protected attributes the same in production data as in the training data?",
        ItemKind::Boolean,
    ),
    (
        "L7.Q05",
        "What were the deciding factors for retaining or discarding the old data while retraining the model?",
        ItemKind::Narrative,
    ),
];

/// The bundled seven-layer checklist. Every item defaults to required;
/// audits relax specific items through their configuration.
pub fn bundled_definitions() -> Vec<ChecklistDefinition> {
    let layers: [&[ItemSpec]; 7] = [
        LAYER1_ITEMS,
        LAYER2_ITEMS,
        LAYER3_ITEMS,
        LAYER4_ITEMS,
        LAYER5_ITEMS,
        LAYER6_ITEMS,
        LAYER7_ITEMS,
    ];
    layers
        .iter()
        .enumerate()
        .map(|(i, items)| ChecklistDefinition {
            layer: (i + 1) as u8,
            name: LAYER_NAMES[i].to_string(),
            items: items
                .iter()
                .map(|(id, question, kind)| ChecklistItem {
                    id: (*id).to_string(),
                    question: (*question).to_string(),
                    kind: *kind,
                    required: true,
                })
                .collect(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ItemStatus {
    Satisfied,
    NotSatisfied,
    NotApplicable,
    #[default]
    Unanswered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ItemResponse {
    pub status: ItemStatus,
    #[serde(default)]
    pub justification: String,
    #[serde(default)]
    pub evidence: Vec<String>,
}

/// An auditor's answers for one layer. Items absent from `answers` count
/// as unanswered.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChecklistResponse {
    pub layer: u8,
    pub answers: BTreeMap<String, ItemResponse>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub item: String,
    pub message: String,
}

/// Check a response's internal invariants against its definition.
///
/// Unknown item ids are an error (the response does not belong to this
/// definition); everything else is reported as violations.
pub fn validate_response(
    def: &ChecklistDefinition,
    resp: &ChecklistResponse,
) -> Result<Vec<Violation>, ChecklistError> {
    if def.layer != resp.layer {
        return Err(ChecklistError::LayerMismatch {
            definition: def.layer,
            response: resp.layer,
        });
    }
    for id in resp.answers.keys() {
        if def.item(id).is_none() {
            return Err(ChecklistError::UnknownItemId(id.clone()));
        }
    }
    let mut violations = Vec::new();
    for item in &def.items {
        let Some(answer) = resp.answers.get(&item.id) else {
            continue;
        };
        if answer.status == ItemStatus::NotApplicable && answer.justification.trim().is_empty() {
            violations.push(Violation {
                item: item.id.clone(),
                message: "not-applicable answers need a justification".to_string(),
            });
        }
        if answer.status == ItemStatus::Satisfied {
            match item.kind {
                ItemKind::BooleanEvidence if answer.evidence.is_empty() => {
                    violations.push(Violation {
                        item: item.id.clone(),
                        message: "satisfied evidence-backed items need at least one evidence reference"
                            .to_string(),
                    });
                }
                ItemKind::Narrative if answer.justification.trim().is_empty() => {
                    violations.push(Violation {
                        item: item.id.clone(),
                        message: "narrative items gate on a non-empty justification".to_string(),
                    });
                }
                _ => {}
            }
        }
    }
    Ok(violations)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Incomplete,
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Fail => f.write_str("fail"),
            Verdict::Incomplete => f.write_str("incomplete"),
        }
    }
}

/// Gate outcome of one layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerVerdict {
    pub layer: u8,
    pub verdict: Verdict,
    /// Required items answered not-satisfied (or satisfied without
    /// meeting their gate).
    pub failing: Vec<String>,
    /// Required items left unanswered.
    pub missing: Vec<String>,
}

/// Evaluate one layer: pass iff every required item is satisfied or
/// justified not-applicable; incomplete when any required item is
/// unanswered; fail otherwise. The response must validate first.
pub fn evaluate_layer(
    def: &ChecklistDefinition,
    resp: &ChecklistResponse,
) -> Result<LayerVerdict, ChecklistError> {
    let violations = validate_response(def, resp)?;
    if !violations.is_empty() {
        return Err(ChecklistError::InvalidResponse(violations.len()));
    }
    let mut failing = Vec::new();
    let mut missing = Vec::new();
    for item in &def.items {
        if !item.required {
            continue;
        }
        let status = resp
            .answers
            .get(&item.id)
            .map(|a| a.status)
            .unwrap_or_default();
        match status {
            ItemStatus::Satisfied | ItemStatus::NotApplicable => {}
            ItemStatus::NotSatisfied => failing.push(item.id.clone()),
            ItemStatus::Unanswered => missing.push(item.id.clone()),
        }
    }
    let verdict = if failing.is_empty() && missing.is_empty() {
        Verdict::Pass
    } else if !missing.is_empty() {
        Verdict::Incomplete
    } else {
        Verdict::Fail
    };
    Ok(LayerVerdict {
        layer: def.layer,
        verdict,
        failing,
        missing,
    })
}
