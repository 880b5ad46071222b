//! Checklist definition and response files.
//!
//! Definitions and responses are plain JSON documents over the core
//! checklist types. Custom definition sets are allowed; when their layer
//! item counts differ from the bundled manifest that is reported as a
//! warning, not an error, so organizations can extend the checklists
//! while the deviation stays visible in the audit trail.

use std::collections::BTreeMap;
use std::path::Path;

use fairlayer_core::checklist::{
    bundled_definitions, ChecklistDefinition, ChecklistResponse, BUNDLED_ITEM_COUNTS,
};

use crate::error::{Error, Result};
use crate::formats::{read_json, write_json};

/// Load checklist definitions from a JSON document.
///
/// Hard errors: unparseable file, bad layer ids, duplicate item ids.
/// Count mismatches against the bundled manifest come back as warnings.
pub fn load_definitions(path: &Path) -> Result<(Vec<ChecklistDefinition>, Vec<String>)> {
    let defs: Vec<ChecklistDefinition> = read_json(path)?;
    let mut warnings = Vec::new();
    for def in &defs {
        def.validate()?;
        if let Some((_, expected)) = BUNDLED_ITEM_COUNTS
            .iter()
            .find(|(layer, _)| *layer == def.layer)
        {
            if def.items.len() != *expected {
                warnings.push(format!(
                    "layer {} declares {} items where the bundled checklist has {}",
                    def.layer,
                    def.items.len(),
                    expected
                ));
            }
        }
    }
    Ok((defs, warnings))
}

pub fn save_definitions(defs: &[ChecklistDefinition], path: &Path) -> Result<()> {
    write_json(path, &defs)
}

pub fn load_response(path: &Path) -> Result<ChecklistResponse> {
    read_json(path)
}

/// Definitions for an audit: custom file or the bundled set, with the
/// audit's optional items relaxed.
pub fn definitions_for_audit(
    custom: Option<&Path>,
    optional_items: &[String],
) -> Result<(Vec<ChecklistDefinition>, Vec<String>)> {
    let (mut defs, warnings) = match custom {
        Some(path) => load_definitions(path)?,
        None => (bundled_definitions(), Vec::new()),
    };
    for id in optional_items {
        let mut found = false;
        for def in &mut defs {
            for item in &mut def.items {
                if &item.id == id {
                    item.required = false;
                    found = true;
                }
            }
        }
        if !found {
            return Err(Error::Config(format!(
                "optional item '{id}' does not exist in the checklist definitions"
            )));
        }
    }
    Ok((defs, warnings))
}

/// Responses per layer from the configured files; layers without a file
/// evaluate as unanswered.
pub fn load_responses(
    paths: &BTreeMap<String, std::path::PathBuf>,
) -> Result<BTreeMap<u8, ChecklistResponse>> {
    let mut responses = BTreeMap::new();
    for (key, path) in paths {
        let layer: u8 = key
            .parse()
            .map_err(|_| Error::Config(format!("bad checklist layer key '{key}'")))?;
        let response = load_response(path)?;
        if response.layer != layer {
            return Err(Error::Config(format!(
                "checklist file {} declares layer {} but is configured for layer {layer}",
                path.display(),
                response.layer
            )));
        }
        responses.insert(layer, response);
    }
    Ok(responses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fairlayer_core::checklist::{ItemResponse, ItemStatus};

    #[test]
    fn bundled_definitions_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("defs.json");
        let defs = bundled_definitions();
        save_definitions(&defs, &path).unwrap();
        let (loaded, warnings) = load_definitions(&path).unwrap();
        assert_eq!(loaded, defs);
        assert!(warnings.is_empty());
    }

    #[test]
    fn count_mismatch_warns_but_loads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("defs.json");
        let mut defs = bundled_definitions();
        defs[5].items.pop(); // layer 6 drops to 3 items
        save_definitions(&defs, &path).unwrap();
        let (loaded, warnings) = load_definitions(&path).unwrap();
        assert_eq!(loaded[5].items.len(), 3);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("layer 6"));
    }

    #[test]
    fn duplicate_id_in_file_is_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("defs.json");
        let mut defs = bundled_definitions();
        let dup = defs[0].items[0].clone();
        defs[0].items.push(dup);
        save_definitions(&defs, &path).unwrap();
        assert!(matches!(
            load_definitions(&path),
            Err(Error::Checklist(_))
        ));
    }

    #[test]
    fn optional_items_relax_requirements() {
        let (defs, _) = definitions_for_audit(None, &["L1.Q10".to_string()]).unwrap();
        let item = defs[0].item("L1.Q10").unwrap();
        assert!(!item.required);
        assert!(defs[0].item("L1.Q01").unwrap().required);
    }

    #[test]
    fn unknown_optional_item_is_a_config_error() {
        assert!(matches!(
            definitions_for_audit(None, &["L9.X".to_string()]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn response_layer_must_match_config_key() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("resp.json");
        let response = ChecklistResponse {
            layer: 3,
            answers: BTreeMap::from([(
                "L3.Q01".to_string(),
                ItemResponse {
                    status: ItemStatus::Satisfied,
                    justification: "x".to_string(),
                    evidence: vec![],
                },
            )]),
        };
        write_json(&path, &response).unwrap();
        let paths = BTreeMap::from([("2".to_string(), path)]);
        assert!(matches!(load_responses(&paths), Err(Error::Config(_))));
    }
}
