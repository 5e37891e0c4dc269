use std::path::Path;

use splitnet_core::json::{parse_gcrn_json, parse_translation_json};
use splitnet_core::translation::SplitTranslation;
use splitnet_core::{parse_generalized, parse_network, GeneralizedNetwork, ReactionNetwork};

use crate::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

pub fn network(path: &Path) -> Result<ReactionNetwork, CliError> {
    parse_network(&read(path)?).map_err(|e| located(path, e))
}

pub enum AnyNetwork {
    Plain(ReactionNetwork),
    Generalized(GeneralizedNetwork),
}

/// JSON by content, generalized text by the `.gcrn` extension, otherwise a
/// plain network.
pub fn any_network(path: &Path) -> Result<AnyNetwork, CliError> {
    let text = read(path)?;
    if is_json(&text) {
        return parse_gcrn_json(&text).map(|(g, _)| AnyNetwork::Generalized(g)).map_err(|e| located(path, e));
    }
    if path.extension().is_some_and(|e| e == "gcrn") {
        return parse_generalized(&text).map(AnyNetwork::Generalized).map_err(|e| located(path, e));
    }
    parse_network(&text).map(AnyNetwork::Plain).map_err(|e| located(path, e))
}

pub fn generalized(path: &Path) -> Result<GeneralizedNetwork, CliError> {
    match any_network(path)? {
        AnyNetwork::Plain(n) => Ok(n.to_generalized()),
        AnyNetwork::Generalized(g) => Ok(g),
    }
}

pub fn translation(original: &ReactionNetwork, path: &Path) -> Result<SplitTranslation, CliError> {
    parse_translation_json(original, &read(path)?).map_err(|e| located(path, e))
}
