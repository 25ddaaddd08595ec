use std::fs;
use std::path::{Path, PathBuf};

use prodavail_core::Model;
use sha2::{Digest, Sha256};

/// The reference case-study model as shipped.
pub const REFERENCE_MODEL_JSON: &str = include_str!("../models/reference.json");

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}:{column}: {message}")]
    Parse { origin: String, line: usize, column: usize, message: String },
}

/// Parses a model document. `origin` names the source in error messages.
pub fn parse_model(text: &str, origin: &str) -> Result<Model, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Parse {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load_model(path: &Path) -> Result<Model, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })?;
    parse_model(&text, &path.display().to_string())
}

/// Pretty JSON with a trailing newline.
pub fn to_json(model: &Model) -> String {
    let mut s = serde_json::to_string_pretty(model).expect("model serializes");
    s.push('\n');
    s
}

/// SHA-256 of the model's canonical (compact) serialization, hex encoded.
/// Formatting and key order of the source file do not matter.
pub fn model_digest(model: &Model) -> String {
    let canonical = serde_json::to_vec(model).expect("model serializes");
    hex::encode(Sha256::digest(&canonical))
}
