use std::path::Path;

use rareweak_core::{Error as CoreError, ErrorClass};
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: malformed CSV at line {line}: {reason}")]
    MalformedCsv { path: String, line: u64, reason: String },
    #[error("every genotype column was dropped by quality control")]
    AllColumnsDropped,
    #[error("{path}: line {line}: SNP id '{snp}' is not in the genotype header")]
    UnknownSnpId { path: String, line: u64, snp: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.display().to_string(), message: err.to_string() }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            CliError::Config(_) => ErrorClass::Config,
            CliError::MalformedCsv { .. }
            | CliError::AllColumnsDropped
            | CliError::UnknownSnpId { .. }
            | CliError::Io { .. } => ErrorClass::Data,
            CliError::Core(e) => e.class(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Config => 2,
            ErrorClass::Data => 3,
            ErrorClass::Numeric => 4,
        }
    }

    /// Variant name, e.g. `MalformedCsv` or `TooFewPermutations`.
    pub fn kind(&self) -> String {
        let debug = match self {
            CliError::Core(e) => format!("{e:?}"),
            other => format!("{other:?}"),
        };
        debug.split(|c: char| !c.is_alphanumeric() && c != '_').next().unwrap_or_default().to_string()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let class = match self.class() {
            ErrorClass::Config => "config",
            ErrorClass::Data => "data",
            ErrorClass::Numeric => "numeric",
        };
        json!({
            "error": self.kind(),
            "class": class,
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
    }
}
