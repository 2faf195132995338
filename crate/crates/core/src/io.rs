//! JSON serialization of instances.
//!
//! The on-disk format keeps every number as an exact rational string:
//!
//! ```json
//! {"mode":"chores","costs":[["1","1/2"],["3/4","0"]],"weights":["2/3","1/3"]}
//! ```
//!
//! `mode` is `"chores"` or `"goods"`, `costs` is the agent-by-item matrix
//! (valuations, for goods), and `weights` is omitted for uniform
//! entitlements.  Serialization is canonical: compact separators, fields in
//! the order above, rationals in lowest terms.

use crate::instance::{Instance, InstanceError, Mode};
use crate::rational::{format_rational, parse_rational, ParseRationalError, Rational};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("failed to read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("failed to write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown mode `{0}`; expected `chores` or `goods`")]
    BadMode(String),
    #[error("bad rational in agent {agent}, item {item}: {source}")]
    BadEntry {
        agent: usize,
        item: usize,
        source: ParseRationalError,
    },
    #[error("bad rational in weight {index}: {source}")]
    BadWeight {
        index: usize,
        source: ParseRationalError,
    },
    #[error("invalid instance: {0}")]
    Invalid(#[from] InstanceError),
}

/// The JSON shape of an instance file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub mode: String,
    pub costs: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weights: Option<Vec<String>>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        let costs = inst
            .matrix()
            .iter()
            .map(|row| row.iter().map(format_rational).collect())
            .collect();
        let weights = if inst.has_uniform_weights() {
            None
        } else {
            Some(inst.weights().iter().map(format_rational).collect())
        };
        InstanceFile {
            mode: inst.mode().as_str().to_string(),
            costs,
            weights,
        }
    }

    pub fn into_instance(self) -> Result<Instance, IoError> {
        let mode: Mode = self
            .mode
            .parse()
            .map_err(|_| IoError::BadMode(self.mode.clone()))?;
        let mut matrix: Vec<Vec<Rational>> = Vec::with_capacity(self.costs.len());
        for (agent, row) in self.costs.iter().enumerate() {
            let mut parsed = Vec::with_capacity(row.len());
            for (item, s) in row.iter().enumerate() {
                parsed.push(
                    parse_rational(s).map_err(|source| IoError::BadEntry {
                        agent,
                        item,
                        source,
                    })?,
                );
            }
            matrix.push(parsed);
        }
        match self.weights {
            None => Ok(Instance::new(mode, matrix)?),
            Some(raw) => {
                let mut weights = Vec::with_capacity(raw.len());
                for (index, s) in raw.iter().enumerate() {
                    weights.push(
                        parse_rational(s)
                            .map_err(|source| IoError::BadWeight { index, source })?,
                    );
                }
                Ok(Instance::with_weights(mode, matrix, weights)?)
            }
        }
    }
}

/// Parses an instance from its JSON text.
pub fn instance_from_json(text: &str) -> Result<Instance, IoError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    file.into_instance()
}

/// Renders an instance as canonical compact JSON (no trailing newline).
pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string(&InstanceFile::from_instance(inst))
        .expect("instance files always serialize")
}

/// Reads and parses an instance file.
pub fn read_instance(path: &Path) -> Result<Instance, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    instance_from_json(&text)
}

/// Writes an instance as canonical JSON with a trailing newline.
pub fn write_instance(path: &Path, inst: &Instance) -> Result<(), IoError> {
    let mut text = instance_to_json(inst);
    text.push('\n');
    std::fs::write(path, text).map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}
