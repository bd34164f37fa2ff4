//! Resumable progress file for long enumerations.
//!
//! The cursor is a JSON document
//!
//! ```json
//! {
//!   "version": 1,
//!   "fingerprint": "<sha256 of the enumeration spec and subtree count>",
//!   "subtrees": 256,
//!   "completed": {
//!     "17": { "visited": 123, "entries": [ { "classes": {"2,2": 5}, "count": 4, "ti": 1.0, "example": "I?..." } ] }
//!   }
//! }
//! ```
//!
//! Subtree indices refer to the deterministic search frontier, so a cursor is
//! only accepted by a run with the same fingerprint. Writes go to a sibling
//! `.tmp` file that is then renamed over the cursor.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::graph::EdgeClassCounts;

use super::search::{classes_to_key, key_to_classes, Entry, Partial};
use super::{EnumerationSpec, OracleError};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct StoredEntry {
    classes: EdgeClassCounts,
    count: u64,
    ti: f64,
    example: String,
}

#[derive(Serialize, Deserialize)]
struct StoredPartial {
    visited: u64,
    entries: Vec<StoredEntry>,
}

#[derive(Serialize, Deserialize)]
struct Cursor {
    version: u32,
    fingerprint: String,
    subtrees: usize,
    completed: BTreeMap<usize, StoredPartial>,
}

pub(crate) fn fingerprint(spec: &EnumerationSpec, subtrees: usize) -> String {
    let text = serde_json::to_string(&(CHECKPOINT_VERSION, spec, subtrees)).expect("spec serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn store(partial: &Partial) -> StoredPartial {
    StoredPartial {
        visited: partial.visited,
        entries: partial
            .entries
            .iter()
            .map(|(key, e)| StoredEntry {
                classes: key_to_classes(key),
                count: e.count,
                ti: e.ti,
                example: e.example.clone(),
            })
            .collect(),
    }
}

fn restore(stored: StoredPartial) -> Partial {
    let mut partial = Partial::new();
    partial.visited = stored.visited;
    for e in stored.entries {
        partial.best = partial.best.min(e.ti);
        partial.entries.insert(
            classes_to_key(&e.classes),
            Entry {
                count: e.count,
                ti: e.ti,
                example: e.example,
            },
        );
    }
    partial
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> OracleError {
    OracleError::Checkpoint(format!("{}: {e}", path.display()))
}

/// Completed subtrees recorded in `path`, or an empty map when the file does
/// not exist.
pub(crate) fn load(path: &Path, fingerprint: &str, subtrees: usize) -> Result<BTreeMap<usize, Partial>, OracleError> {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
        Err(e) => return Err(io_error(path, e)),
    };
    let cursor: Cursor = serde_json::from_str(&text).map_err(|e| io_error(path, e))?;
    if cursor.version != CHECKPOINT_VERSION {
        return Err(OracleError::CheckpointMismatch(format!(
            "version {} (expected {CHECKPOINT_VERSION})",
            cursor.version
        )));
    }
    if cursor.fingerprint != fingerprint || cursor.subtrees != subtrees {
        return Err(OracleError::CheckpointMismatch(
            "the cursor belongs to a different enumeration".to_string(),
        ));
    }
    if let Some(&bad) = cursor.completed.keys().find(|&&i| i >= subtrees) {
        return Err(OracleError::CheckpointMismatch(format!("subtree {bad} out of range")));
    }
    Ok(cursor.completed.into_iter().map(|(i, p)| (i, restore(p))).collect())
}

pub(crate) fn save(
    path: &Path,
    fingerprint: &str,
    subtrees: usize,
    completed: &BTreeMap<usize, Partial>,
) -> Result<(), OracleError> {
    let cursor = Cursor {
        version: CHECKPOINT_VERSION,
        fingerprint: fingerprint.to_string(),
        subtrees,
        completed: completed.iter().map(|(&i, p)| (i, store(p))).collect(),
    };
    let text = serde_json::to_string(&cursor).map_err(|e| io_error(path, e))?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, text).map_err(|e| io_error(path, e))?;
    fs::rename(&tmp, path).map_err(|e| io_error(path, e))
}
