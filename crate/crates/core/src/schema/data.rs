use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::ir::EntityTable;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("malformed data file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid path `{0}`")]
    BadPath(String),
}

/// A dotted path into the record tree, e.g. `visit.bp.systolic`. Numeric
/// segments index into arrays.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DataPath(Vec<String>);

impl DataPath {
    pub fn parse(s: &str) -> Result<Self, DataError> {
        let segments: Vec<String> = s.split('.').map(str::to_string).collect();
        let valid = |seg: &String| {
            !seg.is_empty() && seg.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        };
        if segments.iter().all(valid) {
            Ok(DataPath(segments))
        } else {
            Err(DataError::BadPath(s.to_string()))
        }
    }

    /// Top-level record key the path starts from.
    pub fn record_key(&self) -> &str {
        &self.0[0]
    }

    pub fn segments(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for DataPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

/// Input to the schema interpreter: entities plus the application records.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DataRecordSet {
    pub entities: EntityTable,
    pub records: BTreeMap<String, Value>,
}

impl DataRecordSet {
    pub fn from_json(text: &str) -> Result<Self, DataError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn resolve(&self, path: &DataPath) -> Option<&Value> {
        let mut segs = path.segments().iter();
        let mut cur = self.records.get(segs.next()?)?;
        for seg in segs {
            cur = match cur {
                Value::Object(map) => map.get(seg)?,
                Value::Array(items) => items.get(seg.parse::<usize>().ok()?)?,
                _ => return None,
            };
        }
        Some(cur)
    }

    pub fn record_keys(&self) -> BTreeSet<String> {
        self.records.keys().cloned().collect()
    }
}

pub(crate) fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}
