//! Reading and writing the JSON cluster-description format.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use super::{ClusterSpec, SCHEMA_VERSION};
use crate::error::LoadError;

/// Whether fields the model does not know are an error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Strictness {
    #[default]
    Strict,
    Lenient,
}

pub fn load_cluster(path: impl AsRef<Path>) -> Result<ClusterSpec, LoadError> {
    load_cluster_with(path, Strictness::Strict)
}

pub fn load_cluster_with(path: impl AsRef<Path>, strictness: Strictness) -> Result<ClusterSpec, LoadError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let spec = parse_cluster(&text, strictness)?;
    let violations = spec.validate();
    if violations.is_empty() {
        Ok(spec)
    } else {
        Err(LoadError::Invalid(violations))
    }
}

/// Parses without running invariant checks.
pub fn parse_cluster(text: &str, strictness: Strictness) -> Result<ClusterSpec, LoadError> {
    #[derive(Deserialize)]
    struct Header {
        schema: Option<serde_json::Value>,
    }
    let header: Header = serde_json::from_str(text).map_err(|e| json_error(e, String::new()))?;
    if let Some(v) = header.schema {
        match v.as_u64() {
            Some(n) if n == u64::from(SCHEMA_VERSION) => {}
            Some(n) => return Err(LoadError::UnsupportedSchema(n.try_into().unwrap_or(u32::MAX))),
            None => {
                return Err(LoadError::Parse {
                    line: 1,
                    column: 1,
                    field: "schema".into(),
                    message: format!("expected schema version 1, got {v}"),
                })
            }
        }
    }

    let mut unknown = Vec::new();
    let mut de = serde_json::Deserializer::from_str(text);
    let spec: ClusterSpec = {
        let mut record = |p: serde_ignored::Path<'_>| unknown.push(p.to_string());
        let tracked = serde_ignored::Deserializer::new(&mut de, &mut record);
        serde_path_to_error::deserialize(tracked).map_err(|e| {
            let field = e.path().to_string();
            json_error(e.into_inner(), field)
        })?
    };
    de.end().map_err(|e| json_error(e, String::new()))?;

    if strictness == Strictness::Strict && !unknown.is_empty() {
        return Err(LoadError::UnknownFields(unknown));
    }
    Ok(spec)
}

fn json_error(e: serde_json::Error, field: String) -> LoadError {
    LoadError::Parse {
        line: e.line(),
        column: e.column(),
        field: if field.is_empty() { ".".into() } else { field },
        message: e.to_string(),
    }
}

/// Canonical pretty JSON, newline terminated.
pub fn to_json(spec: &ClusterSpec) -> String {
    let mut s = serde_json::to_string_pretty(spec).expect("cluster specs always serialize");
    s.push('\n');
    s
}

pub fn save_cluster(spec: &ClusterSpec, path: impl AsRef<Path>) -> Result<(), LoadError> {
    let path = path.as_ref();
    fs::write(path, to_json(spec)).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// JSON Schema of the strict file format.
pub fn json_schema() -> String {
    let schema = schemars::schema_for!(ClusterSpec);
    let mut s = serde_json::to_string_pretty(&schema).expect("schema serializes");
    s.push('\n');
    s
}
