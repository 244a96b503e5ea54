//! Assembles a subcommand's parameter object from a JSON config file,
//! `key=value` overrides and explicit flags, in that order of precedence.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::CliError;

/// A parsed `key=value` override. Dotted keys address nested objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub path: Vec<String>,
    pub value: Value,
}

/// Parses `key=value`. Values that read as a finite number become JSON
/// numbers, other valid JSON (arrays, objects, quoted strings, booleans) is
/// taken as-is, and anything else is a bare string.
pub fn parse_override(text: &str) -> Result<Override, CliError> {
    let (key, raw) = text
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("override `{text}` is not of the form key=value")))?;
    let path: Vec<String> = key.trim().split('.').map(str::to_owned).collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(CliError::Usage(format!("override `{text}` has an empty key")));
    }
    let raw = raw.trim();
    // JSON keeps integers integral; f64 catches forms like `.5` or `+1`
    let value = serde_json::from_str(raw).unwrap_or_else(|_| match raw.parse::<f64>() {
        Ok(x) if x.is_finite() => serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number),
        _ => Value::String(raw.to_owned()),
    });
    Ok(Override { path, value })
}

fn set_path(root: &mut Map<String, Value>, path: &[String], value: Value) -> Result<(), CliError> {
    let (first, rest) = path.split_first().expect("non-empty path");
    let node = root.entry(first.clone()).or_insert(Value::Null);
    set_in(node, first, rest, value)
}

/// Numeric keys index arrays; other keys address (or create) object fields.
fn set_in(node: &mut Value, name: &str, path: &[String], value: Value) -> Result<(), CliError> {
    let Some((key, rest)) = path.split_first() else {
        *node = value;
        return Ok(());
    };
    if node.is_null() {
        *node = Value::Object(Map::new());
    }
    let child = match node {
        Value::Object(map) => map.entry(key.clone()).or_insert(Value::Null),
        Value::Array(items) => {
            let len = items.len();
            key.parse::<usize>()
                .ok()
                .and_then(|i| items.get_mut(i))
                .ok_or_else(|| CliError::Usage(format!("`{key}` is not an index into `{name}` (length {len})")))?
        }
        _ => {
            return Err(CliError::Usage(format!(
                "cannot set a field inside non-object `{name}`"
            )))
        }
    };
    set_in(child, key, rest, value)
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads a JSON object from `path`, or an empty object.
pub fn load_config(path: Option<&Path>) -> Result<Map<String, Value>, CliError> {
    let Some(path) = path else {
        return Ok(Map::new());
    };
    match serde_json::from_str::<Value>(&read_text(path)?).map_err(afc_core::Error::from)? {
        Value::Object(map) => Ok(map),
        _ => Err(afc_core::Error::invalid("config", f64::NAN, "must be a JSON object").into()),
    }
}

/// Config, then overrides, then flags. `None` flags leave the key alone.
pub fn assemble<T: DeserializeOwned>(
    config: Option<&Path>,
    overrides: &[String],
    flags: &[(&str, Option<Value>)],
) -> Result<T, CliError> {
    let mut root = load_config(config)?;
    for text in overrides {
        let o = parse_override(text)?;
        set_path(&mut root, &o.path, o.value)?;
    }
    for (key, value) in flags {
        if let Some(v) = value {
            let path: Vec<String> = key.split('.').map(str::to_owned).collect();
            set_path(&mut root, &path, v.clone())?;
        }
    }
    Ok(serde_json::from_value(Value::Object(root)).map_err(afc_core::Error::from)?)
}

pub fn num(x: Option<f64>) -> Option<Value> {
    x.map(|v| serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number))
}

pub fn uint(x: Option<u64>) -> Option<Value> {
    x.map(Value::from)
}

pub fn text(x: Option<&str>) -> Option<Value> {
    x.map(|s| Value::String(s.to_owned()))
}

/// A required field, reported like any other missing parameter.
pub fn required(value: Option<f64>, command: &str, name: &str) -> afc_core::Result<f64> {
    value.ok_or_else(|| afc_core::Error::MissingParameter {
        target: command.to_owned(),
        name: name.to_owned(),
    })
}
