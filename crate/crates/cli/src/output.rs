use std::fs;
use std::io::Write;

use serde_json::Value;

use crate::{Cli, CliError};

/// Writes the report to `--out` or stdout, newline-terminated.
pub fn emit(cli: &Cli, body: &str) -> Result<(), CliError> {
    let mut text = body.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn json(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

/// Sets every `elapsed_s` field, at any depth, to zero.
pub fn canonicalize(value: &mut Value) {
    match value {
        Value::Object(map) => {
            for (key, v) in map.iter_mut() {
                if key == "elapsed_s" {
                    *v = Value::from(0.0);
                } else {
                    canonicalize(v);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(canonicalize),
        _ => {}
    }
}

pub fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(header);
    for row in rows {
        out.push('\n');
        out.push_str(&row);
    }
    out
}
