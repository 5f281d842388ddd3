//! File formats: functions, codes and generators as JSON, sweep reports as
//! JSON or CSV. JSON output is canonical (sorted keys, two-space indent,
//! trailing newline) so that reruns can be compared byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::codes::LinearCode;
use crate::cube::{BooleanKind, CubeFunction};
use crate::error::{Error, Result};
use crate::markov::MarkovGenerator;
use crate::verify::CheckReport;

/// The point-indexing convention, recorded in every function file.
pub const CONVENTION: &str = "bit_i_set_means_x_{i+1}_eq_minus1";

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FunctionFile {
    n: usize,
    #[serde(default)]
    kind: Option<BooleanKind>,
    #[serde(default)]
    convention: Option<String>,
    values: Vec<f64>,
    #[serde(default)]
    meta: BTreeMap<String, Value>,
}

/// Serializes `value` with sorted keys.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    // `Value` objects are BTreeMaps, so a round trip sorts every key
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn integral(v: f64) -> Value {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        Value::from(v as i64)
    } else {
        Value::from(v)
    }
}

pub fn function_to_json(f: &CubeFunction, meta: &BTreeMap<String, Value>) -> Result<String> {
    let values: Vec<Value> = if f.kind().is_boolean() {
        f.values().iter().map(|&v| integral(v)).collect()
    } else {
        f.values().iter().map(|&v| Value::from(v)).collect()
    };
    let doc = serde_json::json!({
        "n": f.n(),
        "kind": f.kind(),
        "convention": CONVENTION,
        "values": values,
        "meta": meta,
    });
    to_canonical_json(&doc)
}

/// Parses a function file. A missing `kind` is inferred from the values; a
/// present `convention` must match [`CONVENTION`].
pub fn function_from_json(text: &str) -> Result<(CubeFunction, BTreeMap<String, Value>)> {
    let file: FunctionFile = serde_json::from_str(text).map_err(|e| Error::Format(format!("function file: {e}")))?;
    if let Some(c) = &file.convention {
        if c != CONVENTION {
            return Err(Error::Format(format!(
                "function file uses convention `{c}`, expected `{CONVENTION}`"
            )));
        }
    }
    if file.values.len() != 1usize.checked_shl(file.n as u32).unwrap_or(0) {
        return Err(Error::Format(format!(
            "function file declares n = {} but holds {} values",
            file.n,
            file.values.len()
        )));
    }
    let kind = file.kind.unwrap_or_else(|| CubeFunction::infer_kind(&file.values));
    Ok((CubeFunction::new(file.n, file.values, kind)?, file.meta))
}

pub fn code_to_json(code: &LinearCode) -> Result<String> {
    to_canonical_json(code)
}

/// Accepts a bare code or any object carrying one under `code`, such as a
/// search result.
pub fn code_from_json(text: &str) -> Result<LinearCode> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Format(format!("code file: {e}")))?;
    let inner = match v.get("code") {
        Some(c) if v.get("length").is_none() => c.clone(),
        _ => v,
    };
    serde_json::from_value(inner).map_err(|e| Error::Format(format!("code file: {e}")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GeneratorFile {
    mu: Vec<f64>,
    matrix: Vec<Vec<f64>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

pub fn generator_to_json(l: &MarkovGenerator) -> Result<String> {
    let m = l.matrix();
    let file = GeneratorFile {
        mu: l.space().mu().to_vec(),
        matrix: (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect(),
        labels: Some(l.space().labels().to_vec()),
    };
    to_canonical_json(&file)
}

pub fn generator_from_json(text: &str) -> Result<MarkovGenerator> {
    let file: GeneratorFile = serde_json::from_str(text).map_err(|e| Error::Format(format!("generator file: {e}")))?;
    MarkovGenerator::from_rows(file.mu, file.matrix, file.labels)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// Reports as CSV with one column per parameter name seen in any report.
pub fn reports_to_csv(reports: &[CheckReport]) -> Result<String> {
    let keys: BTreeSet<&str> = reports.iter().flat_map(|r| r.params.keys().map(String::as_str)).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["check_id", "pass", "lhs", "rhs", "slack", "tol"];
    header.extend(keys.iter().copied());
    header.push("note");
    w.write_record(&header).map_err(csv_err)?;
    for r in reports {
        let mut row = vec![
            r.check_id.clone(),
            r.pass.to_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.slack.to_string(),
            r.tol.to_string(),
        ];
        for k in &keys {
            row.push(match r.params.get(*k) {
                None => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
            });
        }
        row.push(r.note.clone().unwrap_or_default());
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(format!("csv: {e}"))
}
