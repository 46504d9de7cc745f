//! Deterministic JSON and CSV serialization.

use crate::error::{invalid, Result};
use crate::exactalg::{format_rat, Rat};
use serde::Serialize;
use serde_json::{Map, Number, Value};
use std::io::Write;

pub const SCHEMA_VERSION: u64 = 1;

/// A float with 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn float_number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    serde_json::from_str::<Number>(&format_float(x)).map_or(Value::Null, Value::Number)
}

/// Rewrites every floating-point number in `v` to 17 significant digits.
pub fn normalize_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => float_number(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize_floats(v))).collect()),
        other => other,
    }
}

/// The report as a JSON object carrying `"schema": 1`. Non-object reports
/// are wrapped under `"result"`.
pub fn envelope<T: Serialize>(report: &T) -> Result<Value> {
    let v = serde_json::to_value(report).map_err(|e| invalid(format!("cannot serialize report: {e}")))?;
    let mut obj = match normalize_floats(v) {
        Value::Object(o) => o,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    obj.insert("schema".into(), Value::from(SCHEMA_VERSION));
    Ok(Value::Object(obj))
}

pub fn render<T: Serialize>(report: &T) -> Result<String> {
    let v = envelope(report)?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

/// Writes a header and rows of floats.
pub fn write_csv<W: Write>(w: W, header: &[String], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let io = |e: csv::Error| invalid(format!("cannot write CSV: {e}"));
    out.write_record(header).map_err(io)?;
    for row in rows {
        out.write_record(row.iter().map(|&x| format_float(x))).map_err(io)?;
    }
    out.flush().map_err(|e| invalid(format!("cannot write CSV: {e}")))?;
    Ok(())
}
