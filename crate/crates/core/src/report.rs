//! Deterministic text output: floats with 17 significant digits and
//! schema-tagged JSON documents.

use serde::Serialize;
use serde_json::{Map, Number, Value};

/// `x` in scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Rewrites every non-integer number in `v` with [`fmt_f64`].
pub fn normalize_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            fmt_f64(x).parse::<Number>().map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(normalize_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, x)| (k, normalize_floats(x))).collect()),
        other => other,
    }
}

/// `{"schema": schema, ...payload}` pretty-printed, with a trailing newline.
pub fn document<T: Serialize>(schema: &str, payload: &T) -> String {
    let mut map = Map::new();
    map.insert("schema".into(), Value::String(schema.into()));
    match serde_json::to_value(payload).expect("serializable payload") {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("data".into(), other);
        }
    }
    let mut s = serde_json::to_string_pretty(&normalize_floats(Value::Object(map))).expect("valid json");
    s.push('\n');
    s
}
