//! JSON rendering. Objects use serde_json's default sorted map, so key order
//! is stable; exact scalars are strings (`"p/q"`), floats are numbers.

use nilkilling::linalg::Matrix;
use nilkilling::scalar::{format_rational, Rational, Scalar};
use serde_json::{json, Value};

pub trait ReportScalar: Scalar {
    fn to_json(&self) -> Value;
}

impl ReportScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
}

impl ReportScalar for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }
}

pub fn vector<F: ReportScalar>(v: &[F]) -> Value {
    Value::Array(v.iter().map(ReportScalar::to_json).collect())
}

pub fn matrix<F: ReportScalar>(m: &Matrix<F>) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(m.row(i))).collect())
}

pub fn matrices<F: ReportScalar>(ms: &[Matrix<F>]) -> Value {
    Value::Array(ms.iter().map(matrix).collect())
}

pub fn vectors<F: ReportScalar>(vs: &[Vec<F>]) -> Value {
    Value::Array(vs.iter().map(|v| vector(v)).collect())
}

/// Top-level document shared by all commands.
pub fn envelope(command: &str, mode: Option<&str>, body: Value) -> Value {
    let mut doc = json!({
        "command": command,
        "tool": { "name": "nilkilling", "version": env!("CARGO_PKG_VERSION") },
        "result": body,
    });
    if let Some(mode) = mode {
        doc["mode"] = json!(mode);
    }
    doc
}

pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use nilkilling::scalar::rat;

    #[test]
    fn rationals_are_strings_and_floats_are_numbers() {
        assert_eq!(rat(-3, 6).to_json(), json!("-1/2"));
        assert_eq!(rat(4, 2).to_json(), json!("2"));
        assert_eq!(0.25f64.to_json(), json!(0.25));
    }

    #[test]
    fn keys_render_sorted() {
        let doc = envelope("x", Some("exact"), json!({ "b": 1, "a": 2 }));
        let text = render(&doc);
        let order: Vec<usize> = ["\"command\"", "\"mode\"", "\"result\"", "\"tool\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
        assert!(text.ends_with('\n'));
    }
}
