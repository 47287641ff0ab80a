//! Serializable task reports. Exact numbers are always written as `p/q`
//! strings, never as floats.

use aereg::classes::Recognition;
use aereg::{Matrix, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub wall_time_ms: f64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub task: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    /// Human-readable lines, also used for the text format.
    pub summary: Vec<String>,
    #[serde(default)]
    pub certificate: Value,
    #[serde(default)]
    pub diagnostics: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

impl Report {
    pub fn new(task: &str, status: impl Into<String>) -> Self {
        Self {
            task: task.into(),
            status: status.into(),
            method: None,
            summary: Vec::new(),
            certificate: Value::Null,
            diagnostics: Value::Null,
            meta: None,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("task: {}\nstatus: {}\n", self.task, self.status);
        if let Some(m) = &self.method {
            out += &format!("method: {m}\n");
        }
        for line in &self.summary {
            out += line;
            out.push('\n');
        }
        if let Some(meta) = &self.meta {
            out += &format!("wall time: {:.3} ms\n", meta.wall_time_ms);
        }
        out
    }
}

pub fn rational_json(v: &Rational) -> Value {
    Value::String(v.to_string())
}

pub fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

pub fn matrix_json(a: &Matrix<Rational>) -> Value {
    Value::Array(a.to_rows().iter().map(|r| vector_json(r)).collect())
}

pub fn vector_text(v: &[Rational]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

pub fn matrix_text(a: &Matrix<Rational>) -> String {
    format!("({})", a.to_rows().iter().map(|r| vector_text(r)).collect::<Vec<_>>().join(", "))
}

pub fn recognition_json(rec: &Recognition<Rational>) -> Value {
    json!({
        "class": rec.class,
        "holds": rec.holds,
        "tested": matrix_json(&rec.tested),
        "member": rec.member.as_ref().map(matrix_json),
        "exists_choice": rec.exists_choice.as_ref().map(matrix_json),
        "positive_vector": rec.positive_vector.as_deref().map(vector_json),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use aereg::Scalar;

    #[test]
    fn rationals_serialize_as_strings() {
        let a = Matrix::from_rows(vec![vec![Rational::ratio(4, 5), Rational::ratio(-2, 1)]]).unwrap();
        assert_eq!(matrix_json(&a), json!([["4/5", "-2"]]));
        assert_eq!(matrix_text(&a), "((4/5, -2))");
    }

    #[test]
    fn report_round_trips_through_json() {
        let mut r = Report::new("check-ae", "AE_REGULAR");
        r.method = Some("ae-m-matrix".into());
        r.summary.push("line".into());
        r.certificate = json!({"tested": [["1"]]});
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&text).unwrap(), r);
    }
}
