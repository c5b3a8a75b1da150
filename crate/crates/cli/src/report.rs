use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::problem::ProblemFile;

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<ProblemFile>,
    /// Each entry carries a verdict and the operation that produced it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypotheses: Option<Value>,
    pub result: Value,
    #[serde(default)]
    pub caveats: Vec<String>,
    pub timing_ms: f64,
}

impl Report {
    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    /// One `path = value` line per leaf, timing last.
    pub fn to_text(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        let timing = v.as_object_mut().and_then(|o| o.remove("timing_ms"));
        let mut out = String::new();
        flatten("", &v, &mut out);
        if let Some(t) = timing {
            out.push_str(&format!("timing_ms = {t}\n"));
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) if a.is_empty() => out.push_str(&format!("{prefix} = []\n")),
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix} = {s}\n")),
        other => out.push_str(&format!("{prefix} = {other}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_lines() {
        let r = Report {
            command: "x".into(),
            input: None,
            hypotheses: None,
            result: serde_json::json!({"a": [1, "b"], "c": {"d": true}, "e": []}),
            caveats: vec![],
            timing_ms: 1.5,
        };
        assert_eq!(
            r.to_text(),
            "caveats = []\ncommand = x\nresult.a.0 = 1\nresult.a.1 = b\nresult.c.d = true\nresult.e = []\ntiming_ms = 1.5\n"
        );
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
