use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use svirlab::repmat::WindowResidual;
use svirlab::scalar::format_rational;
use svirlab::Rational;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl From<bool> for Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub backend: Backend,
    pub value: Value,
    pub residual: Value,
    pub verdict: Verdict,
}

impl Check {
    pub fn new(name: impl Into<String>, backend: Backend, value: Value, residual: Value, ok: bool) -> Self {
        Check { name: name.into(), backend, value, residual, verdict: ok.into() }
    }
}

/// The checksummed part of a report: no timings, deterministic key order.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub results: Value,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(command: &str, config: BTreeMap<String, String>, results: Value, checks: Vec<Check>) -> Self {
        let failures: Vec<String> =
            checks.iter().filter(|c| c.verdict == Verdict::Fail).map(|c| c.name.clone()).collect();
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            results,
            verdict: failures.is_empty().into(),
            checks,
            failures,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Pretty JSON with a trailing newline; `timing` goes after the body.
    pub fn to_json(&self, timing: Option<&BTreeMap<String, f64>>) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let (Some(t), Value::Object(map)) = (timing, &mut v) {
            map.insert("timing".into(), json!(t));
        }
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn q(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn rational_matrix(m: &svirlab::RationalMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|row| Value::Array(row.iter().map(q).collect())).collect())
}

/// Exact zeros print as `"0"`; float residuals as numbers.
pub fn residual(r: &WindowResidual) -> Value {
    match r {
        WindowResidual::WindowEmpty => Value::String("window empty".into()),
        WindowResidual::Value { exact_zero: true, .. } => Value::String("0".into()),
        WindowResidual::Value { max_abs, .. } => json!(max_abs),
    }
}

/// CSV for level tables and matrices.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    if !header.is_empty() {
        out.push_str(&header.join(","));
        out.push('\n');
    }
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn body_is_stable_and_timing_is_appended() {
        let checks = vec![Check::new("a", Backend::Exact, json!("1"), json!("0"), true)];
        let r = Report::new("index", BTreeMap::from([("c".into(), "7/10".into())]), json!({"x": 1.5}), checks);
        let body = r.to_json(None);
        assert_eq!(body, r.to_json(None));
        assert!(body.starts_with("{\n  \"schemaVersion\": 1,"));
        let timed = r.to_json(Some(&BTreeMap::from([("total".into(), 0.25)])));
        assert!(timed.contains("\"timing\""));
        assert!(r.passed());
        let failing = Report::new("x", BTreeMap::new(), Value::Null, vec![Check::new("b", Backend::Float, Value::Null, json!(1e-3), false)]);
        assert_eq!(failing.failures, vec!["b".to_string()]);
    }
}
