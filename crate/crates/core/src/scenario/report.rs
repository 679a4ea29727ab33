use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub type Diagnostics = BTreeMap<String, Value>;

/// Whether `pass` compares the absolute or the relative error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Absolute,
    Relative,
}

/// One row of a report. Errored checks carry `null` numbers and an `error`
/// diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub expected: Option<f64>,
    pub measured: Option<f64>,
    pub abs_error: Option<f64>,
    pub rel_error: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub diagnostics: Diagnostics,
}

impl CheckRecord {
    pub fn measured(
        name: &str,
        expected: f64,
        measured: f64,
        metric: Metric,
        tolerance: f64,
        mut diagnostics: Diagnostics,
    ) -> Self {
        let abs_error = (measured - expected).abs();
        let rel_error = (expected != 0.0).then(|| abs_error / expected.abs());
        let error = match metric {
            Metric::Absolute => Some(abs_error),
            Metric::Relative => rel_error,
        };
        diagnostics.insert("compared".into(), serde_json::to_value(metric).expect("metric"));
        Self {
            name: name.to_string(),
            expected: Some(expected),
            measured: Some(measured),
            abs_error: Some(abs_error),
            rel_error,
            tolerance,
            pass: error.is_some_and(|e| e <= tolerance),
            diagnostics,
        }
    }

    pub fn errored(name: &str, tolerance: f64, message: String) -> Self {
        let mut diagnostics = Diagnostics::new();
        diagnostics.insert("error".into(), Value::String(message));
        Self {
            name: name.to_string(),
            expected: None,
            measured: None,
            abs_error: None,
            rel_error: None,
            tolerance,
            pass: false,
            diagnostics,
        }
    }

    /// Keeps the numbers but fails the check with an error diagnostic.
    pub fn mark_errored(&mut self, message: String) {
        self.pass = false;
        self.diagnostics.insert("error".into(), Value::String(message));
    }

    pub fn is_errored(&self) -> bool {
        self.diagnostics.contains_key("error")
    }

    /// The error that `pass` is judged on.
    pub fn compared_error(&self) -> Option<f64> {
        match self.diagnostics.get("compared").and_then(Value::as_str) {
            Some("relative") => self.rel_error,
            _ => self.abs_error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMeta {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    pub config_sha256: String,
    pub grid: Value,
    pub constants: Value,
    pub state: Value,
    pub boosts: Vec<f64>,
    pub timestamp: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub meta: ReportMeta,
    pub checks: Vec<CheckRecord>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits::default());
        self.serialize(&mut ser).expect("report serializes");
        out.push(b'\n');
        String::from_utf8(out).expect("utf-8 json")
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Pretty JSON with every float written to 17 significant digits.
struct SignificantDigits<'a> {
    pretty: serde_json::ser::PrettyFormatter<'a>,
}

impl Default for SignificantDigits<'_> {
    fn default() -> Self {
        Self {
            pretty: serde_json::ser::PrettyFormatter::with_indent(b"  "),
        }
    }
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.pretty.$name(w $(, $arg)*)
            }
        )*
    };
}

impl serde_json::ser::Formatter for SignificantDigits<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> ScenarioReport {
        ScenarioReport {
            meta: ReportMeta {
                tool: "t".into(),
                version: "0".into(),
                scenario: "s".into(),
                config_sha256: "00".into(),
                grid: Value::Null,
                constants: Value::Null,
                state: Value::Null,
                boosts: vec![0.6],
                timestamp: "now".into(),
            },
            checks: vec![
                CheckRecord::measured("a", 0.5, 0.5 + 1e-4, Metric::Absolute, 1e-3, Diagnostics::new()),
                CheckRecord::errored("b", 1e-6, "boom".into()),
            ],
        }
    }

    #[test]
    fn pass_flag_follows_metric() {
        let r = CheckRecord::measured("x", 2.0, 2.1, Metric::Relative, 0.06, Diagnostics::new());
        assert!(r.pass);
        let r = CheckRecord::measured("x", 2.0, 2.1, Metric::Absolute, 0.06, Diagnostics::new());
        assert!(!r.pass);
        let r = CheckRecord::measured("x", 0.0, 1e-9, Metric::Relative, 1.0, Diagnostics::new());
        assert!(!r.pass && r.rel_error.is_none());
    }

    #[test]
    fn json_has_seventeen_digits_and_round_trips() {
        let r = report();
        let text = r.to_json();
        assert!(text.contains("5.0000000000000000e-1"), "{text}");
        let v: Value = serde_json::from_str(&text).unwrap();
        let measured = v["checks"][0]["measured"].as_f64().unwrap();
        assert_eq!(measured, 0.5 + 1e-4);
        assert!(v["checks"][1]["measured"].is_null());
        assert_eq!(v["checks"][1]["diagnostics"]["error"], "boom");
        assert!(!r.passed());
    }
}
