//! Structured key-value report with a text and a JSON rendering that carry
//! identical numbers. Reals are printed with four decimals, rounding exact
//! ties half to even.

use serde_json::{Map, Number, Value};

/// Four-decimal fixed rendering. Rust's fixed-precision formatting works on
/// the exact binary value and rounds exact ties to even.
pub fn fmt_real(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

/// The value a reader of the report sees, as a float.
pub fn round_real(x: f64) -> f64 {
    fmt_real(x).parse().expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReportValue {
    Real(f64),
    Count(u64),
    Text(String),
    Missing,
}

impl ReportValue {
    fn text(&self) -> String {
        match self {
            ReportValue::Real(x) => fmt_real(*x),
            ReportValue::Count(n) => n.to_string(),
            ReportValue::Text(s) => s.clone(),
            ReportValue::Missing => "n/a".to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            ReportValue::Real(x) => Number::from_f64(round_real(*x))
                .map(Value::Number)
                .unwrap_or(Value::Null),
            ReportValue::Count(n) => Value::from(*n),
            ReportValue::Text(s) => Value::from(s.clone()),
            ReportValue::Missing => Value::Null,
        }
    }
}

impl From<f64> for ReportValue {
    fn from(x: f64) -> Self {
        ReportValue::Real(x)
    }
}

impl From<Option<f64>> for ReportValue {
    fn from(x: Option<f64>) -> Self {
        x.map_or(ReportValue::Missing, ReportValue::Real)
    }
}

impl From<usize> for ReportValue {
    fn from(n: usize) -> Self {
        ReportValue::Count(n as u64)
    }
}

impl From<&str> for ReportValue {
    fn from(s: &str) -> Self {
        ReportValue::Text(s.to_string())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Section {
    pub name: String,
    pub entries: Vec<(String, ReportValue)>,
}

impl Section {
    pub fn put(&mut self, key: impl Into<String>, value: impl Into<ReportValue>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&ReportValue> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportDocument {
    pub sections: Vec<Section>,
}

impl ReportDocument {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn section(&mut self, name: impl Into<String>) -> &mut Section {
        self.sections.push(Section {
            name: name.into(),
            entries: Vec::new(),
        });
        self.sections.last_mut().unwrap()
    }

    pub fn find(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("[{}]\n", s.name));
            for (k, v) in &s.entries {
                out.push_str(&format!("{k} = {}\n", v.text()));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        for s in &self.sections {
            let body: Map<String, Value> = s
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v.json()))
                .collect();
            root.insert(s.name.clone(), Value::Object(body));
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("plain JSON");
        text.push('\n');
        text
    }
}
