//! Deterministic line-oriented reports with a JSON twin. Entries render in
//! insertion order in both formats; notes carry the mathematical statement a
//! verdict instantiates.

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: Value,
    note: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    entries: Vec<Entry>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.entries.push(Entry {
            key: key.into(),
            value: value.into(),
            note: None,
        });
    }

    pub fn push_noted(
        &mut self,
        key: impl Into<String>,
        value: impl Into<Value>,
        note: impl Into<String>,
    ) {
        self.entries.push(Entry {
            key: key.into(),
            value: value.into(),
            note: Some(note.into()),
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|e| e.key == key).map(|e| &e.value)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = String::new();
                for e in &self.entries {
                    out.push_str(&e.key);
                    out.push_str(": ");
                    out.push_str(&render_value(&e.value));
                    if let Some(note) = &e.note {
                        out.push_str(" -- ");
                        out.push_str(note);
                    }
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let mut map = serde_json::Map::new();
                for e in &self.entries {
                    map.insert(e.key.clone(), e.value.clone());
                }
                let statements: serde_json::Map<String, Value> = self
                    .entries
                    .iter()
                    .filter_map(|e| {
                        e.note
                            .as_ref()
                            .map(|n| (e.key.clone(), Value::String(n.clone())))
                    })
                    .collect();
                if !statements.is_empty() {
                    map.insert("statements".to_string(), Value::Object(statements));
                }
                let mut s =
                    serde_json::to_string_pretty(&Value::Object(map)).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).expect("value serializes"),
    }
}
