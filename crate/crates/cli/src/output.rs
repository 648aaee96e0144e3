//! Tabular output rendered as CSV (17 significant digits) or JSON.

use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(u64),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

/// Rows for CSV; JSON wraps them with the command name and optional metadata,
/// unless a command supplies its own document.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Output {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Map<String, Value>,
    pub document: Option<Value>,
}

impl Output {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.meta.insert(key.to_string(), value.into());
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, command: &str) -> String {
        let doc = self.document.clone().unwrap_or_else(|| {
            let rows: Vec<Value> = self
                .rows
                .iter()
                .map(|row| Value::Object(self.header.iter().zip(row).map(|(h, c)| (h.to_string(), c.json())).collect()))
                .collect();
            let mut doc = Map::new();
            doc.insert("command".into(), command.into());
            if !self.meta.is_empty() {
                doc.insert("meta".into(), Value::Object(self.meta.clone()));
            }
            doc.insert("rows".into(), Value::Array(rows));
            Value::Object(doc)
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("json values serialise");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_mirror() {
        let mut out = Output::new(vec!["name", "x", "note"]);
        out.push(vec!["A0".into(), 0.1.into(), Cell::Empty]);
        out.push(vec!["a,b".into(), (-2.5).into(), "ok".into()]);
        assert_eq!(out.to_csv(), "name,x,note\nA0,1.0000000000000001e-1,\n\"a,b\",-2.5000000000000000e0,ok\n");
        let v: Value = serde_json::from_str(&out.to_json("demo")).unwrap();
        assert_eq!(v["rows"][0]["x"], 0.1);
        assert_eq!(v["rows"][0]["note"], Value::Null);
        assert_eq!(v["command"], "demo");
    }
}
