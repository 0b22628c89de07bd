//! Column-oriented result tables and their CSV / JSON encodings.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.to_string(),
            unit: unit.to_string(),
        }
    }

    /// `name[unit]`, as written in the CSV header.
    pub fn header(&self) -> String {
        format!("{}[{}]", self.name, self.unit)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    /// Ordered `key=value` pairs echoed into the metadata line.
    pub meta: Vec<(String, String)>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Self {
            meta: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn column_index(&self, name: &str, unit: &str) -> Option<usize> {
        self.columns
            .iter()
            .position(|c| c.name == name && c.unit == unit)
    }

    pub fn column(&self, name: &str, unit: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name, unit)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn encode(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("#");
        for (k, v) in &self.meta {
            let _ = write!(out, " {k}={v}");
        }
        out.push('\n');
        let header: Vec<String> = self.columns.iter().map(Column::header).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let meta: Map<String, Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let columns: Vec<Value> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let values: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| serde_json::Number::from_f64(r[i]).map_or(Value::Null, Value::Number))
                    .collect();
                json!({ "name": c.name, "unit": c.unit, "values": values })
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&json!({ "meta": meta, "columns": columns }))
            .expect("tables always serialize");
        s.push('\n');
        s
    }

    pub fn parse_csv(text: &str) -> Result<Table, String> {
        let mut lines = text.lines();
        let meta_line = lines.next().ok_or("empty file")?;
        let meta_body = meta_line
            .strip_prefix('#')
            .ok_or("first line is not a metadata comment")?;
        let meta = meta_body
            .split_whitespace()
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| format!("bad metadata entry '{kv}'"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let header = lines.next().ok_or("missing header")?;
        let columns = header
            .split(',')
            .map(|h| {
                let (name, unit) = h
                    .strip_suffix(']')
                    .and_then(|h| h.split_once('['))
                    .ok_or_else(|| format!("column '{h}' has no unit"))?;
                Ok(Column::new(name, unit))
            })
            .collect::<Result<Vec<_>, String>>()?;
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let row = line
                .split(',')
                .map(|c| c.parse::<f64>().map_err(|_| format!("bad number '{c}'")))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != columns.len() {
                return Err(format!(
                    "row has {} cells, header has {}",
                    row.len(),
                    columns.len()
                ));
            }
            rows.push(row);
        }
        Ok(Table {
            meta,
            columns,
            rows,
        })
    }

    pub fn parse_json(text: &str) -> Result<Table, String> {
        let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let meta = v["meta"]
            .as_object()
            .ok_or("missing meta")?
            .iter()
            .map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string()))
            .collect();
        let cols = v["columns"].as_array().ok_or("missing columns")?;
        let mut columns = Vec::new();
        let mut data: Vec<Vec<f64>> = Vec::new();
        for c in cols {
            columns.push(Column::new(
                c["name"].as_str().ok_or("column without name")?,
                c["unit"].as_str().ok_or("column without unit")?,
            ));
            let values = c["values"].as_array().ok_or("column without values")?;
            data.push(
                values
                    .iter()
                    .map(|x| x.as_f64().unwrap_or(f64::NAN))
                    .collect(),
            );
        }
        let n = data.first().map_or(0, Vec::len);
        let rows = (0..n)
            .map(|i| data.iter().map(|col| col[i]).collect())
            .collect();
        Ok(Table {
            meta,
            columns,
            rows,
        })
    }
}

/// Shortest representation that parses back to the same `f64`; exponent form
/// for very small or very large magnitudes.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
