//! Tabular output: CSV (canonical) and a JSON mirror, both with
//! deterministic row order and 12-significant-digit numbers.

use std::io::Write;

#[derive(Debug, Clone)]
pub enum Value {
    Num(f64),
    Text(String),
    /// Rendered as an empty CSV field / JSON null.
    Missing,
}

/// 12 significant digits, scientific notation.
pub fn fmt_sig12(v: f64) -> String {
    format!("{v:.11e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub struct Table {
    /// Leading `#` comment lines (figure tags, fitted quantities).
    pub comments: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { comments: Vec::new(), columns, rows: Vec::new() }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row arity mismatch");
        self.rows.push(row);
    }

    pub fn write(&self, out: &mut dyn Write, format: Format) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for c in &self.comments {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::Num(x) => fmt_sig12(*x),
                    Value::Text(s) => s.clone(),
                    Value::Missing => String::new(),
                })
                .collect();
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut doc = serde_json::Map::new();
        doc.insert(
            "comments".into(),
            serde_json::Value::Array(
                self.comments.iter().map(|c| serde_json::Value::String(c.clone())).collect(),
            ),
        );
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (col, v) in self.columns.iter().zip(row) {
                    let jv = match v {
                        // parse the 12-digit rendering so CSV and JSON
                        // mirrors carry identical values
                        Value::Num(x) => serde_json::Value::from(
                            fmt_sig12(*x).parse::<f64>().unwrap(),
                        ),
                        Value::Text(s) => serde_json::Value::String(s.clone()),
                        Value::Missing => serde_json::Value::Null,
                    };
                    obj.insert((*col).into(), jv);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        doc.insert("rows".into(), serde_json::Value::Array(rows));
        writeln!(out, "{}", serde_json::Value::Object(doc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_at_12_digits() {
        let vals = [1.0 / 3.0, -2.719e-11, 6.02214076e23, 0.0];
        for v in vals {
            let s = fmt_sig12(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(fmt_sig12(back), s);
        }
    }

    #[test]
    fn empty_rows_give_header_only() {
        let t = Table::new(vec!["a", "b"]);
        let mut buf = Vec::new();
        t.write(&mut buf, Format::Csv).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n");
    }

    #[test]
    #[should_panic(expected = "arity")]
    fn arity_mismatch_panics() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Value::Num(1.0)]);
    }
}
