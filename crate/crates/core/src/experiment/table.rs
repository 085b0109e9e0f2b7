//! Rectangular result tables with a metadata header, written as CSV or JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub name: String,
    /// Ordered `(key, value)` pairs; keys and values are single-line.
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed table: {0}")]
pub struct TableError(pub String);

fn single_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

impl ResultTable {
    pub fn new<S: Into<String>>(name: impl Into<String>, columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            name: name.into(),
            metadata: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row.
    ///
    /// # Panics
    /// If the row length differs from the column count.
    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table `{}`", self.name);
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: impl AsRef<str>, value: impl ToString) {
        let key = single_line(key.as_ref()).replace('=', ":");
        self.metadata.push((key.trim().to_string(), single_line(&value.to_string()).trim().to_string()));
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// `# key = value` header lines, the column header, then one row per line
    /// with 17 significant digits; LF line endings throughout.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# table = {}", single_line(&self.name)).expect("write to string");
        for (k, v) in &self.metadata {
            writeln!(out, "# {k} = {v}").expect("write to string");
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("write to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format!("{x:.16e}"))).expect("write to memory");
        }
        let body = w.into_inner().expect("flush to memory");
        out.push_str(std::str::from_utf8(&body).expect("utf-8 csv"));
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, TableError> {
        let mut name = None;
        let mut metadata = Vec::new();
        let mut body = String::new();
        for line in text.lines() {
            match line.strip_prefix('#') {
                Some(meta) => {
                    let (k, v) = meta
                        .split_once('=')
                        .ok_or_else(|| TableError(format!("metadata line without `=`: {line}")))?;
                    let (k, v) = (k.trim().to_string(), v.trim().to_string());
                    if k == "table" && name.is_none() {
                        name = Some(v);
                    } else {
                        metadata.push((k, v));
                    }
                }
                None => {
                    body.push_str(line);
                    body.push('\n');
                }
            }
        }
        let mut r = csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let columns: Vec<String> = r
            .headers()
            .map_err(|e| TableError(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| TableError(e.to_string()))?;
            let row = rec
                .iter()
                .map(|f| f.trim().parse::<f64>().map_err(|e| TableError(format!("`{f}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != columns.len() {
                return Err(TableError(format!("row of width {} under {} columns", row.len(), columns.len())));
            }
            rows.push(row);
        }
        Ok(Self {
            name: name.unwrap_or_default(),
            metadata,
            columns,
            rows,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite values serialise");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, TableError> {
        serde_json::from_str(text).map_err(|e| TableError(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        let mut t = ResultTable::new("demo", ["t", "value"]);
        t.meta("seed", 42);
        t.meta("note", "two\nlines");
        t.push(vec![0.0, 1.0 / 3.0]);
        t.push(vec![0.05, -2.5e-300]);
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# table = demo");
        assert_eq!(lines[1], "# seed = 42");
        assert_eq!(lines[2], "# note = two lines");
        assert_eq!(lines[3], "t,value");
        assert_eq!(lines[4], "0.0000000000000000e0,3.3333333333333331e-1");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn round_trips() {
        let t = sample();
        assert_eq!(ResultTable::from_csv(&t.to_csv()).unwrap(), t);
        assert_eq!(ResultTable::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(ResultTable::from_csv("a,b\n1,2\n3\n").is_err());
        assert!(ResultTable::from_csv("a\nx\n").is_err());
    }
}
