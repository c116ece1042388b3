use serde_json::{json, Map, Value as Json};
use std::fmt::Write as _;

use super::spec::SweepSpec;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Flag(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // 12 significant digits; −0 prints as 0
            Cell::Num(x) => format!("{:.11e}", if *x == 0.0 { 0.0 } else { *x }),
            Cell::Int(i) => i.to_string(),
            Cell::Flag(b) => u8::from(*b).to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) => Json::Null,
            Cell::Int(i) => json!(i),
            Cell::Flag(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Run-level results such as closed-form markers, in insertion order.
    pub metadata: Vec<(String, Json)>,
    /// Set when some optimizer cell did not converge.
    pub unconverged: bool,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<Json>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.columns.iter().position(|n| n == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[c] {
                    Cell::Num(x) => x,
                    Cell::Int(i) => i as f64,
                    Cell::Flag(b) => f64::from(u8::from(b)),
                })
                .collect(),
        )
    }

    pub fn to_csv(&self, spec: &SweepSpec) -> String {
        let mut out = String::new();
        writeln!(out, "# esdkit {}", env!("CARGO_PKG_VERSION")).unwrap();
        writeln!(out, "# experiment = {}", spec.experiment().name()).unwrap();
        writeln!(out, "# spec = {}", spec.embedded()).unwrap();
        for (k, v) in &self.metadata {
            writeln!(out, "# {k} = {v}").unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn to_json(&self, spec: &SweepSpec) -> String {
        let meta: Map<String, Json> = self.metadata.iter().cloned().collect();
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|r| Json::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "experiment": spec.experiment().name(),
            "spec": serde_json::to_value(spec).expect("spec serializes"),
            "metadata": meta,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(Cell::Num(1.0 / 3.0).csv(), "3.33333333333e-1");
        assert_eq!(Cell::Num(-0.0).csv(), "0.00000000000e0");
        assert_eq!(Cell::Flag(true).csv(), "1");
    }
}
