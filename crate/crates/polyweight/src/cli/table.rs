//! Result tables and their CSV form.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Input,
    Computed,
    Fitted,
    Censored,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Int(u64),
    Float(f64),
    Bool(bool),
}

/// Shortest round-trip decimal; non-finite values as `inf`, `-inf`, `nan`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:?}")
    }
}

impl Value {
    pub fn render(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => format_float(*v),
            Value::Bool(v) => v.to_string(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Int(v) => Some(v as f64),
            Value::Float(v) => Some(v),
            Value::Bool(_) => None,
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Value::Int(v) => s.serialize_u64(v),
            Value::Float(v) if v.is_finite() => s.serialize_f64(v),
            Value::Float(v) => s.serialize_str(&format_float(v)),
            Value::Bool(v) => s.serialize_bool(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub value: Value,
    pub provenance: Provenance,
}

impl Cell {
    pub fn input(n: u64) -> Self {
        Cell {
            value: Value::Int(n),
            provenance: Provenance::Input,
        }
    }

    pub fn computed(x: f64) -> Self {
        Cell {
            value: Value::Float(x),
            provenance: Provenance::Computed,
        }
    }

    pub fn count(k: u64) -> Self {
        Cell {
            value: Value::Int(k),
            provenance: Provenance::Computed,
        }
    }

    pub fn flag(b: bool) -> Self {
        Cell {
            value: Value::Bool(b),
            provenance: Provenance::Computed,
        }
    }

    pub fn with(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("value", &self.value)?;
        map.serialize_entry("provenance", &self.provenance)?;
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row does not match the table schema"
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric `(x, y)` pairs for two columns, skipping non-finite entries.
    pub fn series(&self, x: &str, y: &str) -> Vec<(f64, f64)> {
        let (Some(i), Some(j)) = (self.column(x), self.column(y)) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .filter_map(|r| Some((r[i].value.as_f64()?, r[j].value.as_f64()?)))
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(
                &row.iter()
                    .map(|c| c.value.render())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rendering() {
        let mut t = Table::new(&["n", "coeff_log", "n_x1", "censored"]);
        t.push(vec![
            Cell::input(64),
            Cell::computed(-0.1),
            Cell::computed(8.0),
            Cell::flag(false),
        ]);
        t.push(vec![
            Cell::input(128),
            Cell::computed(f64::NEG_INFINITY),
            Cell::computed(1e-300),
            Cell::flag(true),
        ]);
        assert_eq!(
            t.to_csv(),
            "n,coeff_log,n_x1,censored\n64,-0.1,8.0,false\n128,-inf,1e-300,true\n"
        );
        for x in [0.1 + 0.2, 1.0 / 3.0, 6.02e23, -5e-324] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(t.series("n", "coeff_log"), vec![(64.0, -0.1)]);
    }

    #[test]
    fn json_cells_keep_provenance() {
        let c = Cell::computed(f64::NEG_INFINITY).with(Provenance::Censored);
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"value":"-inf","provenance":"censored"}"#
        );
    }
}
