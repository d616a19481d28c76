//! CSV and JSON rendering.

use std::collections::BTreeMap;

use serde_json::{Map, Value};

/// A named-column table of numbers plus the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub params: BTreeMap<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// 17 significant digits in scientific notation; independent of locale.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

impl Table {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            params: BTreeMap::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, &v)| (c.to_string(), Value::from(v)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), Value::from(self.command));
        top.insert(
            "params".into(),
            Value::Object(self.params.clone().into_iter().collect()),
        );
        top.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("values are serializable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_number(std::f64::consts::E), "2.7182818284590451e0");
        assert_eq!(format_number(-0.1), "-1.0000000000000001e-1");
        assert_eq!(format_number(0.0), "0.0000000000000000e0");
        for v in [0.1, 1.0 / 3.0, 6.02e23, -1e-300, f64::MIN_POSITIVE] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("deriv", vec!["x", "value"]);
        t.rows = vec![vec![0.0, 1.0], vec![0.5, f64::NAN]];
        assert_eq!(
            t.to_csv(),
            "x,value\n0.0000000000000000e0,1.0000000000000000e0\n5.0000000000000000e-1,nan\n"
        );
    }

    #[test]
    fn json_keys_sorted() {
        let mut t = Table::new("map", vec!["zeta", "q"]).param("l0", 2.0).param("b", "x");
        t.rows = vec![vec![0.5, 0.75]];
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["command", "params", "rows"]);
        let row_keys: Vec<_> = v["rows"][0].as_object().unwrap().keys().cloned().collect();
        assert_eq!(row_keys, ["q", "zeta"]);
        assert_eq!(v["rows"][0]["q"], 0.75);
    }
}
