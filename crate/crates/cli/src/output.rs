//! Deterministic number formatting and file emission.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

/// Significant digits of every emitted float.
const DIGITS: usize = 9;

/// `%.9g`-style formatting: 9 significant digits, trailing zeros removed,
/// exponent form outside `1e-4 <= |v| < 1e9`.
pub fn fmt_g(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS as i32).contains(&exp) {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Rounds every float in a JSON tree to [`DIGITS`] significant digits.
fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let rounded: f64 = fmt_g(x).parse().unwrap_or(x);
            serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with sorted keys and rounded floats.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = normalize(serde_json::to_value(value)?);
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

/// A CSV cell.
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_g(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// Header plus rows.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table {
            header: header.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",") + "\n";
        for row in &self.rows {
            out += &row.iter().map(Cell::render).collect::<Vec<_>>().join(",");
            out.push('\n');
        }
        out
    }
}

/// Collects output files and writes the run manifest.
pub struct Emitter {
    dir: PathBuf,
    written: Vec<String>,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    parameters: BTreeMap<String, Value>,
    tool_version: &'a str,
    outputs: &'a [String],
}

impl Emitter {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Emitter {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write(name, &to_json(value)?)
    }

    /// Writes `<command>.manifest.json` and returns the paths of all outputs.
    pub fn finish<P: Serialize>(mut self, command: &str, params: &P) -> Result<Vec<PathBuf>> {
        let parameters = match normalize(serde_json::to_value(params)?) {
            Value::Object(map) => map.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        let manifest = RunManifest {
            command,
            parameters,
            tool_version: env!("CARGO_PKG_VERSION"),
            outputs: &self.written,
        };
        let name = format!("{command}.manifest.json");
        let text = to_json(&manifest)?;
        self.write(&name, &text)?;
        Ok(self.written.iter().map(|f| self.dir.join(f)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_format() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (0.1, "0.1"),
            (-0.0627, "-0.0627"),
            (0.267949192431123, "0.267949192"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (1.5e-7, "1.5e-07"),
            (9.9999999999, "10"),
            (0.00001, "1e-05"),
            (0.0001234, "0.0001234"),
            (f64::NAN, "nan"),
            (f64::NEG_INFINITY, "-inf"),
        ];
        for (v, s) in cases {
            assert_eq!(fmt_g(v), s, "{v}");
        }
    }

    #[test]
    fn json_is_rounded_and_sorted() {
        #[derive(Serialize)]
        struct S {
            zeta: f64,
            alpha: f64,
            count: usize,
        }
        let text = to_json(&S {
            zeta: 1.0 / 3.0,
            alpha: 2.0,
            count: 3,
        })
        .unwrap();
        assert_eq!(text, "{\n  \"alpha\": 2.0,\n  \"count\": 3,\n  \"zeta\": 0.333333333\n}\n");
    }

    #[test]
    fn csv_quoting() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![Cell::from(0.5), Cell::from("x,y"), Cell::Empty]);
        assert_eq!(t.to_csv(), "a,b,c\n0.5,\"x,y\",\n");
    }
}
