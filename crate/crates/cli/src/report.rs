//! Report model and its two renderings: delimiter-separated values and a JSON
//! document. Floats always print with 12 significant digits.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

/// Significant digits for every printed float.
pub const FLOAT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::Number(Number::from_str(&v.to_string()).expect("integer literal")),
            Cell::Float(v) if v.is_finite() => {
                Value::Number(Number::from_str(&format_float(*v)).expect("float literal"))
            }
            Cell::Float(v) => Value::String(format_float(*v)),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

macro_rules! cell_from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(v as i128)
            }
        }
    )*};
}
cell_from_int!(i32, i64, u32, u64, usize, u128, i128);

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// `%.12g`-style rendering: fixed notation for moderate exponents, otherwise
/// scientific; trailing zeros dropped.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", FLOAT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..FLOAT_DIGITS as i32).contains(&exp) {
        let decimals = (FLOAT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub config_hash: String,
    /// Run settings echoed into the header (tolerances, seed, ...).
    pub settings: Vec<(String, Cell)>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, config_hash: &str) -> Self {
        Self {
            command: command.into(),
            version: cantor_core::VERSION.into(),
            config_hash: config_hash.into(),
            settings: Vec::new(),
            tables: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn setting(&mut self, key: &str, value: impl Into<Cell>) {
        self.settings.push((key.into(), value.into()));
    }

    pub fn table(&mut self, t: Table) {
        self.tables.push(t);
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    /// Tab-separated sections; header lines start with `#`.
    pub fn to_dsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# cantor-index\t{}", self.version);
        let _ = writeln!(out, "# command\t{}", self.command);
        let _ = writeln!(out, "# config-sha256\t{}", self.config_hash);
        for (k, v) in &self.settings {
            let _ = writeln!(out, "# {}\t{}", k, clean(&v.render()));
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n[{}]", t.name);
            let _ = writeln!(out, "{}", t.columns.join("\t"));
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(|c| clean(&c.render())).collect();
                let _ = writeln!(out, "{}", cells.join("\t"));
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\n[checks]\ncheck\tresult\tdetail");
            for c in &self.checks {
                let _ = writeln!(out, "{}\t{}\t{}", c.name, if c.pass { "pass" } else { "fail" }, clean(&c.detail));
            }
        }
        out
    }

    /// Pretty JSON with keys in a fixed order.
    pub fn to_doc(&self) -> String {
        let mut root = Map::new();
        root.insert("tool".into(), "cantor-index".into());
        root.insert("version".into(), self.version.clone().into());
        root.insert("command".into(), self.command.clone().into());
        root.insert("config_sha256".into(), self.config_hash.clone().into());
        let settings: Map<String, Value> = self.settings.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        root.insert("settings".into(), Value::Object(settings));
        let tables: Vec<Value> = self
            .tables
            .iter()
            .map(|t| {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| Value::Object(t.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect()))
                    .collect();
                let mut m = Map::new();
                m.insert("name".into(), t.name.clone().into());
                m.insert("rows".into(), Value::Array(rows));
                Value::Object(m)
            })
            .collect();
        root.insert("tables".into(), Value::Array(tables));
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("name".into(), c.name.clone().into());
                m.insert("pass".into(), c.pass.into());
                m.insert("detail".into(), c.detail.clone().into());
                Value::Object(m)
            })
            .collect();
        root.insert("checks".into(), Value::Array(checks));
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable report");
        s.push('\n');
        s
    }
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(0.1 + 0.2), "0.3");
        assert_eq!(format_float(-2.5), "-2.5");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(123456789012345.0), "1.23456789012e14");
        assert_eq!(format_float(1e-7), "1e-7");
        assert_eq!(format_float(2f64.sqrt()), "1.41421356237");
        assert_eq!(format_float(-1e-20), "-1e-20");
        assert_eq!(format_float(f64::INFINITY), "inf");
        assert_eq!(format_float(-0.0), "0");
    }

    #[test]
    fn renderings_are_stable() {
        let mut r = Report::new("space", "abc");
        r.setting("tolerance", 1e-9);
        let mut t = Table::new("levels", &["level", "count", "ratio"]);
        t.push(vec![0.into(), 1.into(), Cell::Empty]);
        t.push(vec![1.into(), 2.into(), 2.0.into()]);
        r.table(t);
        r.check("ok", true, "x");
        let dsv = r.to_dsv();
        assert!(dsv.contains("# config-sha256\tabc\n"));
        assert!(dsv.contains("level\tcount\tratio\n0\t1\t\n1\t2\t2\n"));
        assert!(dsv.contains("ok\tpass\tx"));
        let doc: Value = serde_json::from_str(&r.to_doc()).unwrap();
        assert_eq!(doc["tables"][0]["rows"][1]["count"], 2);
        assert_eq!(doc["settings"]["tolerance"].to_string(), "1e-9");
        assert_eq!(r.to_doc(), r.clone().to_doc());
    }

    proptest::proptest! {
        #[test]
        fn twelve_significant_digits(x in proptest::num::f64::NORMAL) {
            let s = format_float(x);
            let back: f64 = s.parse().unwrap();
            proptest::prop_assert!(((back - x) / x).abs() <= 5e-12, "{} -> {}", x, s);
            let digits = s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).collect::<String>();
            proptest::prop_assert!(digits.trim_start_matches('0').len() <= FLOAT_DIGITS);
        }
    }
}
