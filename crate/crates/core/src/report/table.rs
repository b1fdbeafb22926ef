use std::io::Write;

use crate::error::{Error, Result};

/// Formats `x` like C's `%.17g`: 17 significant digits, trailing zeros
/// trimmed, exponent form outside `1e-4 <= |x| < 1e17`.
pub fn fmt_g17(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_g17(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => fmt_g17(*x),
            Cell::Num(_) => "null".into(),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("string serialises"),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
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

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Column-named rows, written as CSV or as a JSON array of flat objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// Value of `column` in row `i`.
    pub fn get(&self, i: usize, column: &str) -> Option<&Cell> {
        let j = self.columns.iter().position(|c| *c == column)?;
        self.rows.get(i)?.get(j)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Consistency(format!("csv: {e}"));
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Consistency(format!("csv: {e}")))
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        let mut s = String::from("[");
        for (k, row) in self.rows.iter().enumerate() {
            s.push_str(if k == 0 { "\n  {" } else { ",\n  {" });
            for (j, (col, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    s.push_str(", ");
                }
                s.push_str(&serde_json::to_string(col).expect("string serialises"));
                s.push_str(": ");
                s.push_str(&cell.json());
            }
            s.push('}');
        }
        s.push_str(if self.rows.is_empty() { "]\n" } else { "\n]\n" });
        out.write_all(s.as_bytes())
            .map_err(|e| Error::Consistency(format!("json: {e}")))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }

    pub fn to_json_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_json(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn g17_matches_c_printf() {
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (5.0 / 6.0, "0.83333333333333337"),
            (0.5 + std::f64::consts::SQRT_2 / 4.0, "0.85355339059327373"),
            (std::f64::consts::PI, "3.1415926535897931"),
            (1e-16, "9.9999999999999998e-17"),
            (1e-5, "1.0000000000000001e-05"),
            (1e-4, "0.0001"),
            (-2.5e20, "-2.5e+20"),
            (0.0, "0"),
            (-0.0, "-0"),
            (123456.0, "123456"),
        ];
        for (x, expect) in cases {
            assert_eq!(fmt_g17(x), expect, "{x:e}");
        }
        assert_eq!(fmt_g17(f64::NAN), "nan");
        assert_eq!(fmt_g17(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn csv_and_json_layout() {
        let mut t = Table::new(&["theta", "ok", "name"]);
        t.push(vec![0.25.into(), true.into(), "v1".into()]);
        t.push(vec![f64::NAN.into(), false.into(), "a\"b".into()]);
        assert_eq!(t.to_csv_string(), "theta,ok,name\n0.25,true,v1\nnan,false,\"a\"\"b\"\n");
        let json = t.to_json_string();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed[0]["theta"], 0.25);
        assert!(parsed[1]["theta"].is_null());
        assert_eq!(parsed[1]["name"], "a\"b");
        assert_eq!(Table::new(&["x"]).to_json_string(), "[]\n");
        assert_eq!(t.get(0, "name"), Some(&Cell::Text("v1".into())));
    }

    proptest! {
        #[test]
        fn g17_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = fmt_g17(x);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
            let digits = s.trim_start_matches('-').split('e').next().unwrap()
                .chars().filter(|c| c.is_ascii_digit()).collect::<String>();
            prop_assert!(digits.trim_start_matches('0').len() <= 17);
        }
    }
}
