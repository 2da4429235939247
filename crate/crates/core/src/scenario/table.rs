use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Time column plus one named column per curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub times: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl ResultTable {
    pub fn new(times: Vec<f64>) -> Self {
        Self { times, columns: Vec::new() }
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.times.len() {
            return Err(Error::NumericalFailure(format!(
                "column {name} has {} rows, table has {}",
                values.len(),
                self.times.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure(format!("column {name} contains {bad}")));
        }
        self.columns.push((name, values));
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Header row then one row per time, values with 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for (name, _) in &self.columns {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (k, t) in self.times.iter().enumerate() {
            out.push_str(&format_sig(*t, 12));
            for (_, values) in &self.columns {
                out.push(',');
                out.push_str(&format_sig(values[k], 12));
            }
            out.push('\n');
        }
        out
    }

    /// Largest absolute difference between same-named columns.
    pub fn max_abs_diff(&self, other: &ResultTable) -> Option<f64> {
        let mut worst: Option<f64> = None;
        for (name, values) in &self.columns {
            if let Some(theirs) = other.column(name) {
                let d = values.iter().zip(theirs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                worst = Some(worst.map_or(d, |w| w.max(d)));
            }
        }
        worst
    }
}

/// printf-style `%.{digits}g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mut s = trim_fraction(mantissa).to_string();
        let _ = write!(s, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
        s
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
