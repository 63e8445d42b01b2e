//! CSV emission and charge-file parsing.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use equilib::{Charge, ChargeSet, ExtReal};
use num_complex::Complex64;

/// Fixed 15-significant-digit rendering; infinities as `inf`/`-inf`.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.14e}")
    }
}

pub fn ext(v: ExtReal) -> String {
    num(v.to_f64())
}

/// A CSV document: metadata, header, rows.
pub struct Table {
    meta: Vec<(String, String)>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(command: &str, header: &[&'static str]) -> Self {
        Table {
            meta: vec![
                ("equilib".to_string(), env!("CARGO_PKG_VERSION").to_string()),
                ("command".to_string(), command.to_string()),
            ],
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.meta.push((key.into(), value.into()));
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }

    pub fn emit(&self, out: Option<&Path>) -> Result<()> {
        let text = self.render();
        match out {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => std::io::stdout().lock().write_all(text.as_bytes()).context("writing to stdout"),
        }
    }
}

/// One charge per line as `re im strength`; `#` starts a comment.
pub fn parse_charges(text: &str) -> Result<ChargeSet> {
    let mut charges = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split_whitespace()
            .map(|f| f.parse::<f64>().map_err(|_| anyhow!("line {}: `{f}` is not a number", n + 1)))
            .collect::<Result<_>>()?;
        let [re, im, strength] = fields[..] else {
            bail!("line {}: expected `re im strength`, got {} fields", n + 1, fields.len());
        };
        charges.push(Charge::new(Complex64::new(re, im), strength).with_context(|| format!("line {}", n + 1))?);
    }
    Ok(ChargeSet::new(charges)?)
}

pub fn load_charges(path: &Path) -> Result<ChargeSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading charges {}", path.display()))?;
    parse_charges(&text).with_context(|| format!("in charges {}", path.display()))
}
