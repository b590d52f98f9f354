use std::fmt::Write;

use conekit::{Error, Result, Scalar};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

/// CSV with a header row; fields containing commas or quotes are quoted.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let line = |fields: Vec<&str>| {
        fields
            .into_iter()
            .map(|f| {
                if f.contains([',', '"', '\n']) {
                    format!("\"{}\"", f.replace('"', "\"\""))
                } else {
                    f.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    };
    writeln!(out, "{}", line(header.to_vec())).unwrap();
    for row in rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect())).unwrap();
    }
    out
}

pub fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

pub fn scalar(text: &str) -> Result<Scalar> {
    Scalar::parse(text.trim())
}

pub fn scalar_list(text: &str) -> Result<Vec<Scalar>> {
    text.split(',').map(scalar).collect()
}

/// `re,im` or a bare real number.
pub fn complex(text: &str) -> Result<Complex64> {
    let parts = scalar_list(text)?;
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.to_f64(), 0.0)),
        [re, im] => Ok(Complex64::new(re.to_f64(), im.to_f64())),
        _ => Err(Error::Parse(format!("expected re,im but got {text:?}"))),
    }
}

pub fn exact_or_float(x: &Scalar) -> String {
    x.exact_string().unwrap_or_else(|| num(x.to_f64()))
}

pub fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidInput(format!("missing --{flag}")))
}

pub fn error_json(e: &Error) -> serde_json::Value {
    serde_json::json!({ "message": e.to_string(), "kind": format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("") })
}

/// Shortest round-trip decimal, in exponent form for very small or large
/// magnitudes.
pub fn num(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}
