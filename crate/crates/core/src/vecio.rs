//! Plain-text vector files: numbers separated by whitespace or newlines,
//! `#` starts a comment that runs to the end of the line.

use crate::error::{ProjError, Result};

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split_whitespace() {
            // Accept U+2212 MINUS SIGN as well as ASCII '-'.
            let tok = tok.replace('\u{2212}', "-");
            let v: f64 = tok.parse().map_err(|_| {
                ProjError::InvalidInput(format!("line {}: cannot parse {tok:?} as a number", lineno + 1))
            })?;
            out.push(v);
        }
    }
    Ok(out)
}

/// Shortest round-trip representation, or `digits` significant digits.
pub fn format_value(v: f64, digits: Option<usize>) -> String {
    match digits {
        Some(k) if v.is_finite() => {
            let k = k.clamp(1, 17);
            let rounded: f64 = format!("{:.*e}", k - 1, v).parse().unwrap_or(v);
            format!("{rounded}")
        }
        _ => format!("{v}"),
    }
}

pub fn format_vector(x: &[f64], digits: Option<usize>) -> String {
    x.iter()
        .map(|&v| format_value(v, digits))
        .collect::<Vec<_>>()
        .join(" ")
}
