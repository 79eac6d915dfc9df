//! Parsing of command-line literals and grid-function files.

use num_complex::Complex64;
use serde::Deserialize;

use sbt_core::rational::parse_rational;
use sbt_core::transform::GridFunction;
use sbt_core::{ModelParams, Rational};

/// Parses a finite real literal; `NaN` and infinities are rejected.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let v: f64 = t.parse().map_err(|_| format!("not a number: {t:?}"))?;
    if !v.is_finite() {
        return Err(format!("not finite: {t:?}"));
    }
    Ok(v)
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (also `i`, `-i`), with optional spaces.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(parse_real(&t)?, 0.0));
    };
    // split before the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, imag_part(&body[k..])?),
        None => (0.0, imag_part(body)?),
    };
    Ok(Complex64::new(re, im))
}

fn imag_part(s: &str) -> Result<f64, String> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(s),
    }
}

/// Comma-separated list; an empty string gives an empty list.
pub fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .enumerate()
        .map(|(i, part)| item(part).map_err(|e| format!("item {}: {e}", i + 1)))
        .collect()
}

pub fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    alpha: String,
    sigma: String,
    values: Vec<[f64; 2]>,
}

/// Reads `{"alpha": "p/q", "sigma": "p/q", "values": [[re, im], ...]}`.
/// Errors carry the line number of the offending JSON.
pub fn parse_grid_file(text: &str) -> Result<(ModelParams, GridFunction), String> {
    let file: GridFile = serde_json::from_str(text)
        .map_err(|e| format!("line {}, column {}: {e}", e.line(), e.column()))?;
    let line_of = |needle: &str| {
        text.lines()
            .position(|l| l.contains(needle))
            .map_or(1, |i| i + 1)
    };
    let params = ModelParams::parse(&file.alpha, &file.sigma)
        .map_err(|e| format!("line {}: {e}", line_of("\"alpha\"").max(line_of("\"sigma\""))))?;
    let values = file
        .values
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    Ok((params, GridFunction::new(values)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("-0.5-1.5i").unwrap(), c(-0.5, -1.5));
        assert_eq!(parse_complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+1e+2i").unwrap(), c(1e-3, 100.0));
        assert_eq!(parse_complex(" 1 - i ").unwrap(), c(1.0, -1.0));
        assert!(parse_complex("nan").is_err());
        assert!(parse_complex("inf+1i").is_err());
        assert!(parse_complex("1+xi").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("", parse_real).unwrap(), Vec::<f64>::new());
        assert_eq!(parse_list("1, 2.5", parse_real).unwrap(), vec![1.0, 2.5]);
        let err = parse_list("1,foo", parse_real).unwrap_err();
        assert!(err.starts_with("item 2"), "{err}");
    }

    #[test]
    fn grid_files() {
        let text = "{\n  \"alpha\": \"1/2\",\n  \"sigma\": \"3/4\",\n  \"values\": [[1, 0], [0.5, -1]]\n}";
        let (p, g) = parse_grid_file(text).unwrap();
        assert_eq!(p, ModelParams::parse("1/2", "3/4").unwrap());
        assert_eq!(g.values().len(), 2);

        let bad = "{\n  \"alpha\": \"1\",\n  \"sigma\": \"1\",\n  \"values\": [[1, 0],\n [oops]]\n}";
        let err = parse_grid_file(bad).unwrap_err();
        assert!(err.starts_with("line 5"), "{err}");

        let negative = "{\"alpha\": \"-1\",\n \"sigma\": \"1\", \"values\": []}";
        assert!(parse_grid_file(negative).unwrap_err().starts_with("line"));
    }
}
