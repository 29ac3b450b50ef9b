//! Result records and their on-disk formats.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

pub const CSV_HEADER: &str = "kappa,g1d,energy,entropy,schmidt";

/// One row of a sweep table. Observables that were not requested are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    #[serde(
        serialize_with = "serialize_real",
        deserialize_with = "deserialize_real"
    )]
    pub kappa: f64,
    #[serde(
        serialize_with = "serialize_real",
        deserialize_with = "deserialize_real"
    )]
    pub g1d: f64,
    pub energy: Option<f64>,
    pub entropy: Option<f64>,
    pub schmidt: Option<usize>,
}

// JSON has no infinity; it is written as the string "inf".
pub(crate) fn serialize_real<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

fn deserialize_real<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Number(v) => Ok(v),
        Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
        Raw::Text(t) => Err(serde::de::Error::custom(format!(
            "expected a number or \"inf\", got {t:?}"
        ))),
    }
}

/// Twelve significant digits, `inf` for the infinite flag.
pub fn format_real(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.11e}")
    }
}

fn parse_real(field: &str, line: usize) -> Result<f64, CliError> {
    if field == "inf" {
        return Ok(f64::INFINITY);
    }
    field
        .parse()
        .map_err(|_| CliError::parse(format!("line {line}: `{field}` is not a number")))
}

pub fn to_csv(records: &[Record]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let energy = r.energy.map(format_real).unwrap_or_default();
        let entropy = r.entropy.map(format_real).unwrap_or_default();
        let schmidt = r.schmidt.map(|s| s.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{energy},{entropy},{schmidt}",
            format_real(r.kappa),
            format_real(r.g1d)
        );
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<Record>, CliError> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(CliError::parse(format!("expected header `{CSV_HEADER}`")));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let number = i + 2;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(CliError::parse(format!(
                    "line {number}: expected 5 fields, got {}",
                    fields.len()
                )));
            }
            let optional = |f: &str| {
                if f.is_empty() {
                    Ok(None)
                } else {
                    parse_real(f, number).map(Some)
                }
            };
            Ok(Record {
                kappa: parse_real(fields[0], number)?,
                g1d: parse_real(fields[1], number)?,
                energy: optional(fields[2])?,
                entropy: optional(fields[3])?,
                schmidt: if fields[4].is_empty() {
                    None
                } else {
                    Some(fields[4].parse().map_err(|_| {
                        CliError::parse(format!("line {number}: bad Schmidt number"))
                    })?)
                },
            })
        })
        .collect()
}

pub fn to_json(records: &[Record]) -> Result<String, CliError> {
    let mut text =
        serde_json::to_string_pretty(records).map_err(|e| CliError::parse(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn parse_json(text: &str) -> Result<Vec<Record>, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::parse(e.to_string()))
}

/// Header line `N dx`, then `N` rows of `N` values.
pub fn matrix_to_text(values: &DMatrix<f64>, dx: f64) -> String {
    let n = values.nrows();
    let mut out = format!("{n} {}\n", format_real(dx));
    for i in 0..n {
        let row: Vec<String> = (0..values.ncols())
            .map(|j| format_real(values[(i, j)]))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<(DMatrix<f64>, f64), CliError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::parse("empty matrix file"))?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::parse("matrix header must start with N"))?;
    let dx = parse_real(
        parts
            .next()
            .ok_or_else(|| CliError::parse("matrix header must give dx"))?,
        1,
    )?;
    let mut values = DMatrix::zeros(n, n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| CliError::parse(format!("matrix has fewer than {n} rows")))?;
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|f| parse_real(f, i + 2))
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(CliError::parse(format!(
                "line {}: expected {n} values, got {}",
                i + 2,
                row.len()
            )));
        }
        for (j, v) in row.into_iter().enumerate() {
            values[(i, j)] = v;
        }
    }
    Ok((values, dx))
}

/// Two-column `k,n` table.
pub fn momentum_to_csv(k: &[f64], n: &[f64]) -> String {
    let mut out = String::from("k,n\n");
    for (k, n) in k.iter().zip(n) {
        let _ = writeln!(out, "{},{}", format_real(*k), format_real(*n));
    }
    out
}

/// A sweep point that did not produce a record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub index: usize,
    #[serde(
        serialize_with = "serialize_real",
        deserialize_with = "deserialize_real"
    )]
    pub kappa: f64,
    #[serde(
        serialize_with = "serialize_real",
        deserialize_with = "deserialize_real"
    )]
    pub g1d: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureManifest {
    pub completed: usize,
    pub failed: Vec<Failure>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<Record> {
        vec![
            Record {
                kappa: 0.0,
                g1d: 0.0,
                energy: Some(1.0),
                entropy: Some(0.0),
                schmidt: Some(1),
            },
            Record {
                kappa: f64::INFINITY,
                g1d: f64::INFINITY,
                energy: Some(3.0),
                entropy: None,
                schmidt: Some(2),
            },
            Record {
                kappa: 1.33,
                g1d: 500.0,
                energy: Some(2.391_093_215_678_9),
                entropy: Some(1.0e-7 / 3.0),
                schmidt: None,
            },
        ]
    }

    fn same_to_12_digits(a: f64, b: f64) -> bool {
        a == b || (a - b).abs() <= 5e-12 * a.abs().max(b.abs())
    }

    #[test]
    fn csv_round_trip() {
        let text = to_csv(&sample());
        let back = parse_csv(&text).unwrap();
        for (a, b) in sample().iter().zip(&back) {
            assert!(same_to_12_digits(a.kappa, b.kappa) && same_to_12_digits(a.g1d, b.g1d));
            assert_eq!(a.energy.is_some(), b.energy.is_some());
            assert!(same_to_12_digits(a.energy.unwrap(), b.energy.unwrap()));
            assert_eq!(a.entropy.map(|_| ()), b.entropy.map(|_| ()));
            assert_eq!(a.schmidt, b.schmidt);
        }
        assert_eq!(to_csv(&back), text);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let text = to_json(&sample()).unwrap();
        assert!(text.contains("\"inf\""));
        assert_eq!(parse_json(&text).unwrap(), sample());
    }

    #[test]
    fn matrix_round_trip() {
        let m = DMatrix::from_fn(3, 3, |i, j| (i as f64 + 1.0) / (j as f64 + 7.0));
        let (back, dx) = parse_matrix(&matrix_to_text(&m, 0.16)).unwrap();
        assert_eq!(dx, 0.16);
        assert!((back - &m).amax() <= 5e-12);
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(parse_csv("a,b\n").is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2,3\n")).is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\nx,0,,,\n")).is_err());
        assert!(parse_matrix("2 0.1\n1 2\n").is_err());
    }
}
