//! JSON and CSV emission. Reals are written with 12 significant digits.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Round to `SIGNIFICANT_DIGITS` significant digits; non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n
                .as_f64()
                .map(round_sig)
                .and_then(serde_json::Number::from_f64)
            {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Serialize with rounded reals. Infinite values (the relative-entropy
/// sentinel) become `null`.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_value(&mut v);
    Ok(serde_json::to_string_pretty(&v)?)
}

/// Write to `path`, or stdout for `None` / `-`.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
        _ => Ok(Box::new(io::stdout().lock())),
    }
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut w = sink(path)?;
    writeln!(w, "{}", to_json(value)?)?;
    w.flush()?;
    Ok(())
}

/// CSV with a header row; every cell is a real.
pub fn write_csv(
    path: Option<&Path>,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink(path)?);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|x| round_sig(*x).to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.32148515891850556), 0.321485158919);
        assert_eq!(round_sig(-1.0e-20 / 3.0), -3.33333333333e-21);
        assert_eq!(round_sig(0.0), 0.0);
        assert!(round_sig(f64::INFINITY).is_infinite());
        let x = 0.2322825705123456;
        assert!((round_sig(x) - x).abs() <= 5e-13);
    }

    #[test]
    fn json_keeps_integers() {
        #[derive(Serialize)]
        struct R {
            n: usize,
            x: f64,
        }
        let s = to_json(&R { n: 7, x: 1.0 / 3.0 }).unwrap();
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["n"], 7);
        assert_eq!(v["x"].as_f64().unwrap(), 0.333333333333);
    }
}
