//! Report envelope and its JSON / CSV encodings.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

use kgo_core::verify::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub command: &'a str,
    pub config: &'a C,
    pub results: R,
    pub checks: Vec<Check>,
}

/// Compact JSON with every float printed to 17 significant digits, so the
/// bytes depend only on the values.
struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", float(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(out)
}

/// Header plus rows; every field is written with `Display`, which is
/// locale-independent.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> anyhow::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        Ok(w.into_inner()?)
    }
}

/// 17 significant digits; negative zero prints as zero.
pub fn float(x: f64) -> String {
    format!("{:.16e}", if x == 0.0 { 0.0 } else { x })
}

pub fn checks_table(checks: &[Check]) -> Table {
    Table {
        header: vec!["name", "measured", "tolerance", "pass"],
        rows: checks
            .iter()
            .map(|c| {
                vec![
                    c.name.clone(),
                    float(c.measured),
                    float(c.tolerance),
                    c.pass.to_string(),
                ]
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_are_fixed_width() {
        let v = serde_json::json!({"a": 0.1, "b": [1.0, -2.5e-300], "c": 3});
        let s = String::from_utf8(to_json(&v).unwrap()).unwrap();
        assert_eq!(
            s,
            "{\"a\":1.0000000000000001e-1,\"b\":[1.0000000000000000e0,-2.5000000000000000e-300],\"c\":3}\n"
        );
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn non_finite_becomes_null() {
        let s = String::from_utf8(to_json(&[f64::NAN]).unwrap()).unwrap();
        assert_eq!(s, "[null]\n");
    }

    #[test]
    fn csv_quotes_commas() {
        let t = Table {
            header: vec!["name", "x"],
            rows: vec![vec!["a, b".into(), float(0.5)]],
        };
        let s = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(s, "name,x\n\"a, b\",5.0000000000000000e-1\n");
    }
}
