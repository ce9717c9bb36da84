//! Number formatting for emitted artifacts: CSV cells use the shortest
//! round-trip representation, JSON numbers are written with 17 significant
//! digits.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

/// Shortest representation that parses back to the same `f64`.
pub fn csv_float(x: f64) -> String {
    format!("{x:?}")
}

/// 17 significant digits in scientific notation.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Default, Clone, Copy)]
struct Sig17Formatter;

impl Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(sig17(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` as JSON with every float at 17 significant digits.
pub fn to_json_17<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, Sig17Formatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_numbers_round_trip_at_17_digits() {
        let v = vec![0.1, 1.0 / 3.0, -2.5e-300, 7.0];
        let text = to_json_17(&v).unwrap();
        assert!(text.contains("1.0000000000000001e-1"));
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn non_finite_becomes_null() {
        assert_eq!(to_json_17(&[f64::NAN]).unwrap(), "[null]");
    }

    #[test]
    fn csv_floats_are_shortest() {
        assert_eq!(csv_float(0.1), "0.1");
        assert_eq!(csv_float(1e-20), "1e-20");
        assert_eq!(csv_float(-3.0), "-3.0");
    }
}
