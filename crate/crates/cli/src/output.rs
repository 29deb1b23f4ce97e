//! Deterministic JSON and CSV rendering and atomic file output.

use std::io::{self, Write};
use std::path::Path;

use serde_json::ser::Formatter;
use serde_json::Value;

/// Floats with 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Compact JSON with floats written by [`fmt_f64`].
struct FixedFloat;

impl Formatter for FixedFloat {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }
}

/// Non-finite floats become `null`; object keys come out sorted.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn render_json(value: &Value) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloat);
    serde::Serialize::serialize(value, &mut ser).expect("serialising a Value cannot fail");
    out.push(b'\n');
    out
}

pub fn render_csv(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header).expect("writing to memory");
    for row in rows {
        writer.write_record(row).expect("writing to memory");
    }
    writer.into_inner().expect("flushing to memory")
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// or to stdout when no path is given.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> io::Result<()> {
    match path {
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(2.0), "2.0000000000000000e0");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn json_keys_sorted_and_floats_fixed() {
        let v = json!({"b": 1.5, "a": [float(0.25), 3], "c": float(f64::NAN)});
        let text = String::from_utf8(render_json(&v)).unwrap();
        assert_eq!(text, "{\"a\":[2.5000000000000000e-1,3],\"b\":1.5000000000000000e0,\"c\":null}\n");
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["b"], 1.5);
    }

    #[test]
    fn csv_uses_lf() {
        let text = render_csv(&["n", "x"], &[vec!["0".into(), "a,b".into()]]);
        assert_eq!(String::from_utf8(text).unwrap(), "n,x\n0,\"a,b\"\n");
    }
}
