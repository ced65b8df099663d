//! Deterministic JSON and CSV writers.
//!
//! Object keys come out sorted (serde_json's default map is ordered) and
//! every float is printed with 17 significant digits, so identical inputs
//! give byte-identical output.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;
use sphere_steer::simulator::Sample;

struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn format_float(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serializes `value` through a `serde_json::Value` so keys are sorted.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let tree = serde_json::to_value(value)?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    tree.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

pub fn write_csv<W: Write>(mut w: W, samples: &[Sample]) -> io::Result<()> {
    writeln!(w, "t,x,y,z,u")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{},{}",
            format_float(s.t),
            format_float(s.s.x),
            format_float(s.s.y),
            format_float(s.s.z),
            format_float(s.u)
        )?;
    }
    w.flush()
}
