use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

/// Compact JSON with every float written to 17 significant digits.
/// Non-finite values become `null`.
struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }

    fn write_null<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        CompactFormatter.write_null(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SigDigits);
    value.serialize(&mut ser).expect("reports serialize");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// Every report is wrapped with the tool version and the input hash.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub input_sha256: &'a str,
    pub report: T,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(command: &'a str, input_sha256: &'a str, report: T) -> Self {
        Self { tool: "balpoint", version: env!("CARGO_PKG_VERSION"), command, input_sha256, report }
    }
}
