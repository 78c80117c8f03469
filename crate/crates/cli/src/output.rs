//! JSON with 17 significant digits and the human-readable report table.

use std::io;

use opmeans::harness::{PropertyStats, SuiteReport};
use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

/// Writes every finite `f64` with 17 significant digits.
pub struct SigFormatter;

pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        format!("{:.*}", (16 - exp).max(1) as usize, v)
    } else {
        format!("{v:.16e}")
    }
}

impl Formatter for SigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SigFormatter);
    value.serialize(&mut ser).expect("serializing to memory");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

fn short(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.3e}"),
        None => "-".into(),
    }
}

fn status(p: &PropertyStats) -> &'static str {
    match (p.informational, p.failures + p.errors) {
        (true, 0) => "info",
        (true, _) => "info*",
        (false, 0) => "ok",
        _ => "FAIL",
    }
}

pub fn report_table(r: &SuiteReport) -> String {
    let width = r.properties.iter().map(|p| p.name.len()).max().unwrap_or(8).max(8);
    let mut out = format!(
        "{:<width$}  {:>8}  {:>8}  {:>11}  {:>11}  status\n",
        "property", "trials", "failures", "worst", "limit"
    );
    for p in &r.properties {
        out += &format!(
            "{:<width$}  {:>8}  {:>8}  {:>11}  {:>11}  {}\n",
            p.name,
            p.trials,
            p.failures + p.errors,
            short(p.worst),
            short(Some(p.limit)),
            status(p)
        );
    }
    for p in r.properties.iter().filter(|p| p.dismissed > 0) {
        out += &format!("{}: {} candidate violations dismissed by the oracle re-check\n", p.name, p.dismissed);
    }
    for p in r.properties.iter().filter(|p| !p.informational) {
        if let Some(w) = &p.first_failure {
            out += &format!("\nfirst failure of {}: {}\n", p.name, to_json(w));
            if let Some(l) = w.inputs.get("loewner").and_then(|l| l.as_array()) {
                let n = (l.len() as f64).sqrt() as usize;
                out += "loewner matrix:\n";
                for row in l.chunks(n) {
                    let cells: Vec<String> =
                        row.iter().map(|v| format!("{:>12.6}", v.as_f64().unwrap_or(f64::NAN))).collect();
                    out += &format!("  [{}]\n", cells.join(" "));
                }
            }
        }
        if let Some(e) = &p.first_error {
            out += &format!("\nfirst error of {}: {e}\n", p.name);
        }
    }
    out += if r.pass { "\nPASS\n" } else { "\nFAIL\n" };
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(0.5), "0.50000000000000000");
        assert_eq!(format_f64(431.5), "431.50000000000000");
        assert_eq!(format_f64(1e-9), "1.0000000000000001e-9");
        assert_eq!(format_f64(0.0), "0.0");
        for v in [0.1, 1.0 / 3.0, 431.85058661468, 6.02e23, -2.5e-300, 1e16] {
            assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(to_json(&serde_json::json!({ "x": 0.25, "n": 3 })), r#"{"n":3,"x":0.25000000000000000}"#);
    }
}
