//! Plain CSV output shared by the trajectory, sweep and potential writers.

use std::io::{self, Write};

/// Formats with 17 significant digits, enough to parse back to the same `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Formats an optional value; `None` becomes an empty field.
pub fn format_optional(v: Option<f64>) -> String {
    v.map(format_value).unwrap_or_default()
}

pub(crate) fn write_row<W: Write>(out: &mut W, fields: &[String]) -> io::Result<()> {
    writeln!(out, "{}", fields.join(","))
}
