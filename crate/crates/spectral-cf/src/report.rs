//! Deterministic CSV/JSON emission and the verification report document.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

pub const SCHEMA: &str = "spectral-cf/1";

/// Formats a float with 17 significant digits and a lowercase exponent, e.g. `1.4142135623730951e0`.
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

/// `serde_json` formatter writing every float through [`fmt_f64`].
#[derive(Clone, Copy, Debug, Default)]
pub struct RoundtripFormatter {
    indent: usize,
    has_value: bool,
}

impl RoundtripFormatter {
    fn newline<W: ?Sized + Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.indent {
            w.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl Formatter for RoundtripFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        w.write_all(b"[")
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(w)?;
        }
        w.write_all(b"]")
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        self.newline(w)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        w.write_all(b"{")
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(w)?;
        }
        w.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        self.newline(w)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }
}

/// Serializes `value` as indented JSON with round-trip float formatting.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, RoundtripFormatter::default());
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

/// Writes CSV with a header row; every field is already formatted.
pub fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportMetadata {
    pub tool: String,
    pub version: String,
    pub config: Value,
    pub timestamp: Option<String>,
}

impl ReportMetadata {
    pub fn new(config: Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            timestamp: None,
        }
    }
}

/// One check: a computed quantity against its reference.
#[derive(Clone, Debug, Serialize)]
pub struct ReportEntry {
    pub name: String,
    /// The statement being checked, in words.
    pub statement: String,
    pub computed: Value,
    pub reference: Value,
    pub abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

impl ReportEntry {
    /// An entry that passes when `abs_error <= tolerance`.
    pub fn new(
        name: impl Into<String>,
        statement: impl Into<String>,
        computed: Value,
        reference: Value,
        abs_error: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            name: name.into(),
            statement: statement.into(),
            computed,
            reference,
            abs_error,
            tolerance,
            pass: abs_error <= tolerance,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// An entry for a computation that failed before a comparison could be made.
    pub fn failed(name: impl Into<String>, statement: impl Into<String>, tolerance: f64, reason: String) -> Self {
        Self {
            name: name.into(),
            statement: statement.into(),
            computed: Value::Null,
            reference: Value::Null,
            abs_error: f64::INFINITY,
            tolerance,
            pass: false,
            note: Some(reason),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema: &'static str,
    pub metadata: ReportMetadata,
    pub entries: Vec<ReportEntry>,
}

impl ReportDocument {
    pub fn new(metadata: ReportMetadata) -> Self {
        Self {
            schema: SCHEMA,
            metadata,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, entry: ReportEntry) {
        self.entries.push(entry);
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// One line per entry: verdict, name, error and tolerance.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!(
                "{} {:<48} err {:<24} tol {}\n",
                if e.pass { "PASS" } else { "FAIL" },
                e.name,
                fmt_f64(e.abs_error),
                fmt_f64(e.tolerance)
            ));
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.entries.len(), failed));
        out
    }
}
