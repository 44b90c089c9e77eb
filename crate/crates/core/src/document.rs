//! Curve documents and report serialization.
//!
//! Curves are exchanged as JSON objects with `dim`, `closed`, `points` and an
//! optional `tangents` array, or as plain CSV with one point per row. Floats
//! are written with 17 significant digits so that a write/read/write cycle is
//! byte-identical. Non-finite values are written as the strings `"inf"`,
//! `"-inf"` and `"nan"`.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

use crate::curve::Curve;
use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDocument {
    pub dim: usize,
    pub closed: bool,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangents: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<BTreeMap<String, f64>>,
}

impl CurveDocument {
    pub fn from_curve(curve: &Curve) -> Self {
        CurveDocument {
            dim: curve.dim(),
            closed: curve.is_closed(),
            points: curve.point_rows(),
            tangents: Some(curve.tangent_rows()),
            name: None,
            generator: None,
        }
    }

    /// Validates the document and builds the curve it describes.
    pub fn to_curve(&self) -> Result<Curve> {
        for (row, p) in self.points.iter().enumerate() {
            if p.len() != self.dim {
                return Err(Error::Document(format!(
                    "field `points`, row {row}: expected {} coordinates, found {}",
                    self.dim,
                    p.len()
                )));
            }
        }
        if let Some(ts) = &self.tangents {
            for (row, t) in ts.iter().enumerate() {
                if t.len() != self.dim {
                    return Err(Error::Document(format!(
                        "field `tangents`, row {row}: expected {} coordinates, found {}",
                        self.dim,
                        t.len()
                    )));
                }
            }
        }
        Curve::new(&self.points, self.dim, self.closed, self.tangents.as_deref())
            .map_err(|e| Error::Document(format!("invalid curve: {e}")))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    /// Parses CSV text with one point per row. A first row that does not parse
    /// as numbers is treated as a header.
    pub fn from_csv_str(text: &str, closed: bool) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut points: Vec<Vec<f64>> = Vec::new();
        for (row, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| Error::Document(format!("csv row {}: {e}", row + 1)))?;
            if rec.iter().all(str::is_empty) {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(p) => points.push(p),
                Err(_) if row == 0 => continue,
                Err(e) => return Err(Error::Document(format!("csv line {}: {e}", row + 1))),
            }
        }
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Document("csv contains no points".into()))?;
        if let Some((row, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(Error::Document(format!(
                "csv point {row}: expected {dim} coordinates, found {}",
                p.len()
            )));
        }
        Ok(CurveDocument {
            dim,
            closed,
            points,
            tangents: None,
            name: None,
            generator: None,
        })
    }

    /// Reads a document from disk. Files ending in `.csv` are read as CSV
    /// with the given closed flag; anything else as JSON.
    pub fn read(path: &Path, csv_closed: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let is_csv = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        if is_csv {
            Self::from_csv_str(&text, csv_closed)
        } else {
            Self::from_json_str(&text)
        }
    }

    pub fn to_json_string(&self) -> String {
        to_json_compact(self)
    }
}

/// Float formatting with 17 significant digits, wrapping another formatter
/// for layout.
struct Sig17<F>(F);

fn write_float<W: ?Sized + Write>(w: &mut W, x: f64) -> io::Result<()> {
    write!(w, "{x:.16e}")
}

impl<F: Formatter> Formatter for Sig17<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, x: f64) -> io::Result<()> {
        write_float(w, x)
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, x: f32) -> io::Result<()> {
        write_float(w, x as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn end_object_key<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_key(w)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

fn serialize_with<T: Serialize, F: Formatter>(value: &T, fmt: F) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17(fmt));
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Single-line JSON with 17-significant-digit floats.
pub fn to_json_compact<T: Serialize>(value: &T) -> String {
    serialize_with(value, CompactFormatter)
}

/// Indented JSON with 17-significant-digit floats.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serialize_with(value, PrettyFormatter::with_indent(b"  "))
}

/// Serializes a possibly infinite float; JSON has no literal for
/// non-finite numbers, so they are written as the strings `inf`, `-inf`, `nan`.
pub fn ser_f64<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(non_finite_name(*x))
    }
}

/// [`ser_f64`] applied elementwise.
pub fn ser_f64_vec<S: serde::Serializer>(xs: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        if x.is_finite() {
            seq.serialize_element(x)?;
        } else {
            seq.serialize_element(non_finite_name(*x))?;
        }
    }
    seq.end()
}

fn non_finite_name(x: f64) -> &'static str {
    if x.is_nan() {
        "nan"
    } else if x > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

/// Top-level report envelope shared by every command.
#[derive(Debug, Serialize)]
pub struct Report<'a, R: Serialize, W: Serialize> {
    pub tool_version: &'static str,
    pub command: &'a str,
    pub inputs: BTreeMap<String, String>,
    pub seed: u64,
    pub results: &'a R,
    pub witnesses: &'a W,
    pub tolerances: BTreeMap<String, f64>,
}

/// Writes rows as CSV with a header line.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let to_err = |e: csv::Error| Error::Io(io::Error::other(e));
    w.write_record(header).map_err(to_err)?;
    for row in rows {
        let fields: Vec<String> = row
            .iter()
            .map(|x| {
                if x.is_finite() {
                    format!("{x:.16e}")
                } else {
                    non_finite_name(*x).to_string()
                }
            })
            .collect();
        w.write_record(&fields).map_err(to_err)?;
    }
    w.flush()?;
    Ok(())
}
