//! Matrix documents and run reports: the JSON formats read and written by
//! the command-line tool.
//!
//! Reports are UTF-8 JSON with struct-ordered keys and every float written
//! with 17 significant digits, so a factor pair read back from a report is
//! bit-identical to the one that was computed.

use std::io;

use num_complex::Complex64;
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// `{"rows": m, "cols": n, "data": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self { rows: m.rows(), cols: m.cols(), data: m.as_slice().iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Parse("matrix dimensions must be positive".into()));
        }
        ComplexMatrix::new(self.rows, self.cols, self.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<&ComplexMatrix> for MatrixDocument {
    fn from(m: &ComplexMatrix) -> Self {
        Self::from_matrix(m)
    }
}

pub(crate) fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Reads a matrix from text: a [`MatrixDocument`], a run report carrying
/// one under `payload.matrix`, or the plain form `n` followed by `n` rows
/// of `n` real numbers.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        let doc = if value.get("rows").is_some() {
            value
        } else if let Some(inner) = value.pointer("/payload/matrix") {
            inner.clone()
        } else {
            return Err(Error::Parse("no matrix document found".into()));
        };
        let doc: MatrixDocument = serde_json::from_value(doc).map_err(|e| Error::Parse(e.to_string()))?;
        return doc.to_matrix();
    }
    let mut tokens = text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty());
    let n: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?
        .parse()
        .map_err(|_| Error::Parse("plain input must start with the dimension".into()))?;
    let values = tokens
        .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if n == 0 || values.len() != n * n {
        return Err(Error::Parse(format!("expected {} entries for n = {n}, found {}", n * n, values.len())));
    }
    ComplexMatrix::from_real(n, n, &values)
}

/// Reads the factor pair out of a `factor` run report.
pub fn parse_factor_pair(text: &str) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let get = |key: &str| -> Result<ComplexMatrix> {
        let doc = value
            .pointer(&format!("/payload/{key}"))
            .ok_or_else(|| Error::Parse(format!("report has no payload.{key}")))?;
        serde_json::from_value::<MatrixDocument>(doc.clone()).map_err(|e| Error::Parse(e.to_string()))?.to_matrix()
    };
    Ok((get("a")?, get("b")?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Ok,
    Infeasible,
    NotQuadratic,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Ok => 0,
            Verdict::Error => 1,
            Verdict::Infeasible => 2,
            Verdict::NotQuadratic => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport<P> {
    pub command: String,
    pub verdict: Verdict,
    pub payload: P,
}

impl<P: Serialize> RunReport<P> {
    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Pretty JSON with 17 significant digits per float.
struct SigDigits<'a>(PrettyFormatter<'a>);

impl Formatter for SigDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types serialize infallibly");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}
