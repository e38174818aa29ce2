//! Text and JSON interchange: field headers, matrix files, class dumps,
//! walk-certificate files, and census/verification reports with a CSV
//! projection.
//!
//! Every plain-text format is line-oriented ASCII and round-trips
//! bit-exactly:
//!
//! * **Field header** — one line `p e c0 c1 ... ce`: the characteristic,
//!   the extension degree, and the `e + 1` coefficients of the monic
//!   modulus, constant term first.
//! * **Matrix file** — the field header, a `rows cols` line, then one line
//!   per row of base-`p` element codes.
//! * **Class dump** — one field header, then each member as a `rows cols`
//!   line plus its rows; records share the leading header instead of
//!   repeating it.
//! * **Certificate file** — the field header, a `class n k` line, the
//!   walk's vertices as matrix records, and a trailing stamp line
//!   `stamp length L` recording the validated edge count.  Readers
//!   re-validate the walk instead of trusting the stamp.
//!
//! JSON reports are emitted through [`serde_json`] with deterministic key
//! order (struct fields in declaration order, maps sorted), so two runs
//! with the same configuration produce byte-identical documents apart from
//! the `runtime_ms` field.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::census::VerifyReport;
use crate::gf::{Field, FieldError, FieldSpec};
use crate::graph::{AllInvolutionsCensus, Census, GraphError, PathCertificate};
use crate::involutions::{ClassSpec, Involution, InvolutionError};
use crate::matrix::{Mat, MatError};
use crate::witnesses::{Verification, VerifiedBound, WitnessReport};

/// Errors raised while reading or writing the interchange formats.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: expected {what}, found end of input")]
    Missing { what: &'static str, line: usize },
    #[error("line {line}: unreadable {what}: {token:?}")]
    BadToken {
        what: &'static str,
        line: usize,
        token: String,
    },
    #[error("line {line}: expected {expected} fields for {what}, found {found}")]
    WrongCount {
        what: &'static str,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: unexpected trailing content")]
    TrailingContent { line: usize },
    #[error("stamp does not match the certificate content: {reason}")]
    StampMismatch { reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Line-by-line reader that tracks positions for error messages and skips
/// blank lines (they carry no content in any of the formats).
struct Cursor<'a> {
    lines: std::str::Lines<'a>,
    line_no: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Cursor<'a> {
        Cursor {
            lines: text.lines(),
            line_no: 0,
        }
    }

    fn next(&mut self, what: &'static str) -> Result<&'a str, FormatError> {
        loop {
            match self.lines.next() {
                Some(line) => {
                    self.line_no += 1;
                    let trimmed = line.trim();
                    if !trimmed.is_empty() {
                        return Ok(trimmed);
                    }
                }
                None => {
                    return Err(FormatError::Missing {
                        what,
                        line: self.line_no + 1,
                    })
                }
            }
        }
    }

    fn peek(&self) -> Option<&'a str> {
        // `Lines` is cheap to clone; peeking does not advance the cursor.
        self.lines
            .clone()
            .map(str::trim)
            .find(|line| !line.is_empty())
    }

    fn peek_is_end(&self) -> bool {
        self.peek().is_none()
    }

    fn finish(self) -> Result<(), FormatError> {
        if self.peek_is_end() {
            Ok(())
        } else {
            Err(FormatError::TrailingContent {
                line: self.line_no + 1,
            })
        }
    }
}

fn parse_fields<T: std::str::FromStr>(
    line: &str,
    what: &'static str,
    line_no: usize,
) -> Result<Vec<T>, FormatError> {
    line.split_whitespace()
        .map(|token| {
            token.parse::<T>().map_err(|_| FormatError::BadToken {
                what,
                line: line_no,
                token: token.to_string(),
            })
        })
        .collect()
}

/// Renders the one-line field header `p e c0 c1 ... ce`.
pub fn field_header(field: &Field) -> String {
    let mut out = format!("{} {}", field.characteristic(), field.degree());
    for &c in field.modulus() {
        write!(out, " {c}").expect("writing to a String cannot fail");
    }
    out
}

fn parse_field_header_line(line: &str, line_no: usize) -> Result<Field, FormatError> {
    let nums: Vec<u16> = parse_fields(line, "field header", line_no)?;
    if nums.len() < 3 {
        return Err(FormatError::WrongCount {
            what: "field header",
            line: line_no,
            expected: 3,
            found: nums.len(),
        });
    }
    let p = nums[0];
    let e = nums[1] as u32;
    let coeffs = &nums[2..];
    if coeffs.len() != e as usize + 1 {
        return Err(FormatError::WrongCount {
            what: "modulus coefficients",
            line: line_no,
            expected: e as usize + 1,
            found: coeffs.len(),
        });
    }
    let poly: Vec<u8> = coeffs
        .iter()
        .map(|&c| {
            u8::try_from(c).map_err(|_| FormatError::BadToken {
                what: "modulus coefficient",
                line: line_no,
                token: c.to_string(),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(Arc::new(FieldSpec::with_modulus(p, e, &poly)?))
}

/// Parses a field header line back into a field.
pub fn parse_field_header(line: &str) -> Result<Field, FormatError> {
    parse_field_header_line(line, 1)
}

fn push_matrix_record(out: &mut String, m: &Mat) {
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| m.get(i, j).code().to_string())
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

fn parse_matrix_record(cursor: &mut Cursor<'_>, field: &Field) -> Result<Mat, FormatError> {
    let dims_line = cursor.next("matrix dimensions")?;
    let dims: Vec<usize> = parse_fields(dims_line, "matrix dimensions", cursor.line_no)?;
    if dims.len() != 2 {
        return Err(FormatError::WrongCount {
            what: "matrix dimensions",
            line: cursor.line_no,
            expected: 2,
            found: dims.len(),
        });
    }
    let (rows, cols) = (dims[0], dims[1]);
    let mut codes: Vec<u8> = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let row_line = cursor.next("matrix row")?;
        let row: Vec<u8> = parse_fields(row_line, "matrix entry", cursor.line_no)?;
        if row.len() != cols {
            return Err(FormatError::WrongCount {
                what: "matrix row",
                line: cursor.line_no,
                expected: cols,
                found: row.len(),
            });
        }
        codes.extend(row);
    }
    Ok(Mat::from_codes(field, rows, cols, codes)?)
}

/// Renders a matrix file: field header, `rows cols`, then the rows.
pub fn write_matrix(m: &Mat) -> String {
    let mut out = field_header(m.field());
    out.push('\n');
    push_matrix_record(&mut out, m);
    out
}

/// Parses a matrix file produced by [`write_matrix`].
pub fn parse_matrix(text: &str) -> Result<Mat, FormatError> {
    let mut cursor = Cursor::new(text);
    let header = cursor.next("field header")?;
    let field = parse_field_header_line(header, cursor.line_no)?;
    let m = parse_matrix_record(&mut cursor, &field)?;
    cursor.finish()?;
    Ok(m)
}

/// Renders a sequence of matrices over one field: a single field header,
/// then each matrix as a `rows cols` line plus its rows.
pub fn write_matrix_dump<'a>(
    field: &Field,
    mats: impl IntoIterator<Item = &'a Mat>,
) -> String {
    let mut out = field_header(field);
    out.push('\n');
    for m in mats {
        push_matrix_record(&mut out, m);
    }
    out
}

/// Renders a class dump: one field header, then every member as a matrix
/// record.
pub fn write_class_dump(spec: &ClassSpec, members: &[Involution]) -> String {
    write_matrix_dump(spec.field(), members.iter().map(Involution::mat))
}

/// Parses a class dump back into the shared field and the member matrices.
pub fn parse_class_dump(text: &str) -> Result<(Field, Vec<Mat>), FormatError> {
    let mut cursor = Cursor::new(text);
    let header = cursor.next("field header")?;
    let field = parse_field_header_line(header, cursor.line_no)?;
    let mut members = Vec::new();
    while !cursor.peek_is_end() {
        members.push(parse_matrix_record(&mut cursor, &field)?);
    }
    Ok((field, members))
}

/// Renders a certificate file for a walk that has already been validated
/// against `spec`; validation failures surface instead of being stamped
/// over.
pub fn write_certificate(
    spec: &ClassSpec,
    cert: &PathCertificate,
) -> Result<String, FormatError> {
    cert.validate(spec)?;
    let mut out = field_header(spec.field());
    out.push('\n');
    let _ = writeln!(out, "class {} {}", spec.n(), spec.k());
    for vertex in cert.vertices() {
        push_matrix_record(&mut out, vertex);
    }
    let _ = writeln!(out, "stamp length {}", cert.length());
    Ok(out)
}

/// Parses a certificate file, re-validates the walk against the declared
/// class, and checks the stamp.
pub fn read_certificate(text: &str) -> Result<(ClassSpec, PathCertificate), FormatError> {
    let mut cursor = Cursor::new(text);
    let header = cursor.next("field header")?;
    let field = parse_field_header_line(header, cursor.line_no)?;

    let class_line = cursor.next("class line")?;
    let class_tokens: Vec<&str> = class_line.split_whitespace().collect();
    if class_tokens.len() != 3 || class_tokens[0] != "class" {
        return Err(FormatError::BadToken {
            what: "class line",
            line: cursor.line_no,
            token: class_line.to_string(),
        });
    }
    let nk: Vec<usize> = parse_fields(&class_line["class".len()..], "class line", cursor.line_no)?;
    let spec = ClassSpec::new(&field, nk[0], nk[1])?;

    let mut vertices = Vec::new();
    let stamped_length = loop {
        match cursor.peek() {
            Some(line) if line.starts_with("stamp") => {
                let line = cursor.next("stamp line")?;
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens.len() != 3 || tokens[1] != "length" {
                    return Err(FormatError::BadToken {
                        what: "stamp line",
                        line: cursor.line_no,
                        token: line.to_string(),
                    });
                }
                let length: Vec<usize> = parse_fields(tokens[2], "stamp length", cursor.line_no)?;
                break length[0];
            }
            Some(_) => vertices.push(parse_matrix_record(&mut cursor, &field)?),
            None => {
                return Err(FormatError::Missing {
                    what: "stamp line",
                    line: cursor.line_no + 1,
                })
            }
        }
    };
    cursor.finish()?;

    let cert = PathCertificate::new(vertices);
    if cert.length() != stamped_length {
        return Err(FormatError::StampMismatch {
            reason: format!(
                "stamp says length {stamped_length}, file contains a walk of length {}",
                cert.length()
            ),
        });
    }
    cert.validate(&spec)?;
    Ok((spec, cert))
}

/// Identifying block shared by every JSON report: the field (`p`, `e`,
/// modulus) and the ambient dimension, plus the class rank when the report
/// concerns a single class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecDoc {
    pub p: u16,
    pub e: u32,
    pub modulus: Vec<u8>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
}

impl SpecDoc {
    pub fn for_class(spec: &ClassSpec) -> SpecDoc {
        SpecDoc {
            p: spec.field().characteristic(),
            e: spec.field().degree(),
            modulus: spec.field().modulus().to_vec(),
            n: spec.n(),
            k: Some(spec.k()),
        }
    }

    pub fn for_union(field: &Field, n: usize) -> SpecDoc {
        SpecDoc {
            p: field.characteristic(),
            e: field.degree(),
            modulus: field.modulus().to_vec(),
            n,
            k: None,
        }
    }
}

/// One `(distance, overlap)` cell of the refined census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusCell {
    pub distance: u32,
    pub overlap: usize,
    pub count: u64,
}

/// JSON document for a distance census of one class graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub spec: SpecDoc,
    pub counts: BTreeMap<u32, u64>,
    pub diameter: u32,
    pub connected: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cells: Option<Vec<CensusCell>>,
    pub runtime_ms: u64,
}

impl CensusReport {
    pub fn new(spec: &ClassSpec, census: &Census, runtime: Duration) -> CensusReport {
        CensusReport {
            spec: SpecDoc::for_class(spec),
            counts: census.counts.clone(),
            diameter: census.eccentricity,
            connected: census.connected(),
            cells: census.cells.as_ref().map(|map| {
                map.iter()
                    .map(|(&(distance, overlap), &count)| CensusCell {
                        distance,
                        overlap,
                        count,
                    })
                    .collect()
            }),
            runtime_ms: runtime.as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// CSV projection: one `distance,m,count` row per cell, with `m` left
    /// empty when the overlap refinement was not requested.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("distance,m,count\n");
        match &self.cells {
            Some(cells) => {
                for cell in cells {
                    let _ = writeln!(out, "{},{},{}", cell.distance, cell.overlap, cell.count);
                }
            }
            None => {
                for (distance, count) in &self.counts {
                    let _ = writeln!(out, "{distance},,{count}");
                }
            }
        }
        out
    }
}

/// JSON document for the census over the union of all involution classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionReport {
    pub spec: SpecDoc,
    /// Vertices contributed by each class rank.
    pub class_sizes: BTreeMap<usize, u64>,
    /// Eccentricity of each class's representative in the union graph.
    pub eccentricities: BTreeMap<usize, u32>,
    pub diameter: u32,
    pub connected: bool,
    pub runtime_ms: u64,
}

impl UnionReport {
    pub fn new(
        field: &Field,
        n: usize,
        census: &AllInvolutionsCensus,
        runtime: Duration,
    ) -> UnionReport {
        UnionReport {
            spec: SpecDoc::for_union(field, n),
            class_sizes: census.class_sizes.clone(),
            eccentricities: census.eccentricities.clone(),
            diameter: census.diameter,
            connected: true,
            runtime_ms: runtime.as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// One predicted-versus-observed comparison inside a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyItemDoc {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// JSON document for the closed-form verification of one class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub spec: SpecDoc,
    pub items: Vec<VerifyItemDoc>,
    pub passed: bool,
    pub runtime_ms: u64,
}

impl VerifyDoc {
    pub fn new(spec: &ClassSpec, report: &VerifyReport, runtime: Duration) -> VerifyDoc {
        VerifyDoc {
            spec: SpecDoc::for_class(spec),
            items: report
                .items
                .iter()
                .map(|item| VerifyItemDoc {
                    label: item.label.clone(),
                    expected: item.expected.clone(),
                    actual: item.actual.clone(),
                    pass: item.pass,
                })
                .collect(),
            passed: report.passed(),
            runtime_ms: runtime.as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// CSV projection: one `label,expected,actual,pass` row per comparison.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,expected,actual,pass\n");
        for item in &self.items {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                item.label.replace(',', ";"),
                item.expected,
                item.actual,
                item.pass
            );
        }
        out
    }
}

/// JSON document for a sweep of verifications over the built-in grid.  The
/// `grid_version` field pins which parameter list produced the sweep so the
/// report is self-describing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDoc {
    pub grid_version: u32,
    pub reports: Vec<VerifyDoc>,
    pub passed: bool,
    pub runtime_ms: u64,
}

impl GridDoc {
    pub fn new(reports: Vec<VerifyDoc>, grid_version: u32, runtime: Duration) -> GridDoc {
        GridDoc {
            grid_version,
            passed: reports.iter().all(|r| r.passed),
            reports,
            runtime_ms: runtime.as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// A matrix embedded in a JSON document, entries as base-`p` codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u8>>,
}

impl MatrixDoc {
    pub fn from_mat(m: &Mat) -> MatrixDoc {
        MatrixDoc {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.get(i, j).code()).collect())
                .collect(),
        }
    }

    pub fn to_mat(&self, field: &Field) -> Result<Mat, FormatError> {
        let codes: Vec<u8> = self.entries.iter().flatten().copied().collect();
        Ok(Mat::from_codes(field, self.rows, self.cols, codes)?)
    }
}

/// JSON document for a verified distance bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub case: String,
    pub spec: SpecDoc,
    pub label: String,
    /// `"at-least"` or `"at-most"`.
    pub bound: String,
    pub bound_value: u32,
    /// `"exhaustive-scan"` or `"certificate"`.
    pub verification: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scanned_pairs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate_length: Option<usize>,
    pub witnesses: Vec<MatrixDoc>,
    pub runtime_ms: u64,
}

impl WitnessDoc {
    pub fn new(case: &str, spec: &ClassSpec, report: &WitnessReport) -> WitnessDoc {
        let (bound, bound_value) = match report.bound {
            VerifiedBound::AtLeast(d) => ("at-least".to_string(), d),
            VerifiedBound::AtMost(d) => ("at-most".to_string(), d),
        };
        let (verification, scanned_pairs, certificate_length) = match report.verification {
            Verification::ExhaustiveScan { pairs } => {
                ("exhaustive-scan".to_string(), Some(pairs), None)
            }
            Verification::Certificate { length } => ("certificate".to_string(), None, Some(length)),
        };
        WitnessDoc {
            case: case.to_string(),
            spec: SpecDoc::for_class(spec),
            label: report.label.clone(),
            bound,
            bound_value,
            verification,
            scanned_pairs,
            certificate_length,
            witnesses: report.witnesses.iter().map(MatrixDoc::from_mat).collect(),
            runtime_ms: report.runtime.as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("report documents always serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field;
    use crate::graph::bfs_census;
    use crate::involutions::{canonical_t, enumerate_class, DEFAULT_CLASS_CAP};
    use crate::witnesses::path_lower_triangular;

    #[test]
    fn field_headers_round_trip_including_extensions() {
        for (p, e) in [(2u16, 1u32), (3, 1), (2, 2), (3, 2), (2, 4), (5, 1)] {
            let f = field(p, e).unwrap();
            let header = field_header(&f);
            let back = parse_field_header(&header).unwrap();
            assert_eq!(back.characteristic(), p);
            assert_eq!(back.degree(), e);
            assert_eq!(back.modulus(), f.modulus());
            assert_eq!(field_header(&back), header);
        }
    }

    #[test]
    fn matrix_files_round_trip_bit_exactly() {
        let f = field(2, 2).unwrap();
        let m = Mat::from_codes(&f, 2, 3, vec![0, 1, 2, 3, 0, 1]).unwrap();
        let text = write_matrix(&m);
        let back = parse_matrix(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(write_matrix(&back), text);
    }

    #[test]
    fn malformed_matrix_files_are_rejected_with_line_positions() {
        let f = field(3, 1).unwrap();
        let good = "3 1 0 1\n2 2\n1 0\n0 1\n";
        assert_eq!(parse_matrix(good).unwrap(), Mat::identity(&f, 2));
        assert_eq!(write_matrix(&Mat::identity(&f, 2)), good);
        assert!(matches!(
            parse_matrix("3 1 0 1\n2 2\n1 0 2\n0 1\n"),
            Err(FormatError::WrongCount { line: 3, .. })
        ));
        assert!(matches!(
            parse_matrix("3 1 0 1\n2 2\n1 0\n0 x\n"),
            Err(FormatError::BadToken { line: 4, .. })
        ));
        assert!(matches!(
            parse_matrix("3 1 0 1\n2 2\n1 0\n0 7\n"),
            Err(FormatError::Mat(MatError::BadEntry(7)))
        ));
        assert!(matches!(
            parse_matrix("3 1 0 1\n2 2\n1 0\n0 1\n0 0\n"),
            Err(FormatError::TrailingContent { line: 5 })
        ));
        assert!(matches!(
            parse_matrix("3 1 0 1\n2 2\n"),
            Err(FormatError::Missing { .. })
        ));
    }

    #[test]
    fn class_dumps_round_trip_every_member() {
        let f = field(2, 1).unwrap();
        let spec = ClassSpec::new(&f, 3, 1).unwrap();
        let members = enumerate_class(&spec, DEFAULT_CLASS_CAP).unwrap();
        let text = write_class_dump(&spec, &members);
        let (back_field, back) = parse_class_dump(&text).unwrap();
        assert_eq!(back_field.order(), 2);
        assert_eq!(back.len(), members.len());
        for (orig, parsed) in members.iter().zip(&back) {
            assert_eq!(orig.mat(), parsed);
        }
    }

    #[test]
    fn certificates_round_trip_and_tampering_is_caught() {
        let f = field(3, 1).unwrap();
        let spec = ClassSpec::new(&f, 4, 2).unwrap();
        let members = enumerate_class(&spec, DEFAULT_CLASS_CAP).unwrap();
        let t = canonical_t(&spec);
        let x = members
            .iter()
            .find(|x| {
                let m = x.mat();
                *x != &t
                    && !m.commutes_with(t.mat())
                    && (0..4).all(|i| (0..4).skip(i + 1).all(|j| m.get(i, j).is_zero()))
            })
            .unwrap();
        let cert = path_lower_triangular(&t, x).unwrap();
        let text = write_certificate(&spec, &cert).unwrap();
        let (back_spec, back) = read_certificate(&text).unwrap();
        assert_eq!(back_spec, spec);
        assert_eq!(back.vertices(), cert.vertices());

        // A wrong stamp length is caught before validation.
        let lied = text.replace(
            &format!("stamp length {}", cert.length()),
            "stamp length 9",
        );
        assert!(matches!(
            read_certificate(&lied),
            Err(FormatError::StampMismatch { .. })
        ));

        // Corrupting a vertex invalidates the walk itself: the first row of
        // the start vertex becomes a rank-3 diagonal, which is outside the
        // class even though it still squares to the identity.
        let corrupt = text.replacen("1 0 0 0", "2 0 0 0", 1);
        assert!(read_certificate(&corrupt).is_err());
    }

    #[test]
    fn census_reports_serialize_deterministically() {
        let f = field(2, 1).unwrap();
        let spec = ClassSpec::new(&f, 4, 2).unwrap();
        let census = bfs_census(&spec, &canonical_t(&spec), true, DEFAULT_CLASS_CAP).unwrap();
        let report = CensusReport::new(&spec, &census, Duration::from_millis(7));
        let json = report.to_json();
        let again = CensusReport::new(&spec, &census, Duration::from_millis(7));
        assert_eq!(again.to_json(), json);

        let back: CensusReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.counts.values().sum::<u64>(), 210);
        assert!(back.cells.is_some());

        let csv = report.to_csv();
        assert!(csv.starts_with("distance,m,count\n"));
        // Cells refine the plain counts row for row.
        let total: u64 = report
            .cells
            .as_ref()
            .unwrap()
            .iter()
            .map(|c| c.count)
            .sum();
        assert_eq!(total, 210);
    }

    #[test]
    fn plain_census_csv_uses_empty_overlap_column() {
        let f = field(3, 1).unwrap();
        let spec = ClassSpec::new(&f, 4, 1).unwrap();
        let census = bfs_census(&spec, &canonical_t(&spec), false, DEFAULT_CLASS_CAP).unwrap();
        let report = CensusReport::new(&spec, &census, Duration::from_millis(1));
        assert_eq!(
            report.to_csv(),
            "distance,m,count\n0,,1\n1,,117\n2,,962\n"
        );
    }
}
