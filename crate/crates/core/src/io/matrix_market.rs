//! Matrix Market reader/writer.
//!
//! Follows the NIST format description: a banner line, optional `%`
//! comments, a size line, then entries. Coordinate entries are 1-based and
//! symmetric/hermitian/skew files carry only the lower triangle, which is
//! expanded on read. Pattern entries read as `1.0`. Explicitly stored
//! zeros are kept so nonzero counts match collection metadata; duplicate
//! coordinates are summed.

use crate::linalg::{DenseVector, Scalar, SparseMatrix};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmFormat {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmField {
    Real,
    Complex,
    Integer,
    Pattern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmSymmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

#[derive(Debug, Error)]
pub enum MmError {
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("writing {path}: {source}")]
    WriteIo {
        path: String,
        source: std::io::Error,
    },
}

/// A parsed file: the expanded CSR matrix plus what the header declared.
#[derive(Clone, Debug)]
pub struct ParsedMatrix {
    pub matrix: SparseMatrix,
    pub format: MmFormat,
    pub field: MmField,
    pub symmetry: MmSymmetry,
    /// Entry count stated in the file (stored entries before symmetry
    /// expansion).
    pub declared_entries: usize,
}

impl ParsedMatrix {
    /// Stored entries after symmetry expansion and duplicate folding.
    pub fn expanded_entries(&self) -> usize {
        self.matrix.nnz()
    }
}

/// Reads a Matrix Market file into CSR form (symmetry expanded, 1-based
/// indices converted, duplicates summed).
pub fn read_matrix_market(path: &Path) -> Result<SparseMatrix, MmError> {
    read_matrix_market_detailed(path).map(|p| p.matrix)
}

/// [`read_matrix_market`] keeping the header metadata and entry counts.
pub fn read_matrix_market_detailed(path: &Path) -> Result<ParsedMatrix, MmError> {
    let text = fs::read_to_string(path).map_err(|source| MmError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_text(&text, &path.display().to_string())
}

fn parse_err(path: &str, line: usize, msg: impl Into<String>) -> MmError {
    MmError::Parse {
        path: path.to_string(),
        line,
        msg: msg.into(),
    }
}

fn parse_text(text: &str, path: &str) -> Result<ParsedMatrix, MmError> {
    let mut lines = text.lines().enumerate();

    let (banner_no, banner) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let banner_line = banner_no + 1;
    let tokens: Vec<String> = banner.split_whitespace().map(|t| t.to_lowercase()).collect();
    if tokens.len() < 5 || tokens[0] != "%%matrixmarket" {
        return Err(parse_err(
            path,
            banner_line,
            "banner must read '%%MatrixMarket matrix <format> <field> <symmetry>'",
        ));
    }
    if tokens[1] != "matrix" {
        return Err(parse_err(
            path,
            banner_line,
            format!("unsupported object '{}', expected 'matrix'", tokens[1]),
        ));
    }
    let format = match tokens[2].as_str() {
        "coordinate" => MmFormat::Coordinate,
        "array" => MmFormat::Array,
        other => {
            return Err(parse_err(
                path,
                banner_line,
                format!("unsupported format '{other}'"),
            ))
        }
    };
    let field = match tokens[3].as_str() {
        "real" => MmField::Real,
        "complex" => MmField::Complex,
        "integer" => MmField::Integer,
        "pattern" => MmField::Pattern,
        other => {
            return Err(parse_err(
                path,
                banner_line,
                format!("unsupported field '{other}'"),
            ))
        }
    };
    let symmetry = match tokens[4].as_str() {
        "general" => MmSymmetry::General,
        "symmetric" => MmSymmetry::Symmetric,
        "skew-symmetric" => MmSymmetry::SkewSymmetric,
        "hermitian" => MmSymmetry::Hermitian,
        other => {
            return Err(parse_err(
                path,
                banner_line,
                format!("unsupported symmetry '{other}'"),
            ))
        }
    };
    if format == MmFormat::Array && field == MmField::Pattern {
        return Err(parse_err(path, banner_line, "array format cannot be pattern"));
    }

    // size line: first non-comment, non-blank line
    let mut size_line = None;
    for (no, line) in lines.by_ref() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        size_line = Some((no + 1, t.to_string()));
        break;
    }
    let (size_no, size_text) =
        size_line.ok_or_else(|| parse_err(path, banner_line, "missing size line"))?;
    let dims: Vec<&str> = size_text.split_whitespace().collect();
    let want_dims = if format == MmFormat::Coordinate { 3 } else { 2 };
    if dims.len() != want_dims {
        return Err(parse_err(
            path,
            size_no,
            format!("size line needs {want_dims} fields, found {}", dims.len()),
        ));
    }
    let parse_dim = |s: &str, what: &str, no: usize| -> Result<usize, MmError> {
        s.parse::<usize>()
            .map_err(|_| parse_err(path, no, format!("cannot parse {what} '{s}'")))
    };
    let nrows = parse_dim(dims[0], "row count", size_no)?;
    let ncols = parse_dim(dims[1], "column count", size_no)?;
    let declared = if format == MmFormat::Coordinate {
        parse_dim(dims[2], "entry count", size_no)?
    } else {
        match symmetry {
            MmSymmetry::General => nrows * ncols,
            MmSymmetry::SkewSymmetric => nrows.saturating_mul(nrows.saturating_sub(1)) / 2,
            _ => nrows * (nrows + 1) / 2,
        }
    };

    if symmetry != MmSymmetry::General && nrows != ncols {
        return Err(parse_err(
            path,
            size_no,
            format!("{nrows}x{ncols} matrix cannot carry symmetry"),
        ));
    }

    let mut triplets: Vec<(usize, usize, Scalar)> = Vec::with_capacity(declared * 2);
    let mut seen = 0usize;

    let mut pushimpl = |i: usize, j: usize, v: Scalar, no: usize| -> Result<(), MmError> {
        match symmetry {
            MmSymmetry::General => triplets.push((i, j, v)),
            MmSymmetry::Symmetric => {
                if j > i {
                    return Err(parse_err(
                        path,
                        no,
                        "symmetric files store only the lower triangle",
                    ));
                }
                triplets.push((i, j, v));
                if i != j {
                    triplets.push((j, i, v));
                }
            }
            MmSymmetry::SkewSymmetric => {
                if j >= i {
                    return Err(parse_err(
                        path,
                        no,
                        "skew-symmetric files store only the strict lower triangle",
                    ));
                }
                triplets.push((i, j, v));
                triplets.push((j, i, -v));
            }
            MmSymmetry::Hermitian => {
                if j > i {
                    return Err(parse_err(
                        path,
                        no,
                        "hermitian files store only the lower triangle",
                    ));
                }
                if i == j && v.im != 0.0 {
                    return Err(parse_err(path, no, "hermitian diagonal must be real"));
                }
                triplets.push((i, j, v));
                if i != j {
                    triplets.push((j, i, v.conj()));
                }
            }
        }
        Ok(())
    };

    match format {
        MmFormat::Coordinate => {
            for (no, line) in lines {
                let line_no = no + 1;
                let t = line.trim();
                if t.is_empty() || t.starts_with('%') {
                    continue;
                }
                if seen == declared {
                    return Err(parse_err(
                        path,
                        line_no,
                        format!("more than the declared {declared} entries"),
                    ));
                }
                let fields: Vec<&str> = t.split_whitespace().collect();
                let want = 2 + match field {
                    MmField::Pattern => 0,
                    MmField::Complex => 2,
                    _ => 1,
                };
                if fields.len() != want {
                    return Err(parse_err(
                        path,
                        line_no,
                        format!("expected {want} fields, found {}", fields.len()),
                    ));
                }
                let i: usize = fields[0]
                    .parse()
                    .map_err(|_| parse_err(path, line_no, format!("bad row index '{}'", fields[0])))?;
                let j: usize = fields[1].parse().map_err(|_| {
                    parse_err(path, line_no, format!("bad column index '{}'", fields[1]))
                })?;
                if i < 1 || i > nrows || j < 1 || j > ncols {
                    return Err(parse_err(
                        path,
                        line_no,
                        format!("index ({i}, {j}) outside {nrows}x{ncols}"),
                    ));
                }
                let v = match field {
                    MmField::Pattern => Scalar::new(1.0, 0.0),
                    MmField::Complex => {
                        let re: f64 = fields[2].parse().map_err(|_| {
                            parse_err(path, line_no, format!("bad real part '{}'", fields[2]))
                        })?;
                        let im: f64 = fields[3].parse().map_err(|_| {
                            parse_err(path, line_no, format!("bad imaginary part '{}'", fields[3]))
                        })?;
                        Scalar::new(re, im)
                    }
                    _ => {
                        let re: f64 = fields[2].parse().map_err(|_| {
                            parse_err(path, line_no, format!("bad value '{}'", fields[2]))
                        })?;
                        Scalar::new(re, 0.0)
                    }
                };
                pushimpl(i - 1, j - 1, v, line_no)?;
                seen += 1;
            }
        }
        MmFormat::Array => {
            // column-major; lower triangle only for non-general symmetry
            let mut coords: Vec<(usize, usize)> = Vec::with_capacity(declared);
            for j in 0..ncols {
                let start = match symmetry {
                    MmSymmetry::General => 0,
                    MmSymmetry::SkewSymmetric => j + 1,
                    _ => j,
                };
                for i in start..nrows {
                    coords.push((i, j));
                }
            }
            let mut at = 0usize;
            for (no, line) in lines {
                let line_no = no + 1;
                let t = line.trim();
                if t.is_empty() || t.starts_with('%') {
                    continue;
                }
                if at == coords.len() {
                    return Err(parse_err(
                        path,
                        line_no,
                        format!("more than the expected {} array values", coords.len()),
                    ));
                }
                let fields: Vec<&str> = t.split_whitespace().collect();
                let want = if field == MmField::Complex { 2 } else { 1 };
                if fields.len() != want {
                    return Err(parse_err(
                        path,
                        line_no,
                        format!("expected {want} fields, found {}", fields.len()),
                    ));
                }
                let v = if field == MmField::Complex {
                    let re: f64 = fields[0].parse().map_err(|_| {
                        parse_err(path, line_no, format!("bad real part '{}'", fields[0]))
                    })?;
                    let im: f64 = fields[1].parse().map_err(|_| {
                        parse_err(path, line_no, format!("bad imaginary part '{}'", fields[1]))
                    })?;
                    Scalar::new(re, im)
                } else {
                    let re: f64 = fields[0].parse().map_err(|_| {
                        parse_err(path, line_no, format!("bad value '{}'", fields[0]))
                    })?;
                    Scalar::new(re, 0.0)
                };
                let (i, j) = coords[at];
                pushimpl(i, j, v, line_no)?;
                at += 1;
                seen += 1;
            }
            if at != coords.len() {
                return Err(parse_err(
                    path,
                    text.lines().count(),
                    format!("expected {} array values, found {at}", coords.len()),
                ));
            }
        }
    }

    if format == MmFormat::Coordinate && seen != declared {
        return Err(parse_err(
            path,
            text.lines().count(),
            format!("declared {declared} entries but found {seen}"),
        ));
    }

    let matrix = SparseMatrix::from_triplets(nrows, ncols, &triplets)
        .map_err(|e| parse_err(path, 0, e.to_string()))?;
    Ok(ParsedMatrix {
        matrix,
        format,
        field,
        symmetry,
        declared_entries: declared,
    })
}

/// Reads a right-hand-side vector: a Matrix Market file interpreted as an
/// `N x m` dense or sparse collection, selecting 1-based column `col`.
pub fn read_rhs(path: &Path, col: usize) -> Result<DenseVector, MmError> {
    let parsed = read_matrix_market_detailed(path)?;
    let m = parsed.matrix;
    if col < 1 || col > m.ncols() {
        return Err(MmError::Parse {
            path: path.display().to_string(),
            line: 0,
            msg: format!(
                "right-hand-side column {col} out of range: file has {} column(s)",
                m.ncols()
            ),
        });
    }
    let j0 = col - 1;
    let mut v = DenseVector::zeros(m.nrows());
    for (i, j, val) in m.triplets() {
        if j == j0 {
            v[i] += val;
        }
    }
    Ok(v)
}

/// Writes a matrix in coordinate format (general symmetry). The field is
/// `real` when every stored value has zero imaginary part, else `complex`.
pub fn write_matrix_market(path: &Path, a: &SparseMatrix) -> Result<(), MmError> {
    let complex = a.triplets().any(|(_, _, v)| v.im != 0.0);
    let mut out = String::new();
    let field = if complex { "complex" } else { "real" };
    let _ = writeln!(out, "%%MatrixMarket matrix coordinate {field} general");
    let _ = writeln!(out, "{} {} {}", a.nrows(), a.ncols(), a.nnz());
    for (i, j, v) in a.triplets() {
        if complex {
            let _ = writeln!(out, "{} {} {:e} {:e}", i + 1, j + 1, v.re, v.im);
        } else {
            let _ = writeln!(out, "{} {} {:e}", i + 1, j + 1, v.re);
        }
    }
    fs::write(path, out).map_err(|source| MmError::WriteIo {
        path: path.display().to_string(),
        source,
    })
}
