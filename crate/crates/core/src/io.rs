//! Factor-matrix readers and edge-list readers/writers.
//!
//! Edge lists are written as one line per distinct pair with its
//! multiplicity, sorted lexicographically:
//!
//! * TSV: a header `# fastrg n=<n> d=<d> directed=<0|1>`, then
//!   `i<TAB>j<TAB>multiplicity` with 0-based indices;
//! * Matrix Market: `coordinate integer` with 1-based indices, `symmetric`
//!   for undirected graphs (entries stored in the lower triangle).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::sampler::EdgeList;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    DenseCsv,
    MatrixMarket,
}

impl FromStr for MatrixFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dense-csv" | "csv" => Ok(Self::DenseCsv),
            "matrix-market" | "mtx" => Ok(Self::MatrixMarket),
            other => Err(format!("unknown matrix format `{other}` (dense-csv, matrix-market)")),
        }
    }
}

impl MatrixFormat {
    /// Guesses from the extension: `.mtx` is Matrix Market, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("mtx") => Self::MatrixMarket,
            _ => Self::DenseCsv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeFormat {
    Tsv,
    MatrixMarket,
}

impl FromStr for EdgeFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(Self::Tsv),
            "matrix-market" | "mtx" | "matrix-market-coordinate" => Ok(Self::MatrixMarket),
            other => Err(format!("unknown edge format `{other}` (tsv, matrix-market)")),
        }
    }
}

struct Source<'a> {
    path: &'a Path,
}

impl Source<'_> {
    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line,
            column,
            message: message.into(),
        }
    }

    fn number<T: FromStr>(&self, token: &str, line: usize, column: usize) -> Result<T> {
        token
            .trim()
            .parse()
            .map_err(|_| self.err(line, column, format!("cannot parse `{}` as a number", token.trim())))
    }
}

pub fn read_factor_matrix(path: &Path, format: MatrixFormat) -> Result<Matrix> {
    let text = std::fs::read_to_string(path)?;
    match format {
        MatrixFormat::DenseCsv => parse_dense_csv(&text, path),
        MatrixFormat::MatrixMarket => parse_matrix_market(&text, path),
    }
}

/// Comma-separated rows. Blank lines and lines starting with `#` are skipped.
/// Error positions are 1-based line and field numbers.
pub fn parse_dense_csv(text: &str, path: &Path) -> Result<Matrix> {
    let src = Source { path };
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        match cols {
            None => cols = Some(fields.len()),
            Some(c) if c != fields.len() => {
                return Err(src.err(
                    line_no,
                    fields.len().min(c) + 1,
                    format!("row {} has {} fields, expected {c}", rows + 1, fields.len()),
                ))
            }
            _ => {}
        }
        for (f, field) in fields.iter().enumerate() {
            data.push(src.number::<f64>(field, line_no, f + 1)?);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| src.err(1, 1, "no data rows"))?;
    Matrix::new(rows, cols, data)
}

struct MmHeader {
    coordinate: bool,
    pattern: bool,
    symmetric: bool,
}

fn parse_mm_header(src: &Source, line: &str) -> Result<MmHeader> {
    let tokens: Vec<String> = line.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(src.err(1, 1, "expected `%%MatrixMarket matrix <layout> <field> <symmetry>`"));
    }
    let coordinate = match tokens[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(src.err(1, 3, format!("unsupported layout `{other}`"))),
    };
    let pattern = match tokens[3].as_str() {
        "real" | "integer" | "double" => false,
        "pattern" if coordinate => true,
        other => return Err(src.err(1, 4, format!("unsupported field `{other}`"))),
    };
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(src.err(1, 5, format!("unsupported symmetry `{other}`"))),
    };
    Ok(MmHeader {
        coordinate,
        pattern,
        symmetric,
    })
}

/// Data lines after the header, skipping `%` comments and blank lines.
fn mm_body(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .skip(1)
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'))
}

/// Reads a real/integer/pattern Matrix Market file, coordinate or array
/// layout, general or symmetric, into a dense matrix.
pub fn parse_matrix_market(text: &str, path: &Path) -> Result<Matrix> {
    let src = Source { path };
    let header = parse_mm_header(&src, text.lines().next().unwrap_or(""))?;
    let mut body = mm_body(text);
    let (size_line, size) = body.next().ok_or_else(|| src.err(2, 1, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    let expected = if header.coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(src.err(size_line, 1, format!("size line needs {expected} fields")));
    }
    let rows: usize = src.number(dims[0], size_line, 1)?;
    let cols: usize = src.number(dims[1], size_line, 2)?;
    let mut m = Matrix::zeros(rows, cols);

    if header.coordinate {
        let nnz: usize = src.number(dims[2], size_line, 3)?;
        let mut seen = 0;
        for (line_no, line) in body {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let want = if header.pattern { 2 } else { 3 };
            if fields.len() != want {
                return Err(src.err(line_no, 1, format!("entry needs {want} fields, found {}", fields.len())));
            }
            let i: usize = src.number(fields[0], line_no, 1)?;
            let j: usize = src.number(fields[1], line_no, 2)?;
            if i == 0 || j == 0 || i > rows || j > cols {
                return Err(src.err(line_no, 1, format!("entry ({i}, {j}) outside {rows} x {cols}")));
            }
            let v = if header.pattern {
                1.0
            } else {
                src.number(fields[2], line_no, 3)?
            };
            m.set(i - 1, j - 1, v);
            if header.symmetric {
                m.set(j - 1, i - 1, v);
            }
            seen += 1;
        }
        if seen != nnz {
            return Err(src.err(size_line, 3, format!("declared {nnz} entries, found {seen}")));
        }
    } else {
        let mut values = Vec::new();
        for (line_no, line) in body {
            values.push(src.number::<f64>(line, line_no, 1)?);
        }
        // Column-major; symmetric arrays list the lower triangle only.
        let mut it = values.into_iter();
        for j in 0..cols {
            let start = if header.symmetric { j } else { 0 };
            for i in start..rows {
                let v = it.next().ok_or_else(|| src.err(size_line, 1, "too few array values"))?;
                m.set(i, j, v);
                if header.symmetric {
                    m.set(j, i, v);
                }
            }
        }
        if it.next().is_some() {
            return Err(src.err(size_line, 1, "too many array values"));
        }
    }
    Ok(m)
}

pub fn write_edge_list(edges: &EdgeList, path: &Path, format: EdgeFormat) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_edge_list_to(edges, &mut out, format)?;
    out.flush()?;
    Ok(())
}

pub fn write_edge_list_to<W: Write>(edges: &EdgeList, out: &mut W, format: EdgeFormat) -> Result<()> {
    let pairs = edges.multiplicities();
    match format {
        EdgeFormat::Tsv => {
            writeln!(
                out,
                "# fastrg n={} d={} directed={}",
                edges.n(),
                edges.d(),
                u8::from(edges.is_directed())
            )?;
            for (i, j, m) in pairs {
                writeln!(out, "{i}\t{j}\t{m}")?;
            }
        }
        EdgeFormat::MatrixMarket => {
            let symmetry = if edges.is_directed() { "general" } else { "symmetric" };
            writeln!(out, "%%MatrixMarket matrix coordinate integer {symmetry}")?;
            writeln!(out, "{} {} {}", edges.n(), edges.d(), pairs.len())?;
            for (i, j, m) in pairs {
                if edges.is_directed() {
                    writeln!(out, "{} {} {m}", i + 1, j + 1)?;
                } else {
                    writeln!(out, "{} {} {m}", j + 1, i + 1)?;
                }
            }
        }
    }
    Ok(())
}

pub fn read_edge_list(path: &Path, format: EdgeFormat) -> Result<EdgeList> {
    let reader = BufReader::new(File::open(path)?);
    let lines = reader.lines().collect::<std::io::Result<Vec<_>>>()?;
    parse_edge_list(&lines, path, format)
}

fn push_multi(edges: &mut Vec<(usize, usize)>, i: usize, j: usize, m: u64) {
    edges.extend(std::iter::repeat_n((i, j), m as usize));
}

fn parse_edge_list(lines: &[String], path: &Path, format: EdgeFormat) -> Result<EdgeList> {
    let src = Source { path };
    let mut edges = Vec::new();
    match format {
        EdgeFormat::Tsv => {
            let header = lines.first().ok_or_else(|| src.err(1, 1, "missing header"))?;
            let mut n = None;
            let mut d = None;
            let mut directed = None;
            for token in header.trim_start_matches('#').split_whitespace().skip(1) {
                match token.split_once('=') {
                    Some(("n", v)) => n = Some(src.number::<usize>(v, 1, 1)?),
                    Some(("d", v)) => d = Some(src.number::<usize>(v, 1, 1)?),
                    Some(("directed", v)) => directed = Some(src.number::<u8>(v, 1, 1)? == 1),
                    _ => {}
                }
            }
            let (Some(n), Some(d), Some(directed)) = (n, d, directed) else {
                return Err(src.err(1, 1, "header must be `# fastrg n=<n> d=<d> directed=<0|1>`"));
            };
            for (k, line) in lines.iter().enumerate().skip(1) {
                if line.trim().is_empty() {
                    continue;
                }
                let fields: Vec<&str> = line.split('\t').collect();
                if fields.len() != 3 {
                    return Err(src.err(k + 1, 1, "expected i<TAB>j<TAB>multiplicity"));
                }
                let i = src.number(fields[0], k + 1, 1)?;
                let j = src.number(fields[1], k + 1, 2)?;
                let m = src.number(fields[2], k + 1, 3)?;
                push_multi(&mut edges, i, j, m);
            }
            EdgeList::new(n, d, directed, edges)
        }
        EdgeFormat::MatrixMarket => {
            let text = lines.join("\n");
            let header = parse_mm_header(&src, lines.first().map_or("", String::as_str))?;
            if !header.coordinate || header.pattern {
                return Err(src.err(1, 3, "edge lists use `coordinate integer`"));
            }
            let mut body = mm_body(&text);
            let (size_line, size) = body.next().ok_or_else(|| src.err(2, 1, "missing size line"))?;
            let dims: Vec<&str> = size.split_whitespace().collect();
            if dims.len() != 3 {
                return Err(src.err(size_line, 1, "size line needs 3 fields"));
            }
            let n = src.number(dims[0], size_line, 1)?;
            let d = src.number(dims[1], size_line, 2)?;
            for (line_no, line) in body {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(src.err(line_no, 1, "entry needs 3 fields"));
                }
                let r: usize = src.number(fields[0], line_no, 1)?;
                let c: usize = src.number(fields[1], line_no, 2)?;
                let m: u64 = src.number(fields[2], line_no, 3)?;
                if r == 0 || c == 0 {
                    return Err(src.err(line_no, 1, "indices are 1-based"));
                }
                let (i, j) = if header.symmetric {
                    ((r - 1).min(c - 1), (r - 1).max(c - 1))
                } else {
                    (r - 1, c - 1)
                };
                push_multi(&mut edges, i, j, m);
            }
            EdgeList::new(n, d, !header.symmetric, edges)
        }
    }
}

/// Parses `"1,2.5,3"` into numbers; used for CLI list arguments.
pub fn parse_list<T: FromStr>(text: &str) -> std::result::Result<Vec<T>, String> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse().map_err(|_| format!("cannot parse `{t}`"))
        })
        .collect()
}

/// Scientific shorthand for counts, e.g. `1e6` or `500000`.
pub fn parse_count(text: &str) -> std::result::Result<usize, String> {
    let t = text.trim();
    if let Ok(v) = t.parse::<usize>() {
        return Ok(v);
    }
    match t.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as usize),
        _ => Err(format!("`{t}` is not a non-negative integer")),
    }
}
