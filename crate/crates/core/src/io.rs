//! Matrix Market and DOT exchange files, JSON sidecars, atomic writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matgen::{DigraphEdgeList, Entry, SparseIntMatrix};

pub const MM_HEADER: &str = "%%MatrixMarket matrix coordinate integer general";

/// Writes `contents` to a temporary file next to `path`, then renames it into
/// place, so readers never see a partial file.
pub fn atomic_write(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn format_matrix_market(m: &SparseIntMatrix) -> String {
    let mut out = String::with_capacity(16 * m.nnz() + 64);
    out.push_str(MM_HEADER);
    out.push('\n');
    out.push_str(&format!("{} {} {}\n", m.dim(), m.dim(), m.nnz()));
    for e in m.entries() {
        out.push_str(&format!("{} {} {}\n", e.row, e.col, e.value));
    }
    out
}

pub fn write_matrix_market(m: &SparseIntMatrix, path: &Path) -> Result<()> {
    atomic_write(path, format_matrix_market(m).as_bytes())
}

/// Parses square integer coordinate files. Comment lines (`%`) after the
/// header and blank lines are skipped.
pub fn parse_matrix_market(text: &str) -> Result<SparseIntMatrix> {
    let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file".into()))?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields != ["%%matrixmarket", "matrix", "coordinate", "integer", "general"] {
        return Err(parse_err(1, format!("unsupported header {header:?}")));
    }
    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = body
        .next()
        .ok_or_else(|| parse_err(2, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(size_line, e.to_string()))?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(parse_err(size_line, "size line needs rows cols nnz".into()));
    };
    if rows != cols {
        return Err(parse_err(size_line, format!("matrix is {rows}x{cols}, not square")));
    }
    let mut entries = Vec::with_capacity(nnz);
    for (line, text) in body {
        let t: Vec<&str> = text.split_whitespace().collect();
        let [r, c, v] = t[..] else {
            return Err(parse_err(line, "entry needs row col value".into()));
        };
        let entry = (|| -> std::result::Result<Entry, std::num::ParseIntError> {
            Ok(Entry {
                row: r.parse()?,
                col: c.parse()?,
                value: v.parse()?,
            })
        })()
        .map_err(|e| parse_err(line, e.to_string()))?;
        entries.push(entry);
    }
    if entries.len() != nnz {
        return Err(parse_err(0, format!("size line promises {nnz} entries, found {}", entries.len())));
    }
    SparseIntMatrix::from_entries(rows, entries)
}

pub fn read_matrix_market(path: &Path) -> Result<SparseIntMatrix> {
    parse_matrix_market(&fs::read_to_string(path)?)
}

pub fn format_dot(g: &DigraphEdgeList, name: &str) -> String {
    let mut out = format!("digraph {name} {{\n");
    for v in 1..=g.vertex_count {
        out.push_str(&format!("  {v};\n"));
    }
    for (u, v) in g.sorted_edges() {
        out.push_str(&format!("  {u} -> {v};\n"));
    }
    out.push_str("}\n");
    out
}

pub fn write_dot(g: &DigraphEdgeList, name: &str, path: &Path) -> Result<()> {
    atomic_write(path, format_dot(g, name).as_bytes())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixMeta {
    pub n: usize,
    pub dim: usize,
    pub nnz: usize,
    pub kind: String,
}

impl MatrixMeta {
    pub fn of(n: usize, kind: &str, m: &SparseIntMatrix) -> Self {
        Self {
            n,
            dim: m.dim(),
            nnz: m.nnz(),
            kind: kind.to_string(),
        }
    }
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgen::{digraph, mandelbrot_inverse, mandelbrot_matrix};

    #[test]
    fn mm_m2_has_five_entries() {
        let text = format_matrix_market(&mandelbrot_matrix(2).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], MM_HEADER);
        assert_eq!(lines[1], "3 3 5");
        assert_eq!(lines.len(), 2 + 5);
    }

    #[test]
    fn mm_round_trip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        for m in [mandelbrot_matrix(6).unwrap(), mandelbrot_inverse(4).unwrap()] {
            let path = dir.path().join("m.mtx");
            write_matrix_market(&m, &path).unwrap();
            assert_eq!(read_matrix_market(&path).unwrap(), m);
        }
    }

    #[test]
    fn mm_parse_errors_carry_line() {
        let bad = format!("{MM_HEADER}\n% comment\n2 2 1\n1 x 1\n");
        match parse_matrix_market(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_matrix_market("%%MatrixMarket matrix array real general\n").is_err());
        assert!(parse_matrix_market(&format!("{MM_HEADER}\n2 3 0\n")).is_err());
        assert!(parse_matrix_market(&format!("{MM_HEADER}\n2 2 2\n1 1 1\n")).is_err());
        assert!(parse_matrix_market(&format!("{MM_HEADER}\n2 2 1\n3 1 1\n")).is_err());
    }

    #[test]
    fn dot_keeps_loops() {
        let dot = format_dot(&digraph(1).unwrap(), "G1");
        assert!(dot.contains("1 -> 1;"));
        let dot3 = format_dot(&digraph(3).unwrap(), "G3");
        assert_eq!(dot3.matches("->").count(), 13);
    }

    #[test]
    fn sidecar_json() {
        let m = mandelbrot_matrix(3).unwrap();
        let meta = MatrixMeta::of(3, "mandelbrot", &m);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("m.json");
        write_json(&meta, &path).unwrap();
        let back: MatrixMeta = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(back, meta);
        assert_eq!((back.dim, back.nnz), (7, 13));
    }
}
