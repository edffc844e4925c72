//! Plain-text matrix files.
//!
//! ```text
//! # optional comments anywhere
//! LRC H q=2 n=6 rows=3
//! 0 0 0 1 1 1
//! 0 1 1 0 0 1
//! 1 0 1 0 1 0
//! ```
//!
//! `G` marks a generator matrix, `H` a parity-check matrix. Entries use the
//! integer encoding of [`Field`](crate::Field) elements.

use std::fmt::Write;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    Generator,
    ParityCheck,
}

impl MatrixKind {
    fn letter(self) -> char {
        match self {
            MatrixKind::Generator => 'G',
            MatrixKind::ParityCheck => 'H',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub kind: MatrixKind,
    pub matrix: Matrix,
}

impl CodeFile {
    pub fn code(&self) -> LinearCode {
        match self.kind {
            MatrixKind::Generator => LinearCode::from_generator(&self.matrix),
            MatrixKind::ParityCheck => LinearCode::from_parity(&self.matrix),
        }
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn header_field(token: &str, key: &str, line: usize, column: usize) -> Result<u64> {
    let value = token
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| err(line, column, format!("expected `{key}=<int>`, found `{token}`")))?;
    value
        .parse()
        .map_err(|_| err(line, column + key.len() + 1, format!("`{value}` is not a non-negative integer")))
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn parse_code_file(text: &str) -> Result<CodeFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });
    let (hl, header) = lines.next().ok_or_else(|| err(1, 1, "missing `LRC` header"))?;
    let toks = tokens(header);
    if toks.len() != 5 || toks[0].1 != "LRC" {
        return Err(err(hl, 1, "header must read `LRC <G|H> q=<int> n=<int> rows=<int>`"));
    }
    let kind = match toks[1].1 {
        "G" => MatrixKind::Generator,
        "H" => MatrixKind::ParityCheck,
        other => return Err(err(hl, toks[1].0, format!("kind must be G or H, found `{other}`"))),
    };
    let q = header_field(toks[2].1, "q", hl, toks[2].0)?;
    let n = header_field(toks[3].1, "n", hl, toks[3].0)? as usize;
    let rows = header_field(toks[4].1, "rows", hl, toks[4].0)? as usize;
    let field = Field::new(q).map_err(|e| err(hl, toks[2].0, e.to_string()))?;
    let mut data: Vec<Elem> = Vec::with_capacity(rows * n);
    let mut last_line = hl;
    for _ in 0..rows {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| err(last_line + 1, 1, format!("expected {rows} matrix rows")))?;
        last_line = ln;
        let toks = tokens(line);
        if toks.len() != n {
            let col = toks.get(n).map_or(line.len() + 1, |t| t.0);
            return Err(err(ln, col, format!("expected {n} entries, found {}", toks.len())));
        }
        for (col, tok) in toks {
            let v: u32 = tok
                .parse()
                .map_err(|_| err(ln, col, format!("`{tok}` is not a non-negative integer")))?;
            if !field.contains(v) {
                return Err(err(ln, col, format!("entry {v} is not below q = {q}")));
            }
            data.push(v);
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(err(ln, 1, "unexpected content after the last row"));
    }
    Ok(CodeFile {
        kind,
        matrix: Matrix::new(&field, rows, n, data)?,
    })
}

pub fn dump_code_file(file: &CodeFile) -> String {
    let m = &file.matrix;
    let mut s = format!(
        "LRC {} q={} n={} rows={}\n",
        file.kind.letter(),
        m.field().order(),
        m.cols(),
        m.rows()
    );
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(u32::to_string).collect();
        writeln!(s, "{}", row.join(" ")).expect("writing to a String");
    }
    s
}
