//! Text grids and JSON documents.
//!
//! A grid has one line per row and whitespace-separated tokens, `.` for an
//! empty cell. Pairs and manifests are JSON.

use std::io::BufRead;

use ols_core::latin::check_partial_latin;
use ols_core::pipeline::EmbeddingReport;
use ols_core::product::SymbolArray;
use ols_core::{Embedding, LatinSquare, PartialLatinSquare, TradeSpec, Triple};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{exit, CliError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("empty grid")]
    Empty,
    #[error("line {line}: expected {expected} tokens, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}, column {column}: bad token {token:?}")]
    Token {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("line {line}, column {column}: symbol {symbol} out of range for order {order}")]
    Range {
        line: usize,
        column: usize,
        symbol: u32,
        order: usize,
    },
    #[error("line {line}, column {column}: symbol {symbol} already in this row")]
    RowRepeat {
        line: usize,
        column: usize,
        symbol: u32,
    },
    #[error("line {line}, column {column}: symbol {symbol} already in this column")]
    ColumnRepeat {
        line: usize,
        column: usize,
        symbol: u32,
    },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
}

impl GridError {
    /// Syntax problems are parse failures; the rest break latinness.
    pub fn exit_code(&self) -> u8 {
        match self {
            GridError::Range { .. }
            | GridError::RowRepeat { .. }
            | GridError::ColumnRepeat { .. } => exit::NOT_PARTIAL_LATIN,
            _ => exit::PARSE,
        }
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        CliError::new(e.exit_code(), e.to_string())
    }
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split_whitespace()
}

/// Parses one row of a grid; `None` marks an empty cell.
pub fn parse_row(
    line: &str,
    line_no: usize,
    expected: Option<usize>,
    allow_empty: bool,
) -> Result<Vec<Option<u32>>, GridError> {
    let mut row = Vec::with_capacity(expected.unwrap_or(0));
    for (i, tok) in tokens(line).enumerate() {
        let cell = if tok == "." && allow_empty {
            None
        } else {
            Some(tok.parse::<u32>().map_err(|_| GridError::Token {
                line: line_no,
                column: i + 1,
                token: tok.to_string(),
            })?)
        };
        row.push(cell);
    }
    if let Some(n) = expected {
        if row.len() != n {
            return Err(GridError::Ragged {
                line: line_no,
                expected: n,
                found: row.len(),
            });
        }
    }
    Ok(row)
}

/// Parses a grid into a partial latin square whose order is the row count.
pub fn parse_grid(text: &str) -> Result<PartialLatinSquare, GridError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let order = lines.len();
    if order == 0 {
        return Err(GridError::Empty);
    }
    let mut row_seen = vec![false; order];
    let mut col_seen = vec![false; order * order];
    let mut triples = Vec::new();
    for (r, &(line_no, line)) in lines.iter().enumerate() {
        row_seen.iter_mut().for_each(|b| *b = false);
        let row = parse_row(line, line_no, Some(order), true)?;
        for (c, cell) in row.into_iter().enumerate() {
            let Some(symbol) = cell else { continue };
            let column = c + 1;
            if symbol as usize >= order {
                return Err(GridError::Range {
                    line: line_no,
                    column,
                    symbol,
                    order,
                });
            }
            if std::mem::replace(&mut row_seen[symbol as usize], true) {
                return Err(GridError::RowRepeat {
                    line: line_no,
                    column,
                    symbol,
                });
            }
            if std::mem::replace(&mut col_seen[c * order + symbol as usize], true) {
                return Err(GridError::ColumnRepeat {
                    line: line_no,
                    column,
                    symbol,
                });
            }
            triples.push(Triple::new(r as u32, c as u32, symbol));
        }
    }
    PartialLatinSquare::new(order, triples).map_err(|_| GridError::Empty)
}

/// Canonical text: single spaces, `.` for empty cells, one line per row.
pub fn emit_grid(p: &PartialLatinSquare) -> String {
    let mut out = String::new();
    for row in p.to_rows() {
        let toks: Vec<String> = row
            .iter()
            .map(|c| c.map_or_else(|| ".".to_string(), |s| s.to_string()))
            .collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn emit_row(row: &[u32], out: &mut String) {
    use std::fmt::Write;
    for (i, s) in row.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{s}").unwrap();
    }
    out.push('\n');
}

/// Reads the rows of a fully filled grid one at a time.
pub struct DenseRows<R> {
    reader: R,
    line: String,
    line_no: usize,
    order: Option<usize>,
    rows_read: usize,
}

impl<R: BufRead> DenseRows<R> {
    pub fn new(reader: R) -> Self {
        Self {
            reader,
            line: String::new(),
            line_no: 0,
            order: None,
            rows_read: 0,
        }
    }

    /// Order, known once the first row is read.
    pub fn order(&self) -> Option<usize> {
        self.order
    }

    /// Next row into `out`; `Ok(false)` at the end of input.
    pub fn next_row(&mut self, out: &mut Vec<u32>) -> Result<bool, CliError> {
        loop {
            self.line.clear();
            let n = self
                .reader
                .read_line(&mut self.line)
                .map_err(|e| CliError::general(e.to_string()))?;
            if n == 0 {
                let expected = self.order.unwrap_or(0);
                if self.rows_read != expected || expected == 0 {
                    return Err(GridError::RowCount {
                        expected,
                        found: self.rows_read,
                    }
                    .into());
                }
                return Ok(false);
            }
            self.line_no += 1;
            if !self.line.trim().is_empty() {
                break;
            }
        }
        out.clear();
        for (i, tok) in tokens(&self.line).enumerate() {
            out.push(tok.parse::<u32>().map_err(|_| GridError::Token {
                line: self.line_no,
                column: i + 1,
                token: tok.to_string(),
            })?);
        }
        let order = *self.order.get_or_insert(out.len());
        if out.len() != order {
            return Err(GridError::Ragged {
                line: self.line_no,
                expected: order,
                found: out.len(),
            }
            .into());
        }
        self.rows_read += 1;
        if self.rows_read > order {
            return Err(GridError::RowCount {
                expected: order,
                found: self.rows_read,
            }
            .into());
        }
        Ok(true)
    }
}

/// `{"order": n, "P": [[r, c, e], ...], "Q": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDocument {
    pub order: usize,
    #[serde(rename = "P")]
    pub p: Vec<[u32; 3]>,
    #[serde(rename = "Q")]
    pub q: Vec<[u32; 3]>,
}

impl PairDocument {
    pub fn from_squares(p: &PartialLatinSquare, q: &PartialLatinSquare) -> Self {
        let raw = |s: &PartialLatinSquare| {
            s.triples()
                .iter()
                .map(|t| [t.row, t.col, t.symbol])
                .collect()
        };
        Self {
            order: p.order(),
            p: raw(p),
            q: raw(q),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("pair document: {e}")))
    }

    /// Both squares, each checked for latinness.
    pub fn squares(&self) -> Result<(PartialLatinSquare, PartialLatinSquare), CliError> {
        let build = |name: &str, raw: &[[u32; 3]]| {
            let triples: Vec<Triple> = raw.iter().map(|&[r, c, e]| Triple::new(r, c, e)).collect();
            if triples.is_empty() {
                return Err(CliError::new(
                    exit::NOT_PARTIAL_LATIN,
                    format!("{name} is empty"),
                ));
            }
            let report = check_partial_latin(self.order, self.order, &triples);
            if !report.is_ok() {
                return Err(CliError::new(
                    exit::NOT_PARTIAL_LATIN,
                    format!("{name} is not a partial latin square: {report}"),
                ));
            }
            PartialLatinSquare::new(self.order, triples)
                .map_err(|e| CliError::new(exit::NOT_PARTIAL_LATIN, format!("{name}: {e}")))
        };
        Ok((build("P", &self.p)?, build("Q", &self.q)?))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("pair documents serialize");
        s.push('\n');
        s
    }
}

pub const MANIFEST_VERSION: u32 = 1;

/// Everything needed to regenerate any cell of an embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub report: EmbeddingReport,
    /// The `2^M x 2^M` symbol array.
    pub a: Vec<Vec<u32>>,
    /// The latin square of order `2^M`.
    pub b: Vec<Vec<u32>>,
    pub trades: Vec<TradeSpec>,
}

impl Manifest {
    pub fn from_embedding(e: &Embedding) -> Self {
        Self {
            version: MANIFEST_VERSION,
            report: e.report().clone(),
            a: e.product().symbol_array().to_rows(),
            b: e.product()
                .quasigroup()
                .rows()
                .map(<[u32]>::to_vec)
                .collect(),
            trades: e.trades().to_vec(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let m: Manifest =
            serde_json::from_str(text).map_err(|e| CliError::parse(format!("manifest: {e}")))?;
        if m.version != MANIFEST_VERSION {
            return Err(CliError::parse(format!(
                "manifest version {} unsupported",
                m.version
            )));
        }
        Ok(m)
    }

    pub fn embedding(&self) -> Result<Embedding, CliError> {
        let bad = |e: ols_core::Error| CliError::parse(format!("manifest: {e}"));
        let a = SymbolArray::from_rows(self.report.exponent, &self.a).map_err(bad)?;
        let b = LatinSquare::from_rows(&self.b).map_err(bad)?;
        Embedding::from_parts(self.report.clone(), a, b, &self.trades).map_err(bad)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("manifests serialize");
        s.push('\n');
        s
    }
}
