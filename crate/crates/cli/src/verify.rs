//! Row-at-a-time verification of a pair of squares against `(P, Q)`.
//!
//! Each pass reads the rows once. Row checks use `O(t)` scratch; column
//! occupancy and the ordered-pair table are `t^2`-bit sets.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use ols_core::{Embedding, PartialLatinSquare, Triple};

use crate::formats::DenseRows;
use crate::{exit, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    A,
    B,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Which::A => "A",
            Which::B => "B",
        })
    }
}

/// Where the rows come from.
pub enum Squares {
    Files { a: PathBuf, b: PathBuf },
    Lazy(Box<Embedding>),
}

enum Rows<'a> {
    File(DenseRows<BufReader<File>>),
    Lazy {
        e: &'a Embedding,
        first: bool,
        next: u32,
    },
}

impl Rows<'_> {
    fn next_row(&mut self, out: &mut Vec<u32>) -> CliResult<bool> {
        match self {
            Rows::File(r) => r.next_row(out),
            Rows::Lazy { e, first, next } => {
                if *next as usize >= e.order() {
                    return Ok(false);
                }
                e.fill_row(*next, *first, out);
                *next += 1;
                Ok(true)
            }
        }
    }
}

fn open(path: &Path) -> CliResult<DenseRows<BufReader<File>>> {
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(DenseRows::new(BufReader::new(f)))
}

impl Squares {
    fn rows(&self, which: Which) -> CliResult<Rows<'_>> {
        Ok(match self {
            Squares::Files { a, b } => Rows::File(open(match which {
                Which::A => a,
                Which::B => b,
            })?),
            Squares::Lazy(e) => Rows::Lazy {
                e,
                first: which == Which::A,
                next: 0,
            },
        })
    }
}

/// The first property that fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Ok {
        order: usize,
    },
    Latin {
        square: Which,
        row: u32,
        col: u32,
        detail: String,
    },
    Orthogonality {
        row: u32,
        col: u32,
        pair: (u32, u32),
        first: (u32, u32),
    },
    Containment {
        square: Which,
        triple: Triple,
        found: u32,
    },
}

impl Verdict {
    pub fn exit_code(&self) -> u8 {
        match self {
            Verdict::Ok { .. } => exit::OK,
            Verdict::Latin { .. } => exit::LATIN,
            Verdict::Orthogonality { .. } => exit::ORTHOGONALITY,
            Verdict::Containment { .. } => exit::CONTAINMENT,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Ok { order } => {
                write!(
                    f,
                    "ok: order {order}, both latin, orthogonal, containment holds"
                )
            }
            Verdict::Latin {
                square,
                row,
                col,
                detail,
            } => {
                write!(f, "latin violation at ({row}, {col}) in {square}: {detail}")
            }
            Verdict::Orthogonality {
                row,
                col,
                pair,
                first,
            } => write!(
                f,
                "orthogonality violation at ({row}, {col}): pair ({}, {}) already at ({}, {})",
                pair.0, pair.1, first.0, first.1
            ),
            Verdict::Containment {
                square,
                triple,
                found,
            } => write!(
                f,
                "containment violation in {square}: expected {} at ({}, {}), found {found}",
                triple.symbol, triple.row, triple.col
            ),
        }
    }
}

struct BitSet(Vec<u64>);

impl BitSet {
    fn new(bits: usize) -> Self {
        Self(vec![0; bits.div_ceil(64)])
    }

    /// Sets bit `i`, returning whether it was already set.
    #[inline]
    fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let was = self.0[w] & b != 0;
        self.0[w] |= b;
        was
    }

    fn clear(&mut self) {
        self.0.iter_mut().for_each(|w| *w = 0);
    }
}

fn latin_pass(squares: &Squares, which: Which) -> CliResult<Result<usize, Verdict>> {
    let mut rows = squares.rows(which)?;
    let mut row = Vec::new();
    if !rows.next_row(&mut row)? {
        return Err(CliError::parse(format!("square {which} is empty")));
    }
    let t = row.len();
    let mut in_row = BitSet::new(t);
    let mut in_col = BitSet::new(t * t);
    let mut r = 0u32;
    loop {
        in_row.clear();
        for (c, &s) in row.iter().enumerate() {
            let fail = |detail: String| Verdict::Latin {
                square: which,
                row: r,
                col: c as u32,
                detail,
            };
            if s as usize >= t {
                return Ok(Err(fail(format!("symbol {s} out of range for order {t}"))));
            }
            if in_row.insert(s as usize) {
                return Ok(Err(fail(format!("symbol {s} repeats in row {r}"))));
            }
            if in_col.insert(c * t + s as usize) {
                return Ok(Err(fail(format!("symbol {s} repeats in column {c}"))));
            }
        }
        r += 1;
        if !rows.next_row(&mut row)? {
            break;
        }
    }
    if r as usize != t {
        return Err(CliError::parse(format!(
            "square {which}: {r} rows for order {t}"
        )));
    }
    Ok(Ok(t))
}

fn by_row(p: &PartialLatinSquare, t: usize) -> Vec<Vec<Triple>> {
    let n = p.order().min(t);
    let mut out = vec![Vec::new(); n];
    for tr in p.triples() {
        if (tr.row as usize) < n {
            out[tr.row as usize].push(*tr);
        }
    }
    out
}

/// Latinness of both squares, then orthogonality, then containment of `p`
/// in the first and `q` in the second at identity maps.
pub fn verify(
    squares: &Squares,
    p: &PartialLatinSquare,
    q: &PartialLatinSquare,
) -> CliResult<Verdict> {
    let ta = match latin_pass(squares, Which::A)? {
        Ok(t) => t,
        Err(v) => return Ok(v),
    };
    let tb = match latin_pass(squares, Which::B)? {
        Ok(t) => t,
        Err(v) => return Ok(v),
    };
    if ta != tb {
        return Err(CliError::parse(format!("orders differ: {ta} vs {tb}")));
    }
    let t = ta;
    if p.order() > t {
        return Ok(Verdict::Containment {
            square: Which::A,
            triple: p.triples()[0],
            found: u32::MAX,
        });
    }

    let mut rows_a = squares.rows(Which::A)?;
    let mut rows_b = squares.rows(Which::B)?;
    let (mut ra, mut rb) = (Vec::new(), Vec::new());
    let mut seen = BitSet::new(t * t);
    let mut containment = None;
    let p_rows = by_row(p, t);
    let q_rows = by_row(q, t);
    let mut r = 0u32;
    while rows_a.next_row(&mut ra)? {
        rows_b.next_row(&mut rb)?;
        for c in 0..t {
            let pair = (ra[c], rb[c]);
            if seen.insert(pair.0 as usize * t + pair.1 as usize) {
                let first = find_pair(squares, pair, t)?;
                return Ok(Verdict::Orthogonality {
                    row: r,
                    col: c as u32,
                    pair,
                    first,
                });
            }
        }
        if containment.is_none() {
            if let Some(rs) = p_rows.get(r as usize) {
                if let Some(tr) = rs.iter().find(|tr| ra[tr.col as usize] != tr.symbol) {
                    containment = Some(Verdict::Containment {
                        square: Which::A,
                        triple: *tr,
                        found: ra[tr.col as usize],
                    });
                }
            }
        }
        if containment.is_none() {
            if let Some(rs) = q_rows.get(r as usize) {
                if let Some(tr) = rs.iter().find(|tr| rb[tr.col as usize] != tr.symbol) {
                    containment = Some(Verdict::Containment {
                        square: Which::B,
                        triple: *tr,
                        found: rb[tr.col as usize],
                    });
                }
            }
        }
        r += 1;
    }
    Ok(containment.unwrap_or(Verdict::Ok { order: t }))
}

/// Earliest cell holding `pair`; a second pass only run on failure.
fn find_pair(squares: &Squares, pair: (u32, u32), t: usize) -> CliResult<(u32, u32)> {
    let mut rows_a = squares.rows(Which::A)?;
    let mut rows_b = squares.rows(Which::B)?;
    let (mut ra, mut rb) = (Vec::new(), Vec::new());
    let mut r = 0u32;
    while rows_a.next_row(&mut ra)? {
        rows_b.next_row(&mut rb)?;
        if let Some(c) = (0..t).find(|&c| (ra[c], rb[c]) == pair) {
            return Ok((r, c as u32));
        }
        r += 1;
    }
    Ok((u32::MAX, u32::MAX))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let path = dir.join(name);
        File::create(&path)
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
        path
    }

    fn single(sym: u32) -> PartialLatinSquare {
        PartialLatinSquare::new(2, [Triple::new(0, 0, sym)]).unwrap()
    }

    #[test]
    fn order_two_cases() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a", "0 1\n1 0\n");
        let b = write(dir.path(), "b", "0 1\n1 0\n");
        let c = write(dir.path(), "c", "0 0\n1 1\n");
        let s = Squares::Files {
            a: a.clone(),
            b: b.clone(),
        };
        let v = verify(&s, &single(0), &single(0)).unwrap();
        // identical squares repeat the pair (1, 1)
        assert_eq!(
            v,
            Verdict::Orthogonality {
                row: 1,
                col: 0,
                pair: (1, 1),
                first: (0, 1)
            }
        );
        assert_eq!(v.exit_code(), exit::ORTHOGONALITY);

        let s = Squares::Files { a: c, b };
        let v = verify(&s, &single(0), &single(0)).unwrap();
        assert!(matches!(
            v,
            Verdict::Latin {
                square: Which::A,
                row: 0,
                col: 1,
                ..
            }
        ));
        assert!(v.to_string().starts_with("latin violation at (0, 1)"));
    }

    #[test]
    fn order_one() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a", "0\n");
        let s = Squares::Files { a: a.clone(), b: a };
        let p = PartialLatinSquare::new(1, [Triple::new(0, 0, 0)]).unwrap();
        assert_eq!(verify(&s, &p, &p).unwrap(), Verdict::Ok { order: 1 });
    }

    #[test]
    fn ragged_file_is_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(dir.path(), "a", "0 1\n1\n");
        let s = Squares::Files { a: a.clone(), b: a };
        assert_eq!(
            verify(&s, &single(0), &single(0)).unwrap_err().code,
            exit::PARSE
        );
    }
}
