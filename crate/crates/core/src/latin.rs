//! Partial and full latin squares, permutations, and the verification
//! predicates shared by every other module.
//!
//! Predicates come in two flavours: a `check_*` / `*_report` function that
//! collects a [`Report`] of the first few violations, and a boolean wrapper
//! on top of it.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of violations kept verbatim in a [`Report`].
pub const REPORT_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: u32,
    pub col: u32,
}

impl Cell {
    pub fn new(row: u32, col: u32) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// `(row, col, symbol)`. Orders by row, then column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub row: u32,
    pub col: u32,
    pub symbol: u32,
}

impl Triple {
    pub fn new(row: u32, col: u32, symbol: u32) -> Self {
        Self { row, col, symbol }
    }

    pub fn cell(&self) -> Cell {
        Cell::new(self.row, self.col)
    }
}

impl From<(u32, u32, u32)> for Triple {
    fn from((row, col, symbol): (u32, u32, u32)) -> Self {
        Self { row, col, symbol }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.row, self.col, self.symbol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    OutOfRange {
        triple: Triple,
        order: usize,
        symbol_bound: usize,
    },
    /// Two entries for one cell.
    CellConflict {
        first: Triple,
        second: Triple,
    },
    RowRepeat {
        first: Triple,
        second: Triple,
    },
    ColumnRepeat {
        first: Triple,
        second: Triple,
    },
    /// Cell filled in exactly one of two partial squares.
    CellSetMismatch {
        cell: Cell,
    },
    /// The same ordered symbol pair at two cells of a superimposed pair.
    RepeatedPair {
        first: Cell,
        second: Cell,
        pair: (u32, u32),
    },
    /// Symbol repeated (or out of range) in a row of a full square.
    LatinRow {
        row: u32,
        col: u32,
        symbol: u32,
    },
    LatinColumn {
        row: u32,
        col: u32,
        symbol: u32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange {
                triple,
                order,
                symbol_bound,
            } => write!(
                f,
                "triple {triple} out of range (order {order}, symbol bound {symbol_bound})"
            ),
            Violation::CellConflict { first, second } => {
                write!(f, "cell conflict between {first} and {second}")
            }
            Violation::RowRepeat { first, second } => {
                write!(f, "symbol repeated in a row: {first} and {second}")
            }
            Violation::ColumnRepeat { first, second } => {
                write!(f, "symbol repeated in a column: {first} and {second}")
            }
            Violation::CellSetMismatch { cell } => {
                write!(f, "cell-set mismatch at {cell}")
            }
            Violation::RepeatedPair {
                first,
                second,
                pair,
            } => write!(
                f,
                "symbol pair ({}, {}) repeated at {first} and {second}",
                pair.0, pair.1
            ),
            Violation::LatinRow { row, col, symbol } => {
                write!(
                    f,
                    "latin violation at ({row}, {col}): symbol {symbol} in row"
                )
            }
            Violation::LatinColumn { row, col, symbol } => {
                write!(
                    f,
                    "latin violation at ({row}, {col}): symbol {symbol} in column"
                )
            }
        }
    }
}

/// The first [`REPORT_LIMIT`] violations found, plus a total count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    violations: Vec<Violation>,
    total: usize,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: Violation) {
        if self.violations.len() < REPORT_LIMIT {
            self.violations.push(v);
        }
        self.total += 1;
    }

    pub fn is_ok(&self) -> bool {
        self.total == 0
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn into_result(self, wrap: impl FnOnce(Report) -> Error) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(wrap(self))
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "no violations");
        }
        write!(f, "{} violation(s)", self.total)?;
        for v in &self.violations {
            write!(f, "; {v}")?;
        }
        if self.total > self.violations.len() {
            write!(f, "; ...")?;
        }
        Ok(())
    }
}

/// Checks the three pairwise uniqueness conditions and coordinate bounds.
pub fn check_partial_latin(order: usize, symbol_bound: usize, triples: &[Triple]) -> Report {
    let mut report = Report::new();
    let mut by_cell: HashMap<(u32, u32), Triple> = HashMap::new();
    let mut by_row: HashMap<(u32, u32), Triple> = HashMap::new();
    let mut by_col: HashMap<(u32, u32), Triple> = HashMap::new();
    for &t in triples {
        if t.row as usize >= order || t.col as usize >= order || t.symbol as usize >= symbol_bound {
            report.push(Violation::OutOfRange {
                triple: t,
                order,
                symbol_bound,
            });
            continue;
        }
        if let Some(&first) = by_cell.get(&(t.row, t.col)) {
            report.push(Violation::CellConflict { first, second: t });
            continue;
        }
        by_cell.insert((t.row, t.col), t);
        if let Some(&first) = by_row.get(&(t.row, t.symbol)) {
            report.push(Violation::RowRepeat { first, second: t });
        } else {
            by_row.insert((t.row, t.symbol), t);
        }
        if let Some(&first) = by_col.get(&(t.col, t.symbol)) {
            report.push(Violation::ColumnRepeat { first, second: t });
        } else {
            by_col.insert((t.col, t.symbol), t);
        }
    }
    report
}

/// Partial latin square test with symbols drawn from `[order]`.
pub fn is_partial_latin(order: usize, triples: &[Triple]) -> bool {
    check_partial_latin(order, order, triples).is_ok()
}

/// A non-empty partial latin square. Triples are kept sorted by `(row, col)`.
///
/// Symbols normally come from `[order]`; [`PartialLatinSquare::with_symbol_bound`]
/// allows a larger alphabet for squares whose symbols were relabelled apart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialLatinSquare {
    order: usize,
    symbol_bound: usize,
    triples: Vec<Triple>,
}

impl PartialLatinSquare {
    pub fn new(order: usize, triples: impl IntoIterator<Item = Triple>) -> Result<Self> {
        Self::with_symbol_bound(order, order, triples)
    }

    pub fn with_symbol_bound(
        order: usize,
        symbol_bound: usize,
        triples: impl IntoIterator<Item = Triple>,
    ) -> Result<Self> {
        let mut triples: Vec<Triple> = triples.into_iter().collect();
        if triples.is_empty() {
            return Err(Error::Empty);
        }
        check_partial_latin(order, symbol_bound, &triples).into_result(Error::NotPartialLatin)?;
        triples.sort_unstable();
        Ok(Self {
            order,
            symbol_bound,
            triples,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn symbol_bound(&self) -> usize {
        self.symbol_bound
    }

    pub fn volume(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn get(&self, row: u32, col: u32) -> Option<u32> {
        self.triples
            .binary_search_by(|t| (t.row, t.col).cmp(&(row, col)))
            .ok()
            .map(|i| self.triples[i].symbol)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.triples.iter().map(Triple::cell)
    }

    /// Distinct symbols, ascending.
    pub fn symbols(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.triples.iter().map(|t| t.symbol).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Dense `order x order` view, `None` for empty cells.
    pub fn to_rows(&self) -> Vec<Vec<Option<u32>>> {
        let mut rows = vec![vec![None; self.order]; self.order];
        for t in &self.triples {
            rows[t.row as usize][t.col as usize] = Some(t.symbol);
        }
        rows
    }
}

/// Checks that every row and column of a dense `order x order` grid is a
/// permutation of `[order]`.
pub fn check_latin(order: usize, cells: &[u32]) -> Report {
    let mut report = Report::new();
    if cells.len() != order * order {
        report.push(Violation::CellSetMismatch {
            cell: Cell::new(order as u32, order as u32),
        });
        return report;
    }
    let mut seen = vec![false; order];
    for r in 0..order {
        seen.fill(false);
        for c in 0..order {
            let s = cells[r * order + c];
            if s as usize >= order || std::mem::replace(&mut seen[s as usize], true) {
                report.push(Violation::LatinRow {
                    row: r as u32,
                    col: c as u32,
                    symbol: s,
                });
            }
        }
    }
    for c in 0..order {
        seen.fill(false);
        for r in 0..order {
            let s = cells[r * order + c];
            if s as usize >= order || std::mem::replace(&mut seen[s as usize], true) {
                report.push(Violation::LatinColumn {
                    row: r as u32,
                    col: c as u32,
                    symbol: s,
                });
            }
        }
    }
    report
}

/// A fully filled latin square of order `t`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    order: usize,
    cells: Vec<u32>,
}

impl LatinSquare {
    pub fn new(order: usize, cells: Vec<u32>) -> Result<Self> {
        check_latin(order, &cells).into_result(Error::NotLatin)?;
        Ok(Self { order, cells })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let order = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != order) {
            return Err(Error::OrderMismatch {
                left: order,
                right: r.len(),
            });
        }
        Self::new(order, rows.concat())
    }

    /// Callers must guarantee latinness.
    pub(crate) fn new_unchecked(order: usize, cells: Vec<u32>) -> Self {
        debug_assert_eq!(cells.len(), order * order);
        Self { order, cells }
    }

    /// Cayley table of the XOR group of order `2^exponent`.
    pub fn xor(exponent: u32) -> Self {
        let n = 1usize << exponent;
        let cells = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r ^ c) as u32))
            .collect();
        Self { order: n, cells }
    }

    /// `L[r][c] = (r + c) mod n`.
    pub fn cyclic(order: usize) -> Self {
        let cells = (0..order)
            .flat_map(|r| (0..order).map(move |c| ((r + c) % order) as u32))
            .collect();
        Self { order, cells }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, row: u32, col: u32) -> u32 {
        self.cells[row as usize * self.order + col as usize]
    }

    /// Raw write; the caller restores latinness.
    pub(crate) fn set(&mut self, row: u32, col: u32, symbol: u32) {
        self.cells[row as usize * self.order + col as usize] = symbol;
    }

    pub fn row(&self, row: u32) -> &[u32] {
        let start = row as usize * self.order;
        &self.cells[start..start + self.order]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.cells.chunks(self.order.max(1))
    }

    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        let n = self.order;
        self.cells
            .iter()
            .enumerate()
            .map(move |(i, &s)| Triple::new((i / n) as u32, (i % n) as u32, s))
    }

    pub fn to_partial(&self) -> PartialLatinSquare {
        PartialLatinSquare {
            order: self.order,
            symbol_bound: self.order,
            triples: self.triples().collect(),
        }
    }

    /// Unique `b` with `self[a][b] == target` (left division in the quasigroup).
    pub fn left_divide(&self, a: u32, target: u32) -> u32 {
        self.row(a)
            .iter()
            .position(|&s| s == target)
            .map(|c| c as u32)
            .unwrap_or_else(|| panic!("symbol {target} missing from row {a}"))
    }
}

/// Orthogonality of two partial latin squares of the same order.
pub fn orthogonality_partial(p: &PartialLatinSquare, q: &PartialLatinSquare) -> Result<Report> {
    if p.order() != q.order() {
        return Err(Error::OrderMismatch {
            left: p.order(),
            right: q.order(),
        });
    }
    let mut report = Report::new();
    let (pt, qt) = (p.triples(), q.triples());
    let (mut i, mut j) = (0, 0);
    let mut seen: HashMap<(u32, u32), Cell> = HashMap::new();
    // both lists are sorted by cell; walk them together
    while i < pt.len() || j < qt.len() {
        let a = pt.get(i).map(|t| t.cell());
        let b = qt.get(j).map(|t| t.cell());
        match (a, b) {
            (Some(x), Some(y)) if x == y => {
                let pair = (pt[i].symbol, qt[j].symbol);
                if let Some(&first) = seen.get(&pair) {
                    report.push(Violation::RepeatedPair {
                        first,
                        second: x,
                        pair,
                    });
                } else {
                    seen.insert(pair, x);
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                report.push(Violation::CellSetMismatch { cell: x });
                i += 1;
            }
            (Some(_), Some(y)) | (None, Some(y)) => {
                report.push(Violation::CellSetMismatch { cell: y });
                j += 1;
            }
            (Some(x), None) => {
                report.push(Violation::CellSetMismatch { cell: x });
                i += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(report)
}

pub fn are_orthogonal_partial(p: &PartialLatinSquare, q: &PartialLatinSquare) -> Result<bool> {
    Ok(orthogonality_partial(p, q)?.is_ok())
}

/// Orthogonality of two dense grids of the same order: all `t^2` ordered
/// symbol pairs must be distinct. Symbols must lie in `[t]`.
pub fn orthogonality_cells(order: usize, a: &[u32], b: &[u32]) -> Report {
    let mut report = Report::new();
    let t = order;
    let mut first_at: Vec<u32> = vec![u32::MAX; t * t];
    for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
        let cell = Cell::new((i / t) as u32, (i % t) as u32);
        if x as usize >= t || y as usize >= t {
            report.push(Violation::RepeatedPair {
                first: cell,
                second: cell,
                pair: (x, y),
            });
            continue;
        }
        let key = x as usize * t + y as usize;
        if first_at[key] == u32::MAX {
            first_at[key] = i as u32;
        } else {
            let j = first_at[key] as usize;
            report.push(Violation::RepeatedPair {
                first: Cell::new((j / t) as u32, (j % t) as u32),
                second: cell,
                pair: (x, y),
            });
        }
    }
    report
}

pub fn orthogonality_latin(l1: &LatinSquare, l2: &LatinSquare) -> Result<Report> {
    if l1.order() != l2.order() {
        return Err(Error::OrderMismatch {
            left: l1.order(),
            right: l2.order(),
        });
    }
    Ok(orthogonality_cells(l1.order(), l1.cells(), l2.cells()))
}

pub fn are_orthogonal_latin(l1: &LatinSquare, l2: &LatinSquare) -> Result<bool> {
    Ok(orthogonality_latin(l1, l2)?.is_ok())
}

/// Every triple of `t` must be present in `l`.
pub fn is_transversal(l: &LatinSquare, t: &[Triple]) -> Result<bool> {
    let n = l.order();
    for &tr in t {
        if tr.row as usize >= n || tr.col as usize >= n || l.get(tr.row, tr.col) != tr.symbol {
            return Err(Error::TripleNotInSquare(tr));
        }
    }
    if t.len() != n {
        return Ok(false);
    }
    let mut rows = vec![false; n];
    let mut cols = vec![false; n];
    let mut syms = vec![false; n];
    for tr in t {
        if std::mem::replace(&mut rows[tr.row as usize], true)
            || std::mem::replace(&mut cols[tr.col as usize], true)
            || std::mem::replace(&mut syms[tr.symbol as usize], true)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_injective(name: &str, map: &[u32], domain: usize, codomain: usize) -> Result<()> {
    if map.len() < domain {
        return Err(Error::InvalidMap(format!(
            "{name} map has {} entries, needs {domain}",
            map.len()
        )));
    }
    let mut used = vec![false; codomain];
    for (i, &x) in map.iter().take(domain).enumerate() {
        if x as usize >= codomain {
            return Err(Error::InvalidMap(format!(
                "{name} map sends {i} to {x}, outside [{codomain}]"
            )));
        }
        if std::mem::replace(&mut used[x as usize], true) {
            return Err(Error::InvalidMap(format!(
                "{name} map is not injective at {x}"
            )));
        }
    }
    Ok(())
}

/// Whether `L` contains the image of `P` under the given row, column and
/// symbol injections.
pub fn contains(
    p: &PartialLatinSquare,
    l: &LatinSquare,
    row_map: &[u32],
    col_map: &[u32],
    sym_map: &[u32],
) -> Result<bool> {
    let t = l.order();
    check_injective("row", row_map, p.order(), t)?;
    check_injective("column", col_map, p.order(), t)?;
    check_injective("symbol", sym_map, p.symbol_bound(), t)?;
    Ok(p.triples().iter().all(|tr| {
        l.get(row_map[tr.row as usize], col_map[tr.col as usize]) == sym_map[tr.symbol as usize]
    }))
}

/// Literal containment `P ⊆ L`.
pub fn contains_identity(p: &PartialLatinSquare, l: &LatinSquare) -> bool {
    let t = l.order();
    p.triples().iter().all(|tr| {
        (tr.row as usize) < t && (tr.col as usize) < t && l.get(tr.row, tr.col) == tr.symbol
    })
}

/// A permutation of `[n]`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(image: Vec<u32>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for (i, &x) in image.iter().enumerate() {
            if x as usize >= n {
                return Err(Error::InvalidPermutation(format!(
                    "{i} -> {x} is outside [{n}]"
                )));
            }
            if std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::InvalidPermutation(format!("{x} is hit twice")));
            }
        }
        Ok(Self(image))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Self(inv)
    }

    /// Swaps the images of `i` and `j`.
    pub fn transposition(n: usize, i: u32, j: u32) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(i as usize, j as usize);
        p
    }
}

/// The isotope with `result[rows(r)][cols(c)] = syms(L[r][c])`.
pub fn apply_isotopy(
    l: &LatinSquare,
    rows: &Permutation,
    cols: &Permutation,
    syms: &Permutation,
) -> Result<LatinSquare> {
    let t = l.order();
    for p in [rows, cols, syms] {
        if p.len() != t {
            return Err(Error::OrderMismatch {
                left: t,
                right: p.len(),
            });
        }
    }
    let mut cells = vec![0; t * t];
    for r in 0..t {
        let dst = rows.apply(r as u32) as usize * t;
        for (c, &s) in l.row(r as u32).iter().enumerate() {
            cells[dst + cols.apply(c as u32) as usize] = syms.apply(s);
        }
    }
    Ok(LatinSquare::new_unchecked(t, cells))
}
