//! Double-intercalate trades on the first product square.
//!
//! For two cells `(r1, c1)` and `(r2, c2)` of `A`, write `a = B[r1][c1]`,
//! `b = B[r2][c2]`, `x = r1 ^ r2`, `y = c1 ^ c2` and `k = a ^ b`. The first
//! product square holds two intercalates on the symbols `A[r1][c1]` and
//! `A[r2][c2]`:
//!
//! ```text
//!                   (0, c2)    (x, c1)    (x^k, c2^k)  (k, c1^k)
//! (0, r2)           A[r2][c2]  A[r1][c1]
//! (y, r1)           A[r1][c1]  A[r2][c2]
//! (y^k, r2^k)                             A[r1][c1]    A[r2][c2]
//! (k, r1^k)                               A[r2][c2]    A[r1][c1]
//! ```
//!
//! Swapping the two symbols inside both intercalates keeps the square latin,
//! and because the second square pairs the eight cells diagonally the set of
//! ordered symbol pairs is unchanged, so orthogonality survives. After the
//! swap the top-left cell `((0, r2), (0, c2))` holds `A[r1][c1]`.
//!
//! The conditions on same-symbol triples of `P`:
//!
//! * C1: rows strictly increasing,
//! * C2: columns pairwise distinct,
//! * C3: the `B` values pairwise distinct,
//! * C4: `r_i ^ r_j != c_i ^ c_k` whenever `i != j` and `i != k`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::latin::{LatinSquare, Triple};
use crate::product::SymbolArray;

/// One trade: the two cells of `A` and the `B` values at those cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TradeSpec {
    pub r1: u32,
    pub c1: u32,
    pub r2: u32,
    pub c2: u32,
    pub a: u32,
    pub b: u32,
}

impl TradeSpec {
    pub fn from_square(square: &LatinSquare, r1: u32, c1: u32, r2: u32, c2: u32) -> Self {
        Self {
            r1,
            c1,
            r2,
            c2,
            a: square.get(r1, c1),
            b: square.get(r2, c2),
        }
    }

    /// C1 through C4 for the pair.
    pub fn validate(&self) -> Result<()> {
        let detail = || format!("{self:?}");
        if self.r1 >= self.r2 {
            return Err(Error::Condition {
                condition: "C1",
                detail: detail(),
            });
        }
        if self.c1 == self.c2 {
            return Err(Error::Condition {
                condition: "C2",
                detail: detail(),
            });
        }
        if self.a == self.b {
            return Err(Error::Condition {
                condition: "C3",
                detail: detail(),
            });
        }
        if self.r1 ^ self.r2 == self.c1 ^ self.c2 {
            return Err(Error::Condition {
                condition: "C4",
                detail: detail(),
            });
        }
        Ok(())
    }
}

/// Which of the two traded symbols a cell holds before the trade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Corner {
    /// `A[r1][c1]`
    First,
    /// `A[r2][c2]`
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TradeCell {
    pub row: u32,
    pub col: u32,
    pub holds: Corner,
}

impl TradeCell {
    pub fn block(&self, exponent: u32) -> (u32, u32) {
        (self.row >> exponent, self.col >> exponent)
    }
}

/// The eight cells in table order: the intercalate on rows 1, 2 (cells 0..4)
/// and the one on rows 3, 4 (cells 4..8). No condition is checked.
pub fn layout(spec: &TradeSpec, exponent: u32) -> [TradeCell; 8] {
    let TradeSpec {
        r1,
        c1,
        r2,
        c2,
        a,
        b,
    } = *spec;
    let k = a ^ b;
    let x = r1 ^ r2;
    let y = c1 ^ c2;
    let enc = |hi: u32, lo: u32| (hi << exponent) | lo;
    let rows = [enc(0, r2), enc(y, r1), enc(y ^ k, r2 ^ k), enc(k, r1 ^ k)];
    let cols = [enc(0, c2), enc(x, c1), enc(x ^ k, c2 ^ k), enc(k, c1 ^ k)];
    use Corner::*;
    let cell = |ri: usize, ci: usize, holds| TradeCell {
        row: rows[ri],
        col: cols[ci],
        holds,
    };
    [
        cell(0, 0, Second),
        cell(0, 1, First),
        cell(1, 0, First),
        cell(1, 1, Second),
        cell(2, 2, First),
        cell(2, 3, Second),
        cell(3, 2, Second),
        cell(3, 3, First),
    ]
}

/// The eight cells of the trade, after checking C1 to C4 and that the cells
/// sit in eight distinct `2^M x 2^M` blocks.
pub fn intercalate_cells(spec: &TradeSpec, exponent: u32) -> Result<[TradeCell; 8]> {
    spec.validate()?;
    let side = 1u32 << exponent;
    for v in [spec.r1, spec.c1, spec.r2, spec.c2, spec.a, spec.b] {
        if v >= side {
            return Err(Error::OutOfRange {
                value: v.into(),
                bound: side.into(),
            });
        }
    }
    let cells = layout(spec, exponent);
    for i in 0..8 {
        for j in i + 1..8 {
            if cells[i].block(exponent) == cells[j].block(exponent) {
                return Err(Error::Invariant {
                    stage: "intercalate_cells",
                    detail: format!("cells {i} and {j} share a block for {spec:?}"),
                });
            }
        }
    }
    Ok(cells)
}

/// The second-square symbols at the eight trade cells, from the closed-form
/// table rather than the product formula.
pub fn b_entries(spec: &TradeSpec, exponent: u32) -> Result<[Triple; 8]> {
    let cells = intercalate_cells(spec, exponent)?;
    let TradeSpec {
        r1,
        c1,
        r2,
        c2,
        a,
        b,
    } = *spec;
    let x = r1 ^ r2;
    let y = c1 ^ c2;
    let enc = |hi: u32, lo: u32| (hi << exponent) | lo;
    let symbols = [
        enc(0, b),
        enc(x, a),
        enc(y, y ^ a),
        enc(x ^ y, y ^ b),
        enc(x ^ y, y ^ b),
        enc(y, y ^ a),
        enc(x, a),
        enc(0, b),
    ];
    Ok(std::array::from_fn(|i| {
        Triple::new(cells[i].row, cells[i].col, symbols[i])
    }))
}

/// Outcome of [`check_conditions`], one flag per condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conditions {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.c1 && self.c2 && self.c3 && self.c4
    }
}

/// C1 to C4 for two or three triples sharing a symbol, in the given order,
/// with `square` supplying the `B` values.
pub fn check_conditions(triples: &[Triple], square: &LatinSquare) -> Result<Conditions> {
    let Some(first) = triples.first() else {
        return Err(Error::MixedSymbols);
    };
    if triples.iter().any(|t| t.symbol != first.symbol) {
        return Err(Error::MixedSymbols);
    }
    let order = square.order() as u32;
    if let Some(t) = triples.iter().find(|t| t.row >= order || t.col >= order) {
        return Err(Error::OutOfRange {
            value: t.row.max(t.col).into(),
            bound: order.into(),
        });
    }
    let n = triples.len();
    let vals: Vec<u32> = triples.iter().map(|t| square.get(t.row, t.col)).collect();
    let c1 = triples.windows(2).all(|w| w[0].row < w[1].row);
    let mut c2 = true;
    let mut c3 = true;
    for i in 0..n {
        for j in i + 1..n {
            c2 &= triples[i].col != triples[j].col;
            c3 &= vals[i] != vals[j];
        }
    }
    let mut c4 = true;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for k in (0..n).filter(|&k| k != i) {
                c4 &= triples[i].row ^ triples[j].row != triples[i].col ^ triples[k].col;
            }
        }
    }
    Ok(Conditions { c1, c2, c3, c4 })
}

/// Whether the eight-cell sets of two trades are disjoint.
pub fn specs_disjoint(s1: &TradeSpec, s2: &TradeSpec, exponent: u32) -> bool {
    let l1 = layout(s1, exponent);
    let l2 = layout(s2, exponent);
    l1.iter()
        .all(|x| l2.iter().all(|y| (x.row, x.col) != (y.row, y.col)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellChange {
    pub row: u32,
    pub col: u32,
    pub old: u32,
    pub new: u32,
}

/// Audit record for one applied trade.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TradeRecord {
    pub spec: TradeSpec,
    pub cells: Vec<CellChange>,
}

/// Cells of the first product square replaced by applied trades.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeOverlay {
    exponent: u32,
    entries: BTreeMap<(u32, u32), CellChange>,
    applied: Vec<TradeSpec>,
}

impl TradeOverlay {
    pub fn new(exponent: u32) -> Self {
        Self {
            exponent,
            entries: BTreeMap::new(),
            applied: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of replaced cells.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn specs(&self) -> &[TradeSpec] {
        &self.applied
    }

    #[inline]
    pub fn get(&self, row: u32, col: u32) -> Option<u32> {
        self.entries.get(&(row, col)).map(|c| c.new)
    }

    /// `(col, new symbol)` for the replaced cells of one row.
    pub fn row_entries(&self, row: u32) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.entries
            .range((row, 0)..=(row, u32::MAX))
            .map(|(&(_, col), c)| (col, c.new))
    }

    /// Replaces both intercalates of `spec` by their disjoint mates. A cell
    /// already in the overlay is a hard error.
    pub fn apply(&mut self, spec: TradeSpec, a: &SymbolArray) -> Result<()> {
        let cells = intercalate_cells(&spec, self.exponent)?;
        if let Some(c) = cells
            .iter()
            .find(|c| self.entries.contains_key(&(c.row, c.col)))
        {
            return Err(Error::OverlayCollision {
                row: c.row,
                col: c.col,
            });
        }
        let first = a.get(spec.r1, spec.c1);
        let second = a.get(spec.r2, spec.c2);
        for c in cells {
            let (old, new) = match c.holds {
                Corner::First => (first, second),
                Corner::Second => (second, first),
            };
            self.entries.insert(
                (c.row, c.col),
                CellChange {
                    row: c.row,
                    col: c.col,
                    old,
                    new,
                },
            );
        }
        self.applied.push(spec);
        Ok(())
    }

    /// One record per applied trade, in application order, cells sorted by
    /// `(row, col)`.
    pub fn records(&self) -> Vec<TradeRecord> {
        self.applied
            .iter()
            .map(|spec| {
                let mut cells: Vec<CellChange> = layout(spec, self.exponent)
                    .iter()
                    .map(|c| self.entries[&(c.row, c.col)])
                    .collect();
                cells.sort_unstable_by_key(|c| (c.row, c.col));
                TradeRecord { spec: *spec, cells }
            })
            .collect()
    }
}

/// Swaps the two symbols inside both intercalates of `spec` in a dense
/// square, after checking that the eight cells really form two intercalates.
pub fn switch_intercalates(
    square: &mut LatinSquare,
    spec: &TradeSpec,
    exponent: u32,
) -> Result<()> {
    let cells = layout(spec, exponent);
    let t = square.order() as u32;
    if let Some(c) = cells.iter().find(|c| c.row >= t || c.col >= t) {
        return Err(Error::OutOfRange {
            value: c.row.max(c.col).into(),
            bound: t.into(),
        });
    }
    let v: Vec<u32> = cells.iter().map(|c| square.get(c.row, c.col)).collect();
    for quad in [0, 4] {
        let (x, y, z, w) = (v[quad], v[quad + 1], v[quad + 2], v[quad + 3]);
        if !(x == w && y == z && x != y) {
            return Err(Error::NotIntercalate(format!(
                "cells {quad}..{} hold {x} {y} / {z} {w}",
                quad + 4
            )));
        }
    }
    for (c, old) in cells.iter().zip(&v) {
        let partner = if c.holds == cells[0].holds {
            v[1]
        } else {
            v[0]
        };
        debug_assert_ne!(*old, partner);
        square.set(c.row, c.col, partner);
    }
    Ok(())
}
