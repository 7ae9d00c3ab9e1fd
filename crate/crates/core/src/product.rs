//! The product squares of order `2^{2M}`.
//!
//! Rows and columns are pairs `(p, r)` and `(q, c)` over `[2^M]`, flattened
//! as `p * 2^M + r`. With `A` a `2^M x 2^M` array holding every symbol of
//! `[2^{2M}]` once and `B` a latin square of order `2^M`:
//!
//! ```text
//! first  square: ((p, r), (q, c)) -> A[q ^ r][p ^ c]
//! second square: ((p, r), (q, c)) -> (p ^ q, p ^ B[q ^ r][p ^ c])
//! ```
//!
//! The second square's pair symbols are flattened the same way, so its
//! top-left `2^M` block is literally `B`. Both squares are latin, they are
//! orthogonal, and the cells of the first square under a fixed symbol
//! `(z, d)` of the second form a transversal.
//!
//! Cells are evaluated in `O(1)` from the formulas; a [`TradeOverlay`]
//! records the cells of the first square changed by intercalate trades.

use crate::completion::DivisionTable;
use crate::error::{Error, Result};
use crate::group::{Group, PairIndex};
use crate::latin::{LatinSquare, PartialLatinSquare, Triple};
use crate::trades::{TradeOverlay, TradeSpec};

/// Largest order served by [`ProductPair::materialize`].
pub const DENSE_THRESHOLD: usize = 4096;

/// A `2^M x 2^M` array in which each symbol of `[2^{2M}]` occurs exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolArray {
    exponent: u32,
    side: usize,
    grid: Vec<u32>,
    position: Vec<u32>,
}

impl SymbolArray {
    pub fn from_rows(exponent: u32, rows: &[Vec<u32>]) -> Result<Self> {
        Group::new(exponent)?;
        let side = 1usize << exponent;
        if rows.len() != side {
            return Err(Error::OrderMismatch {
                left: side,
                right: rows.len(),
            });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != side) {
            return Err(Error::OrderMismatch {
                left: side,
                right: r.len(),
            });
        }
        Self::from_grid(exponent, rows.concat())
    }

    fn from_grid(exponent: u32, grid: Vec<u32>) -> Result<Self> {
        let side = 1usize << exponent;
        let total = side * side;
        let mut position = vec![u32::MAX; total];
        for (i, &s) in grid.iter().enumerate() {
            if s as usize >= total {
                return Err(Error::OutOfRange {
                    value: s.into(),
                    bound: total as u64,
                });
            }
            if position[s as usize] != u32::MAX {
                return Err(Error::RepeatedSymbol { symbol: s });
            }
            position[s as usize] = i as u32;
        }
        Ok(Self {
            exponent,
            side,
            grid,
            position,
        })
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn side(&self) -> usize {
        self.side
    }

    #[inline]
    pub fn get(&self, row: u32, col: u32) -> u32 {
        self.grid[row as usize * self.side + col as usize]
    }

    /// The unique cell holding `symbol`.
    pub fn position(&self, symbol: u32) -> (u32, u32) {
        let i = self.position[symbol as usize] as usize;
        ((i / self.side) as u32, (i % self.side) as u32)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.grid.chunks(self.side)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.rows().map(<[u32]>::to_vec).collect()
    }
}

/// Places `pstar` (pairwise distinct symbols) in a `2^M x 2^M` array and fills
/// the remaining cells row-major with the unused symbols in ascending order.
pub fn build_symbol_array(pstar: &PartialLatinSquare, exponent: u32) -> Result<SymbolArray> {
    Group::new(exponent)?;
    let side = 1usize << exponent;
    let total = side * side;
    let mut grid = vec![u32::MAX; total];
    let mut used = vec![false; total];
    for t in pstar.triples() {
        if t.row as usize >= side || t.col as usize >= side {
            return Err(Error::OutOfRange {
                value: t.row.max(t.col).into(),
                bound: side as u64,
            });
        }
        if t.symbol as usize >= total {
            return Err(Error::OutOfRange {
                value: t.symbol.into(),
                bound: total as u64,
            });
        }
        if std::mem::replace(&mut used[t.symbol as usize], true) {
            return Err(Error::RepeatedSymbol { symbol: t.symbol });
        }
        grid[t.row as usize * side + t.col as usize] = t.symbol;
    }
    let mut fresh = (0..total as u32).filter(|&s| !used[s as usize]);
    for slot in grid.iter_mut().filter(|s| **s == u32::MAX) {
        *slot = fresh.next().expect("as many unused symbols as empty cells");
    }
    SymbolArray::from_grid(exponent, grid)
}

/// The pair of product squares built from `A` and `B`, plus the trades
/// applied to the first square.
#[derive(Debug, Clone)]
pub struct ProductPair {
    exponent: u32,
    mask: u32,
    a: SymbolArray,
    b: LatinSquare,
    division: DivisionTable,
    overlay: TradeOverlay,
}

impl ProductPair {
    pub fn new(a: SymbolArray, b: LatinSquare) -> Result<Self> {
        let exponent = a.exponent();
        if b.order() != a.side() {
            return Err(Error::OrderMismatch {
                left: a.side(),
                right: b.order(),
            });
        }
        Ok(Self {
            exponent,
            mask: (1 << exponent) - 1,
            division: DivisionTable::new(&b),
            overlay: TradeOverlay::new(exponent),
            a,
            b,
        })
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// `2^{2M}`.
    pub fn order(&self) -> usize {
        1usize << (2 * self.exponent)
    }

    pub fn symbol_array(&self) -> &SymbolArray {
        &self.a
    }

    pub fn quasigroup(&self) -> &LatinSquare {
        &self.b
    }

    pub fn overlay(&self) -> &TradeOverlay {
        &self.overlay
    }

    #[inline]
    fn split(&self, x: u32) -> (u32, u32) {
        (x >> self.exponent, x & self.mask)
    }

    /// First square before any trade.
    #[inline]
    pub fn base_a_at(&self, row: u32, col: u32) -> u32 {
        let (p, r) = self.split(row);
        let (q, c) = self.split(col);
        self.a.get(q ^ r, p ^ c)
    }

    /// First square, trades included.
    #[inline]
    pub fn a_at(&self, row: u32, col: u32) -> u32 {
        match self.overlay.get(row, col) {
            Some(s) => s,
            None => self.base_a_at(row, col),
        }
    }

    #[inline]
    pub fn b_at(&self, row: u32, col: u32) -> u32 {
        let (p, r) = self.split(row);
        let (q, c) = self.split(col);
        let inner = self.b.get(q ^ r, p ^ c);
        ((p ^ q) << self.exponent) | (p ^ inner)
    }

    pub fn cell_a(&self, row: PairIndex, col: PairIndex) -> u32 {
        self.a_at(row.encode(self.exponent), col.encode(self.exponent))
    }

    pub fn cell_b(&self, row: PairIndex, col: PairIndex) -> u32 {
        self.b_at(row.encode(self.exponent), col.encode(self.exponent))
    }

    pub fn apply_trade(&mut self, spec: TradeSpec) -> Result<()> {
        self.overlay.apply(spec, &self.a)
    }

    /// The cells of the untraded first square whose second-square symbol is
    /// `(z, d)`, one per row `(p, r)` in ascending order.
    pub fn transversal_cells(&self, z: u32, d: u32) -> Result<Vec<Triple>> {
        if !self.overlay.is_empty() {
            return Err(Error::OverlayNotEmpty);
        }
        let side = 1u32 << self.exponent;
        for v in [z, d] {
            if v >= side {
                return Err(Error::OutOfRange {
                    value: v.into(),
                    bound: side.into(),
                });
            }
        }
        let mut cells = Vec::with_capacity(self.order());
        for p in 0..side {
            let q = p ^ z;
            for r in 0..side {
                // B[q ^ r][p ^ c] must equal p ^ d
                let c = p ^ self.division.divide(q ^ r, p ^ d);
                let row = (p << self.exponent) | r;
                let col = (q << self.exponent) | c;
                cells.push(Triple::new(row, col, self.base_a_at(row, col)));
            }
        }
        Ok(cells)
    }

    /// Dense row of either square into `out`.
    pub fn fill_row(&self, row: u32, first: bool, out: &mut Vec<u32>) {
        let t = self.order() as u32;
        out.clear();
        if first {
            out.extend((0..t).map(|c| self.base_a_at(row, c)));
            for (col, s) in self.overlay.row_entries(row) {
                out[col as usize] = s;
            }
        } else {
            out.extend((0..t).map(|c| self.b_at(row, c)));
        }
    }

    /// Both squares as dense latin squares. Only for orders up to
    /// [`DENSE_THRESHOLD`].
    pub fn materialize(&self) -> Result<(LatinSquare, LatinSquare)> {
        let t = self.order();
        if t > DENSE_THRESHOLD {
            return Err(Error::DenseThreshold {
                order: t,
                limit: DENSE_THRESHOLD,
            });
        }
        let mut a = Vec::with_capacity(t * t);
        let mut b = Vec::with_capacity(t * t);
        let mut row = Vec::with_capacity(t);
        for i in 0..t as u32 {
            self.fill_row(i, true, &mut row);
            a.extend_from_slice(&row);
            self.fill_row(i, false, &mut row);
            b.extend_from_slice(&row);
        }
        Ok((LatinSquare::new(t, a)?, LatinSquare::new(t, b)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latin::{are_orthogonal_latin, is_transversal};
    use ols_oracle as oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pstar(order: usize, bound: usize, t: &[(u32, u32, u32)]) -> PartialLatinSquare {
        PartialLatinSquare::with_symbol_bound(order, bound, t.iter().map(|&x| Triple::from(x)))
            .unwrap()
    }

    fn random_pair(rng: &mut ChaCha8Rng, exponent: u32) -> ProductPair {
        let side = 1usize << exponent;
        let a = SymbolArray::from_rows(exponent, &oracle::random_symbol_array(rng, side)).unwrap();
        let b = LatinSquare::from_rows(&oracle::random_latin(rng, side)).unwrap();
        ProductPair::new(a, b).unwrap()
    }

    fn dense(pair: &ProductPair) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
        let (a, b) = pair.materialize().unwrap();
        (
            a.rows().map(<[u32]>::to_vec).collect(),
            b.rows().map(<[u32]>::to_vec).collect(),
        )
    }

    #[test]
    fn symbol_array_examples() {
        let a = build_symbol_array(&pstar(2, 4, &[(0, 0, 0)]), 1).unwrap();
        assert_eq!(a.to_rows(), vec![vec![0, 1], vec![2, 3]]);

        let a = build_symbol_array(&pstar(2, 4, &[(0, 1, 3)]), 1).unwrap();
        assert_eq!(a.to_rows(), vec![vec![0, 3], vec![1, 2]]);

        // symbol 5 is outside [4] for M = 1
        let too_big = pstar(2, 6, &[(0, 1, 5)]);
        assert!(matches!(
            build_symbol_array(&too_big, 1),
            Err(Error::OutOfRange { .. })
        ));
        let a = build_symbol_array(&pstar(2, 6, &[(0, 1, 5)]), 2).unwrap();
        assert_eq!(a.get(0, 0), 0);
        assert_eq!(a.get(0, 1), 5);
        assert_eq!(a.get(0, 2), 1);

        let dup = pstar(4, 16, &[(0, 0, 3), (1, 1, 3)]);
        assert!(matches!(
            build_symbol_array(&dup, 2),
            Err(Error::RepeatedSymbol { symbol: 3 })
        ));
    }

    #[test]
    fn symbol_array_positions_are_unique() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for exponent in 1..=3 {
            let side = 1usize << exponent;
            let a = SymbolArray::from_rows(exponent, &oracle::random_symbol_array(&mut rng, side))
                .unwrap();
            for r in 0..side as u32 {
                for c in 0..side as u32 {
                    assert_eq!(a.position(a.get(r, c)), (r, c));
                }
            }
        }
        assert!(matches!(
            SymbolArray::from_rows(1, &[vec![0, 1], vec![1, 2]]),
            Err(Error::RepeatedSymbol { symbol: 1 })
        ));
    }

    #[test]
    fn identity_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pair = random_pair(&mut rng, 2);
        let g = Group::new(2).unwrap();
        let e = |hi, lo| PairIndex::decode(g.encode_pair(hi, lo).unwrap(), 2);
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(pair.cell_a(e(0, r), e(0, c)), pair.symbol_array().get(r, c));
                assert_eq!(pair.cell_b(e(0, r), e(0, c)), pair.quasigroup().get(r, c));
            }
        }
        for p in 0..4 {
            for q in 0..4 {
                assert_eq!(pair.cell_a(e(p, 0), e(q, 0)), pair.symbol_array().get(q, p));
            }
        }
    }

    #[test]
    fn second_square_hand_value() {
        let a = build_symbol_array(&pstar(2, 4, &[(0, 0, 0)]), 1).unwrap();
        let pair = ProductPair::new(a, LatinSquare::xor(1)).unwrap();
        // ((1,0),(1,0)) -> (1 ^ 1, 1 ^ B[1][1]) = (0, 1)
        assert_eq!(pair.b_at(2, 2), 1);
    }

    #[test]
    fn small_pair_is_orthogonal() {
        let a = build_symbol_array(&pstar(2, 4, &[(0, 0, 0)]), 1).unwrap();
        let pair = ProductPair::new(a, LatinSquare::xor(1)).unwrap();
        let (a, b) = pair.materialize().unwrap();
        assert_eq!(a.order(), 4);
        assert!(are_orthogonal_latin(&a, &b).unwrap());
        let (da, db) = dense(&pair);
        assert!(oracle::are_orthogonal(&da, &db));
    }

    #[test]
    fn latin_orthogonal_and_transversals_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for exponent in 1..=3u32 {
            for _ in 0..3 {
                let pair = random_pair(&mut rng, exponent);
                let (a, b) = pair.materialize().unwrap();
                let (da, db) = dense(&pair);
                assert!(oracle::is_latin(&da) && oracle::is_latin(&db));
                assert!(oracle::are_orthogonal(&da, &db));

                let side = 1u32 << exponent;
                let t = pair.order();
                let mut covered = vec![false; t * t];
                for z in 0..side {
                    for d in 0..side {
                        let cells = pair.transversal_cells(z, d).unwrap();
                        assert_eq!(cells.len(), t);
                        assert!(is_transversal(&a, &cells).unwrap());
                        let symbol = (z << exponent) | d;
                        for tr in &cells {
                            assert_eq!(b.get(tr.row, tr.col), symbol);
                            let k = tr.row as usize * t + tr.col as usize;
                            assert!(!std::mem::replace(&mut covered[k], true));
                        }
                    }
                }
                assert!(covered.iter().all(|&x| x));
            }
        }
    }

    #[test]
    fn blocks_are_isotopic_copies() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let exponent = 2;
        let pair = random_pair(&mut rng, exponent);
        let side = 4u32;
        let a_sorted = {
            let mut s: Vec<u32> = pair.symbol_array().rows().flatten().copied().collect();
            s.sort_unstable();
            s
        };
        for p in 0..side {
            for q in 0..side {
                // first square: symbols of A unchanged, rows/cols permuted
                let mut block = Vec::new();
                for r in 0..side {
                    for c in 0..side {
                        block.push(pair.base_a_at(p * side + r, q * side + c));
                    }
                }
                let mut sorted = block.clone();
                sorted.sort_unstable();
                assert_eq!(sorted, a_sorted);
                for r in 0..side {
                    for c in 0..side {
                        let (ar, ac) = pair.symbol_array().position(block[(r * side + c) as usize]);
                        assert_eq!(ar, q ^ r);
                        assert_eq!(ac, p ^ c);
                    }
                }
                // second square: all symbols share the first coordinate p ^ q
                // and the second coordinates form a latin square of order 2^M
                let mut grid = vec![vec![0u32; side as usize]; side as usize];
                for r in 0..side {
                    for c in 0..side {
                        let s = pair.b_at(p * side + r, q * side + c);
                        assert_eq!(s >> exponent, p ^ q);
                        grid[r as usize][c as usize] = s & (side - 1);
                    }
                }
                assert!(oracle::is_latin(&grid));
            }
        }
    }

    #[test]
    fn lazy_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for exponent in 1..=3 {
            let pair = random_pair(&mut rng, exponent);
            let (a, b) = pair.materialize().unwrap();
            let t = pair.order() as u32;
            for i in 0..t {
                for j in 0..t {
                    assert_eq!(a.get(i, j), pair.a_at(i, j));
                    assert_eq!(b.get(i, j), pair.b_at(i, j));
                }
            }
        }
        // order 4096, sampled
        let pair = random_pair(&mut rng, 6);
        let (a, b) = pair.materialize().unwrap();
        for _ in 0..100_000 {
            let i = rng.gen_range(0..4096);
            let j = rng.gen_range(0..4096);
            assert_eq!(a.get(i, j), pair.a_at(i, j));
            assert_eq!(b.get(i, j), pair.b_at(i, j));
        }
    }

    #[test]
    fn threshold_and_argument_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pair = random_pair(&mut rng, 7);
        assert!(matches!(
            pair.materialize(),
            Err(Error::DenseThreshold { order: 16384, .. })
        ));
        let pair = random_pair(&mut rng, 2);
        assert!(pair.transversal_cells(4, 0).is_err());
        let a = SymbolArray::from_rows(1, &oracle::random_symbol_array(&mut rng, 2)).unwrap();
        assert!(ProductPair::new(a, LatinSquare::xor(2)).is_err());
    }
}
