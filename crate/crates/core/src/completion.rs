//! Completion of a partial latin square of order `n` into a latin square of
//! any order `t >= 2n`, with the partial square in the top-left corner.
//!
//! Three stages, each driven by bipartite matchings:
//!
//! 1. [`fill_block`] fills the `n x n` corner row by row, matching each row's
//!    empty cells to admissible symbols of `[t]`.
//! 2. [`extend_to_rectangle`] widens the block to an `n x t` latin rectangle.
//!    The symbols missing from each row form a bipartite multigraph of
//!    maximum degree `t - n`; padded to a regular graph it splits into
//!    `t - n` perfect matchings, one per new column.
//! 3. [`ryser_complete`] appends rows one at a time. With `k` rows placed,
//!    every column misses `t - k` symbols and every symbol is missing from
//!    `t - k` columns, so a perfect matching always exists.
//!
//! All matchings scan vertices in ascending order, so outputs are
//! reproducible bit for bit.

use crate::error::{Error, Result};
use crate::latin::{LatinSquare, PartialLatinSquare};

/// Bipartite graph with adjacency lists on the left side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    right: usize,
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Adjacency lists are sorted; duplicates and out-of-range right
    /// vertices are rejected.
    pub fn new(right: usize, mut adj: Vec<Vec<usize>>) -> Result<Self> {
        for (u, nbrs) in adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(&v) = nbrs.last() {
                if v >= right {
                    return Err(Error::Bipartite(format!(
                        "edge {u} -> {v} leaves the right side [{right}]"
                    )));
                }
            }
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Bipartite(format!(
                    "duplicate edge at left vertex {u}"
                )));
            }
        }
        Ok(Self { right, adj })
    }

    pub fn left_len(&self) -> usize {
        self.adj.len()
    }

    pub fn right_len(&self) -> usize {
        self.right
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    left: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.left.iter().filter(|m| m.is_some()).count()
    }

    pub fn left(&self, u: usize) -> Option<usize> {
        self.left[u]
    }

    pub fn right(&self, v: usize) -> Option<usize> {
        self.right[v]
    }

    pub fn is_left_perfect(&self) -> bool {
        self.left.iter().all(Option::is_some)
    }

    /// `(left, right)` pairs, ascending by left vertex.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.map(|v| (u, v)))
    }
}

/// Maximum matching by augmenting paths.
///
/// Left vertices are processed in ascending order. Each search first takes
/// the lowest free neighbour, and only otherwise tries to re-route an
/// already matched one.
pub fn max_matching(g: &BipartiteGraph) -> Matching {
    let mut m = Matching {
        left: vec![None; g.left_len()],
        right: vec![None; g.right_len()],
    };
    let mut visited = vec![false; g.right_len()];
    for u in 0..g.left_len() {
        visited.fill(false);
        augment(g, u, &mut m, &mut visited);
    }
    m
}

fn augment(g: &BipartiteGraph, u: usize, m: &mut Matching, visited: &mut [bool]) -> bool {
    if let Some(&v) = g.adj[u].iter().find(|&&v| m.right[v].is_none()) {
        m.left[u] = Some(v);
        m.right[v] = Some(u);
        return true;
    }
    for &v in &g.adj[u] {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        let owner = m.right[v].expect("non-free vertex has an owner");
        if augment(g, owner, m, visited) {
            m.left[u] = Some(v);
            m.right[v] = Some(u);
            return true;
        }
    }
    false
}

fn invariant(stage: &'static str, detail: String) -> Error {
    Error::Invariant { stage, detail }
}

/// Fills the `n x n` corner so that it agrees with `p` and no symbol of `[t]`
/// repeats in a row or column.
pub fn fill_block(p: &PartialLatinSquare, t: usize) -> Result<Vec<Vec<u32>>> {
    let n = p.order();
    if t < 2 * n {
        return Err(Error::CompletionOrder { n, t });
    }
    let mut grid = p.to_rows();
    // col_used[c][s]: symbol s already in column c (prefilled anywhere, or
    // assigned in an earlier row)
    let mut col_used = vec![vec![false; t]; n];
    for tr in p.triples() {
        col_used[tr.col as usize][tr.symbol as usize] = true;
    }
    let mut block = vec![vec![0u32; n]; n];
    for r in 0..n {
        let mut row_used = vec![false; t];
        for s in grid[r].iter().flatten() {
            row_used[*s as usize] = true;
        }
        let empty: Vec<usize> = (0..n).filter(|&c| grid[r][c].is_none()).collect();
        let adj = empty
            .iter()
            .map(|&c| {
                (0..t)
                    .filter(|&s| !row_used[s] && !col_used[c][s])
                    .collect()
            })
            .collect();
        let g = BipartiteGraph::new(t, adj)?;
        let m = max_matching(&g);
        if !m.is_left_perfect() {
            return Err(invariant(
                "fill_block",
                format!(
                    "row {r}: only {} of {} empty cells matched at t = {t}",
                    m.size(),
                    empty.len()
                ),
            ));
        }
        for (i, s) in m.pairs() {
            let c = empty[i];
            grid[r][c] = Some(s as u32);
            col_used[c][s] = true;
        }
        for c in 0..n {
            block[r][c] = grid[r][c].expect("row filled");
        }
    }
    Ok(block)
}

/// `k x t` array whose rows are permutations of `[t]` and whose columns have
/// no repeated symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinRectangle {
    width: usize,
    rows: Vec<Vec<u32>>,
}

impl LatinRectangle {
    pub fn new(width: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        let k = rows.len();
        if k > width {
            return Err(invariant(
                "latin rectangle",
                format!("{k} rows exceed width {width}"),
            ));
        }
        let mut col_used = vec![vec![false; width]; width];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::OrderMismatch {
                    left: width,
                    right: row.len(),
                });
            }
            let mut seen = vec![false; width];
            for (c, &s) in row.iter().enumerate() {
                let s = s as usize;
                if s >= width
                    || std::mem::replace(&mut seen[s], true)
                    || std::mem::replace(&mut col_used[c][s], true)
                {
                    return Err(invariant(
                        "latin rectangle",
                        format!("symbol {s} at ({r}, {c}) repeats or is out of range"),
                    ));
                }
            }
        }
        Ok(Self { width, rows })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

/// Widens a row/column repeat-free `n x n` block over `[t]` to an `n x t`
/// latin rectangle.
pub fn extend_to_rectangle(block: &[Vec<u32>], t: usize) -> Result<LatinRectangle> {
    let n = block.len();
    if t < 2 * n {
        return Err(Error::CompletionOrder { n, t });
    }
    let degree = t - n;
    // multiplicity[u][s]: rows 0..n are real, rows n..t pad the symbol side
    // up to `degree`
    let mut mult = vec![vec![0u32; t]; t];
    let mut symbol_degree = vec![0usize; t];
    for (r, row) in block.iter().enumerate() {
        if row.len() != n {
            return Err(Error::OrderMismatch {
                left: n,
                right: row.len(),
            });
        }
        let mut present = vec![false; t];
        for &s in row {
            if s as usize >= t || std::mem::replace(&mut present[s as usize], true) {
                return Err(invariant(
                    "extend_to_rectangle",
                    format!("row {r} repeats {s}"),
                ));
            }
        }
        for s in (0..t).filter(|&s| !present[s]) {
            mult[r][s] = 1;
            symbol_degree[s] += 1;
        }
    }
    let mut pad = n;
    let mut pad_fill = 0;
    for s in 0..t {
        let deficit = degree
            .checked_sub(symbol_degree[s])
            .ok_or_else(|| invariant("extend_to_rectangle", format!("symbol {s} over-used")))?;
        for _ in 0..deficit {
            if pad_fill == degree {
                pad += 1;
                pad_fill = 0;
            }
            mult[pad][s] += 1;
            pad_fill += 1;
        }
    }

    let mut rows: Vec<Vec<u32>> = block.to_vec();
    for extra in 0..degree {
        let adj = mult
            .iter()
            .map(|m| (0..t).filter(|&s| m[s] > 0).collect())
            .collect();
        let g = BipartiteGraph::new(t, adj)?;
        let m = max_matching(&g);
        if !m.is_left_perfect() {
            return Err(invariant(
                "extend_to_rectangle",
                format!(
                    "column {}: regular graph without perfect matching",
                    n + extra
                ),
            ));
        }
        for (u, s) in m.pairs() {
            mult[u][s] -= 1;
            if u < n {
                rows[u].push(s as u32);
            }
        }
    }
    LatinRectangle::new(t, rows)
}

/// Completes a `k x t` latin rectangle to a latin square of order `t` whose
/// first `k` rows are the rectangle.
pub fn ryser_complete(rect: &LatinRectangle) -> Result<LatinSquare> {
    let t = rect.width();
    let mut col_used = vec![vec![false; t]; t];
    let mut cells = Vec::with_capacity(t * t);
    for row in rect.rows() {
        for (c, &s) in row.iter().enumerate() {
            col_used[c][s as usize] = true;
        }
        cells.extend_from_slice(row);
    }
    for r in rect.height()..t {
        let adj = (0..t)
            .map(|c| (0..t).filter(|&s| !col_used[c][s]).collect())
            .collect();
        let g = BipartiteGraph::new(t, adj)?;
        let m = max_matching(&g);
        if !m.is_left_perfect() {
            return Err(invariant(
                "ryser_complete",
                format!("row {r}: only {} of {t} columns matched", m.size()),
            ));
        }
        for (c, s) in m.pairs() {
            col_used[c][s] = true;
            cells.push(s as u32);
        }
    }
    LatinSquare::new(t, cells)
}

/// Latin square of order `t >= 2n` containing `p` in its top-left corner.
pub fn embed_pls(p: &PartialLatinSquare, t: usize) -> Result<LatinSquare> {
    let block = fill_block(p, t)?;
    let rect = extend_to_rectangle(&block, t)?;
    ryser_complete(&rect)
}

/// Right factor `b` with `square[a][b] == target`.
pub fn left_divide(square: &LatinSquare, a: u32, target: u32) -> u32 {
    square.left_divide(a, target)
}

/// Precomputed left division for a latin square: `O(1)` lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionTable {
    order: usize,
    table: Vec<u32>,
}

impl DivisionTable {
    pub fn new(square: &LatinSquare) -> Self {
        let t = square.order();
        let mut table = vec![0; t * t];
        for a in 0..t {
            for (b, &s) in square.row(a as u32).iter().enumerate() {
                table[a * t + s as usize] = b as u32;
            }
        }
        Self { order: t, table }
    }

    #[inline]
    pub fn divide(&self, a: u32, target: u32) -> u32 {
        self.table[a as usize * self.order + target as usize]
    }
}
