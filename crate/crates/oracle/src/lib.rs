//! Slow, obviously-correct reference checks and instance generators.
//!
//! Nothing here depends on the construction crates: grids are plain
//! `Vec<Vec<u32>>` and partial squares are lists of `(row, col, symbol)`.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

pub type RawTriple = (u32, u32, u32);

pub mod fixtures {
    use super::RawTriple;

    fn parse(rows: &[&str]) -> Vec<RawTriple> {
        let mut out = Vec::new();
        for (r, line) in rows.iter().enumerate() {
            for (c, tok) in line.split_whitespace().enumerate() {
                if tok != "." {
                    out.push((r as u32, c as u32, tok.parse().unwrap()));
                }
            }
        }
        out
    }

    pub const REFERENCE_P: [&str; 4] = ["0 1 2 .", "2 0 1 3", "3 . 0 .", ". 2 . 1"];
    pub const REFERENCE_Q: [&str; 4] = ["0 2 1 .", "3 1 0 2", "1 . 2 .", ". 0 . 3"];

    /// An orthogonal pair of partial latin squares of order 4, volume 11.
    pub fn reference_pair_order4() -> (Vec<RawTriple>, Vec<RawTriple>) {
        (parse(&REFERENCE_P), parse(&REFERENCE_Q))
    }
}

/// Pairwise definition check, quadratic in the volume.
pub fn is_partial_latin(order: u32, triples: &[RawTriple]) -> bool {
    if triples
        .iter()
        .any(|&(r, c, e)| r >= order || c >= order || e >= order)
    {
        return false;
    }
    for (i, x) in triples.iter().enumerate() {
        for y in &triples[i + 1..] {
            let x = [x.0, x.1, x.2];
            let y = [y.0, y.1, y.2];
            for (a, b, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                if x[a] == y[a] && x[b] == y[b] && x[k] != y[k] {
                    return false;
                }
            }
            if x == y {
                return false;
            }
        }
    }
    true
}

/// Direct transcription of the orthogonality definition for partial squares.
pub fn are_orthogonal_partial(p: &[RawTriple], q: &[RawTriple]) -> bool {
    let pc: HashMap<(u32, u32), u32> = p.iter().map(|&(r, c, e)| ((r, c), e)).collect();
    let qc: HashMap<(u32, u32), u32> = q.iter().map(|&(r, c, e)| ((r, c), e)).collect();
    if pc.len() != p.len() || qc.len() != q.len() {
        return false;
    }
    let pcells: HashSet<_> = pc.keys().collect();
    let qcells: HashSet<_> = qc.keys().collect();
    if pcells != qcells {
        return false;
    }
    let cells: Vec<_> = pc.keys().copied().collect();
    for (i, a) in cells.iter().enumerate() {
        for b in &cells[i + 1..] {
            if pc[a] == pc[b] && qc[a] == qc[b] {
                return false;
            }
        }
    }
    true
}

pub fn is_latin(grid: &[Vec<u32>]) -> bool {
    let n = grid.len();
    let target: Vec<u32> = (0..n as u32).collect();
    for row in grid {
        if row.len() != n {
            return false;
        }
        let mut s = row.clone();
        s.sort_unstable();
        if s != target {
            return false;
        }
    }
    for c in 0..n {
        let mut s: Vec<u32> = grid.iter().map(|r| r[c]).collect();
        s.sort_unstable();
        if s != target {
            return false;
        }
    }
    true
}

pub fn are_orthogonal(a: &[Vec<u32>], b: &[Vec<u32>]) -> bool {
    let n = a.len();
    if b.len() != n {
        return false;
    }
    let mut pairs = HashSet::with_capacity(n * n);
    for (ra, rb) in a.iter().zip(b) {
        for (&x, &y) in ra.iter().zip(rb) {
            if !pairs.insert((x, y)) {
                return false;
            }
        }
    }
    pairs.len() == n * n
}

pub fn contains(grid: &[Vec<u32>], triples: &[RawTriple]) -> bool {
    triples
        .iter()
        .all(|&(r, c, e)| grid.get(r as usize).and_then(|row| row.get(c as usize)) == Some(&e))
}

/// Maximum matching size by dynamic programming over subsets of the right
/// side. Exponential in `right`; meant for `right <= 16`.
pub fn max_matching_size(right: usize, adj: &[Vec<usize>]) -> usize {
    assert!(right <= 20);
    let full = 1usize << right;
    // best[mask] = max matching using exactly the left vertices seen so far,
    // with `mask` the set of right vertices consumed
    let mut reachable = vec![false; full];
    reachable[0] = true;
    for nbrs in adj {
        let mut next = reachable.clone();
        for mask in 0..full {
            if !reachable[mask] {
                continue;
            }
            for &v in nbrs {
                if mask & (1 << v) == 0 {
                    next[mask | (1 << v)] = true;
                }
            }
        }
        reachable = next;
    }
    (0..full)
        .filter(|&m| reachable[m])
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Random partial latin square of the given order built by rejection:
/// `attempts` random triples are offered and kept when they fit.
pub fn random_partial<R: Rng>(rng: &mut R, order: u32, attempts: usize) -> Vec<RawTriple> {
    let n = order as usize;
    let mut cell = vec![None; n * n];
    let mut row_has = vec![false; n * n];
    let mut col_has = vec![false; n * n];
    let mut out = Vec::new();
    for _ in 0..attempts {
        let r = rng.gen_range(0..n);
        let c = rng.gen_range(0..n);
        let e = rng.gen_range(0..n);
        if cell[r * n + c].is_some() || row_has[r * n + e] || col_has[c * n + e] {
            continue;
        }
        cell[r * n + c] = Some(e);
        row_has[r * n + e] = true;
        col_has[c * n + e] = true;
        out.push((r as u32, c as u32, e as u32));
    }
    if out.is_empty() {
        let r = rng.gen_range(0..order);
        let c = rng.gen_range(0..order);
        out.push((r, c, rng.gen_range(0..order)));
    }
    out.sort_unstable();
    out
}

/// Fills `cells` with symbols for a second square orthogonal to `p` by
/// backtracking, symbols tried in a random order.
fn search_mate<R: Rng>(rng: &mut R, order: u32, p: &[RawTriple]) -> Option<Vec<RawTriple>> {
    let n = order as usize;
    let mut q = vec![0u32; p.len()];
    let mut row_has = vec![false; n * n];
    let mut col_has = vec![false; n * n];
    let mut pair_used = vec![false; n * n];
    let orders: Vec<Vec<u32>> = p
        .iter()
        .map(|_| {
            let mut s: Vec<u32> = (0..order).collect();
            s.shuffle(rng);
            s
        })
        .collect();
    let mut budget = 200_000usize;

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        n: usize,
        p: &[RawTriple],
        orders: &[Vec<u32>],
        q: &mut [u32],
        row_has: &mut [bool],
        col_has: &mut [bool],
        pair_used: &mut [bool],
        budget: &mut usize,
    ) -> bool {
        if i == p.len() {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let (r, c, e) = (p[i].0 as usize, p[i].1 as usize, p[i].2 as usize);
        for &s in &orders[i] {
            let s = s as usize;
            if row_has[r * n + s] || col_has[c * n + s] || pair_used[e * n + s] {
                continue;
            }
            row_has[r * n + s] = true;
            col_has[c * n + s] = true;
            pair_used[e * n + s] = true;
            q[i] = s as u32;
            if go(i + 1, n, p, orders, q, row_has, col_has, pair_used, budget) {
                return true;
            }
            row_has[r * n + s] = false;
            col_has[c * n + s] = false;
            pair_used[e * n + s] = false;
        }
        false
    }

    if go(
        0,
        n,
        p,
        &orders,
        &mut q,
        &mut row_has,
        &mut col_has,
        &mut pair_used,
        &mut budget,
    ) {
        Some(p.iter().zip(q).map(|(&(r, c, _), s)| (r, c, s)).collect())
    } else {
        None
    }
}

/// Random orthogonal pair of partial latin squares of the given order:
/// a random `P`, then a mate `Q` found by brute-force search.
pub fn random_orthogonal_pair<R: Rng>(
    rng: &mut R,
    order: u32,
    attempts: usize,
) -> (Vec<RawTriple>, Vec<RawTriple>) {
    loop {
        let p = random_partial(rng, order, attempts);
        if let Some(q) = search_mate(rng, order, &p) {
            return (p, q);
        }
    }
}

/// Every orthogonal pair of partial latin squares of order 2 (non-empty),
/// found by enumerating all `3^4` fillings of each square.
pub fn all_orthogonal_pairs_order2() -> Vec<(Vec<RawTriple>, Vec<RawTriple>)> {
    let fillings: Vec<Vec<RawTriple>> = (0..81u32)
        .map(|code| {
            let mut out = Vec::new();
            let mut x = code;
            for cell in 0..4u32 {
                let v = x % 3;
                x /= 3;
                if v > 0 {
                    out.push((cell / 2, cell % 2, v - 1));
                }
            }
            out
        })
        .filter(|t| !t.is_empty() && is_partial_latin(2, t))
        .collect();
    let mut pairs = Vec::new();
    for p in &fillings {
        for q in &fillings {
            if are_orthogonal_partial(p, q) {
                pairs.push((p.clone(), q.clone()));
            }
        }
    }
    pairs
}

/// Random latin square: a random isotope of either the cyclic or the XOR
/// square (the latter only for powers of two).
pub fn random_latin<R: Rng>(rng: &mut R, order: usize) -> Vec<Vec<u32>> {
    let use_xor = order.is_power_of_two() && rng.gen_bool(0.5);
    let base = |r: usize, c: usize| -> u32 {
        if use_xor {
            (r ^ c) as u32
        } else {
            ((r + c) % order) as u32
        }
    };
    let mut rp: Vec<usize> = (0..order).collect();
    let mut cp: Vec<usize> = (0..order).collect();
    let mut sp: Vec<u32> = (0..order as u32).collect();
    rp.shuffle(rng);
    cp.shuffle(rng);
    sp.shuffle(rng);
    (0..order)
        .map(|r| {
            (0..order)
                .map(|c| sp[base(rp[r], cp[c]) as usize])
                .collect()
        })
        .collect()
}

/// A `side x side` array holding each symbol of `[side^2]` exactly once.
pub fn random_symbol_array<R: Rng>(rng: &mut R, side: usize) -> Vec<Vec<u32>> {
    let mut syms: Vec<u32> = (0..(side * side) as u32).collect();
    syms.shuffle(rng);
    syms.chunks(side).map(|c| c.to_vec()).collect()
}
