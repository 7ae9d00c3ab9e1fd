//! End-to-end embedding of an orthogonal pair of partial latin squares.
//!
//! For a pair `(P, Q)` of order `n`, with `m = max(1, ceil(log2 n))` and
//! `M = 2m`:
//!
//! 1. columns are dilated, `c -> c * (2^m + 1)`, so that every two occupied
//!    columns of `P` lie in different cosets of the order-`2^m` subgroup;
//! 2. repeated symbols of the dilated `P` are replaced by fresh ones, giving
//!    `P*` with pairwise distinct symbols;
//! 3. `P*` goes into the symbol array `A`, and `Q` is completed to a latin
//!    square of order `2^M` whose columns are then moved to the dilated
//!    positions, giving `B`;
//! 4. the product pair of order `2^{2M}` is built and one trade per replaced
//!    symbol puts the original symbol back in the top-left block;
//! 5. a final column permutation gathers the dilated columns into `[n]`.
//!
//! The result has order `2^{4m} <= 16 n^4` and holds `P` and `Q` in its
//! top-left `n x n` corner.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::completion::embed_pls;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::latin::{orthogonality_partial, LatinSquare, PartialLatinSquare, Permutation, Triple};
use crate::product::{build_symbol_array, ProductPair, SymbolArray};
use crate::trades::{check_conditions, TradeRecord, TradeSpec};

/// Symbol to the cell of its occurrence in the lowest row.
pub type FirstOccurrenceMap = BTreeMap<u32, (u32, u32)>;

/// Smallest `m >= 1` with `n <= 2^m`.
pub fn choose_m(n: usize) -> u32 {
    n.max(2).next_power_of_two().trailing_zeros()
}

/// Order-preserving map on `[total]` that sends the `n` columns
/// `c * step` to `c` and packs the others, in ascending order, behind them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Compaction {
    n: u32,
    step: u32,
    total: u32,
}

impl Compaction {
    pub fn new(n: u32, step: u32, total: u32) -> Result<Self> {
        if step < 2 || n == 0 || u64::from(n - 1) * u64::from(step) >= u64::from(total) {
            return Err(Error::InvalidMap(format!(
                "{n} columns with step {step} do not fit in {total}"
            )));
        }
        Ok(Self { n, step, total })
    }

    /// The compaction for `n` columns dilated at `m`, over `[total]`.
    pub fn dilated(n: usize, m: u32, total: usize) -> Result<Self> {
        Self::new(n as u32, (1 << m) + 1, total as u32)
    }

    pub fn len(&self) -> usize {
        self.total as usize
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    fn is_special(&self, s: u32) -> bool {
        s.is_multiple_of(self.step) && s / self.step < self.n
    }

    /// Source column to target position.
    #[inline]
    pub fn forward(&self, s: u32) -> u32 {
        if self.is_special(s) {
            s / self.step
        } else {
            let before = s.div_ceil(self.step).min(self.n);
            self.n + s - before
        }
    }

    /// Target position to source column.
    pub fn backward(&self, t: u32) -> u32 {
        if t < self.n {
            return t * self.step;
        }
        let k = t - self.n;
        let mut j = 0;
        while j < self.n && j * self.step <= k + j {
            j += 1;
        }
        k + j
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::new((0..self.total).map(|s| self.forward(s)).collect())
            .expect("compaction is a bijection")
    }
}

/// Permutation of `[2^{2M}]` taking column `c * (2^m + 1)` to `c` for
/// `c < n`, the rest in ascending order.
pub fn final_column_permutation(n: usize, m: u32, exponent: u32) -> Result<Permutation> {
    Group::new(exponent)?;
    Ok(Compaction::dilated(n, m, 1 << (2 * exponent))?.to_permutation())
}

/// `(r, c, e) -> (r, c * (2^m + 1), e)`, as a partial square of order `2^{2m}`.
pub fn dilate_columns(p: &PartialLatinSquare, m: u32) -> Result<PartialLatinSquare> {
    if m == 0 || m > 7 || p.order() > 1 << m {
        return Err(Error::OrderMismatch {
            left: p.order(),
            right: 1 << m.min(31),
        });
    }
    let step = (1u32 << m) + 1;
    PartialLatinSquare::with_symbol_bound(
        1 << (2 * m),
        p.symbol_bound(),
        p.triples()
            .iter()
            .map(|t| Triple::new(t.row, t.col * step, t.symbol)),
    )
}

pub fn first_occurrences(p: &PartialLatinSquare) -> FirstOccurrenceMap {
    let mut map = FirstOccurrenceMap::new();
    // triples are sorted by row, so the first hit is the minimum
    for t in p.triples() {
        map.entry(t.symbol).or_insert((t.row, t.col));
    }
    map
}

/// Keeps each first occurrence and gives every other cell the next unused
/// symbol from `n` upward, scanning cells in `(row, col)` order. Returns
/// `P*` with the map from fresh symbols back to the originals.
pub fn make_pstar(
    p: &PartialLatinSquare,
    symbol_bound: usize,
) -> Result<(PartialLatinSquare, BTreeMap<u32, u32>)> {
    let fmap = first_occurrences(p);
    let mut next = p.symbol_bound() as u64;
    let mut back = BTreeMap::new();
    let mut out = Vec::with_capacity(p.volume());
    for t in p.triples() {
        if fmap[&t.symbol] == (t.row, t.col) {
            out.push(*t);
            continue;
        }
        if next >= symbol_bound as u64 {
            return Err(Error::PoolExhausted {
                bound: symbol_bound as u64,
            });
        }
        let fresh = next as u32;
        next += 1;
        back.insert(fresh, t.symbol);
        out.push(Triple::new(t.row, t.col, fresh));
    }
    let pstar = PartialLatinSquare::with_symbol_bound(p.order(), symbol_bound, out)?;
    Ok((pstar, back))
}

/// One trade per non-first occurrence, ordered by `(symbol, row, col)`,
/// after checking C1 to C4 on every same-symbol pair and triple against
/// `b`.
pub fn build_trade_set(
    p0: &PartialLatinSquare,
    fmap: &FirstOccurrenceMap,
    b: &LatinSquare,
) -> Result<Vec<TradeSpec>> {
    let mut by_symbol: BTreeMap<u32, Vec<Triple>> = BTreeMap::new();
    for t in p0.triples() {
        by_symbol.entry(t.symbol).or_default().push(*t);
    }
    let mut specs = Vec::new();
    for (symbol, group) in &by_symbol {
        let k = group.len();
        for i in 0..k {
            for j in i + 1..k {
                check_group(&[group[i], group[j]], b)?;
                for l in j + 1..k {
                    check_group(&[group[i], group[j], group[l]], b)?;
                }
            }
        }
        let (u, w) = fmap[symbol];
        for t in group.iter().filter(|t| (t.row, t.col) != (u, w)) {
            let spec = TradeSpec::from_square(b, u, w, t.row, t.col);
            spec.validate()?;
            specs.push(spec);
        }
    }
    Ok(specs)
}

fn check_group(triples: &[Triple], b: &LatinSquare) -> Result<()> {
    let c = check_conditions(triples, b)?;
    let failed = [("C1", c.c1), ("C2", c.c2), ("C3", c.c3), ("C4", c.c4)]
        .into_iter()
        .find(|(_, ok)| !ok);
    match failed {
        None => Ok(()),
        Some((condition, _)) => {
            let cells: Vec<String> = triples.iter().map(|t| t.to_string()).collect();
            Err(Error::Condition {
                condition,
                detail: cells.join(", "),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub elapsed: Duration,
}

/// Summary of one embedding. Timings are kept out of the serialized form so
/// that reports are reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub n: usize,
    pub volume: usize,
    pub distinct_symbols: usize,
    /// `None` for the construction without dilation.
    pub m: Option<u32>,
    pub exponent: u32,
    pub order: usize,
    pub bound: u64,
    pub within_bound: bool,
    pub trades: usize,
    pub fresh_symbols: usize,
    pub basic: bool,
    #[serde(skip)]
    pub timings: Vec<StageTiming>,
}

impl EmbeddingReport {
    /// `key=value` lines in a fixed order, without timings.
    pub fn to_key_value(&self) -> String {
        let m = self.m.map_or_else(|| "-".to_string(), |m| m.to_string());
        let rows = [
            ("n", self.n.to_string()),
            ("volume", self.volume.to_string()),
            ("distinct_symbols", self.distinct_symbols.to_string()),
            ("m", m),
            ("exponent", self.exponent.to_string()),
            ("order", self.order.to_string()),
            ("bound", self.bound.to_string()),
            ("within_bound", self.within_bound.to_string()),
            ("trades", self.trades.to_string()),
            ("fresh_symbols", self.fresh_symbols.to_string()),
            ("basic", self.basic.to_string()),
        ];
        rows.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

impl fmt::Display for EmbeddingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_key_value())
    }
}

/// The embedding result: the traded product pair seen through the final
/// column permutation. Cells are computed on demand.
#[derive(Debug, Clone)]
pub struct Embedding {
    product: ProductPair,
    columns: Option<Compaction>,
    report: EmbeddingReport,
}

impl Embedding {
    /// Rebuilds an embedding from its parameters, reapplying `trades`.
    pub fn from_parts(
        report: EmbeddingReport,
        a: SymbolArray,
        b: LatinSquare,
        trades: &[TradeSpec],
    ) -> Result<Self> {
        let mut product = ProductPair::new(a, b)?;
        if product.order() != report.order || product.exponent() != report.exponent {
            return Err(Error::OrderMismatch {
                left: report.order,
                right: product.order(),
            });
        }
        for spec in trades {
            product.apply_trade(*spec)?;
        }
        let columns = match report.m {
            Some(m) => Some(Compaction::dilated(report.n, m, report.order)?),
            None => None,
        };
        Ok(Self {
            product,
            columns,
            report,
        })
    }

    pub fn order(&self) -> usize {
        self.product.order()
    }

    pub fn n(&self) -> usize {
        self.report.n
    }

    pub fn report(&self) -> &EmbeddingReport {
        &self.report
    }

    pub fn product(&self) -> &ProductPair {
        &self.product
    }

    pub fn trades(&self) -> &[TradeSpec] {
        self.product.overlay().specs()
    }

    #[inline]
    fn source(&self, col: u32) -> u32 {
        self.columns.map_or(col, |c| c.backward(col))
    }

    #[inline]
    fn target(&self, col: u32) -> u32 {
        self.columns.map_or(col, |c| c.forward(col))
    }

    pub fn column_permutation(&self) -> Permutation {
        match self.columns {
            Some(c) => c.to_permutation(),
            None => Permutation::identity(self.order()),
        }
    }

    pub fn a_at(&self, row: u32, col: u32) -> u32 {
        self.product.a_at(row, self.source(col))
    }

    pub fn b_at(&self, row: u32, col: u32) -> u32 {
        self.product.b_at(row, self.source(col))
    }

    /// Dense row of the first (`first == true`) or second square.
    pub fn fill_row(&self, row: u32, first: bool, out: &mut Vec<u32>) {
        let mut src = Vec::with_capacity(self.order());
        self.product.fill_row(row, first, &mut src);
        match self.columns {
            None => {
                out.clear();
                out.extend_from_slice(&src);
            }
            Some(c) => {
                out.clear();
                out.resize(src.len(), 0);
                for (s, v) in src.into_iter().enumerate() {
                    out[c.forward(s as u32) as usize] = v;
                }
            }
        }
    }

    /// Trade records in output coordinates, cells sorted by `(row, col)`.
    pub fn trade_records(&self) -> Vec<TradeRecord> {
        self.product
            .overlay()
            .records()
            .into_iter()
            .map(|mut rec| {
                for cell in &mut rec.cells {
                    cell.col = self.target(cell.col);
                }
                rec.cells.sort_unstable_by_key(|c| (c.row, c.col));
                rec
            })
            .collect()
    }

    pub fn materialize(&self) -> Result<(LatinSquare, LatinSquare)> {
        let (a, b) = self.product.materialize()?;
        let Some(c) = self.columns else {
            return Ok((a, b));
        };
        let t = self.order();
        let permute = |sq: &LatinSquare| {
            let mut cells = vec![0u32; t * t];
            for (r, row) in sq.rows().enumerate() {
                for (s, &v) in row.iter().enumerate() {
                    cells[r * t + c.forward(s as u32) as usize] = v;
                }
            }
            LatinSquare::new_unchecked(t, cells)
        };
        Ok((permute(&a), permute(&b)))
    }

    /// Whether `p` and `q` sit in the top-left corner of the first and second
    /// square; the first failing cell otherwise.
    pub fn check_containment(
        &self,
        p: &PartialLatinSquare,
        q: &PartialLatinSquare,
    ) -> std::result::Result<(), (char, Triple)> {
        for t in p.triples() {
            if self.a_at(t.row, t.col) != t.symbol {
                return Err(('P', *t));
            }
        }
        for t in q.triples() {
            if self.b_at(t.row, t.col) != t.symbol {
                return Err(('Q', *t));
            }
        }
        Ok(())
    }
}

fn check_input(p: &PartialLatinSquare, q: &PartialLatinSquare) -> Result<()> {
    if p.order() != q.order() {
        return Err(Error::OrderMismatch {
            left: p.order(),
            right: q.order(),
        });
    }
    let report = orthogonality_partial(p, q)?;
    if !report.is_ok() {
        return Err(Error::NotOrthogonal(report));
    }
    Ok(())
}

fn bound(n: usize) -> u64 {
    16 * (n as u64).pow(4)
}

fn distinct_symbols(p: &PartialLatinSquare) -> usize {
    first_occurrences(p).len()
}

struct Clock {
    last: Instant,
    timings: Vec<StageTiming>,
}

impl Clock {
    fn new() -> Self {
        Self {
            last: Instant::now(),
            timings: Vec::new(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.timings.push(StageTiming {
            stage: stage.to_string(),
            elapsed: now - self.last,
        });
        self.last = now;
    }
}

fn invariant(stage: &'static str) -> impl FnOnce(Error) -> Error {
    move |e| match e {
        Error::Invariant { .. } => e,
        other => Error::Invariant {
            stage,
            detail: other.to_string(),
        },
    }
}

/// Embeds the orthogonal pair `(p, q)` in a pair of orthogonal latin squares
/// of order `2^{4m}`.
pub fn embed_pair(p: &PartialLatinSquare, q: &PartialLatinSquare) -> Result<Embedding> {
    check_input(p, q)?;
    let mut clock = Clock::new();
    let n = p.order();
    let m = choose_m(n);
    let exponent = 2 * m;
    Group::new(exponent)?;
    let side = 1usize << exponent;
    let order = side * side;

    let p0 = dilate_columns(p, m).map_err(invariant("dilate"))?;
    let fmap = first_occurrences(&p0);
    clock.lap("dilate");

    let (pstar, _) = make_pstar(&p0, order).map_err(invariant("fresh symbols"))?;
    let a = build_symbol_array(&pstar, exponent).map_err(invariant("symbol array"))?;
    clock.lap("symbol array");

    let completed = embed_pls(q, side).map_err(invariant("complete Q"))?;
    let sigma = Compaction::dilated(n, m, side).map_err(invariant("complete Q"))?;
    let cells: Vec<u32> = (0..side as u32)
        .flat_map(|r| {
            let completed = &completed;
            (0..side as u32).map(move |s| completed.get(r, sigma.forward(s)))
        })
        .collect();
    let b = LatinSquare::new(side, cells).map_err(invariant("complete Q"))?;
    clock.lap("complete Q");

    let specs = build_trade_set(&p0, &fmap, &b).map_err(invariant("trade set"))?;
    clock.lap("trade set");

    let volume = p.volume();
    let distinct = distinct_symbols(p);
    if specs.len() != volume - distinct {
        return Err(Error::Invariant {
            stage: "trade set",
            detail: format!(
                "{} trades for {} repeated cells",
                specs.len(),
                volume - distinct
            ),
        });
    }
    let report = EmbeddingReport {
        n,
        volume,
        distinct_symbols: distinct,
        m: Some(m),
        exponent,
        order,
        bound: bound(n),
        within_bound: order as u64 <= bound(n),
        trades: specs.len(),
        fresh_symbols: volume - distinct,
        basic: false,
        timings: Vec::new(),
    };
    if !report.within_bound {
        return Err(Error::Invariant {
            stage: "report",
            detail: format!("order {order} exceeds {}", report.bound),
        });
    }
    let mut embedding =
        Embedding::from_parts(report, a, b, &specs).map_err(invariant("apply trades"))?;
    clock.lap("apply trades");

    embedding
        .check_containment(p, q)
        .map_err(|(which, t)| Error::Invariant {
            stage: "containment",
            detail: format!("{which} cell {t} not reproduced"),
        })?;
    clock.lap("containment");
    embedding.report.timings = clock.timings;
    Ok(embedding)
}

/// The product construction alone, for `p` without repeated symbols: `p`
/// becomes the corner of `A`, `q` is completed to `B`, no dilation and no
/// trades. `exponent` defaults to the least `M` with `2n <= 2^M`.
pub fn embed_pair_basic(
    p: &PartialLatinSquare,
    q: &PartialLatinSquare,
    exponent: Option<u32>,
) -> Result<Embedding> {
    check_input(p, q)?;
    let mut clock = Clock::new();
    let n = p.order();
    let mut seen = std::collections::BTreeSet::new();
    if let Some(t) = p.triples().iter().find(|t| !seen.insert(t.symbol)) {
        return Err(Error::RepeatedSymbol { symbol: t.symbol });
    }
    let exponent = exponent.unwrap_or_else(|| (2 * n).next_power_of_two().trailing_zeros());
    Group::new(exponent)?;
    let side = 1usize << exponent;
    let a = build_symbol_array(p, exponent)?;
    let b = embed_pls(q, side)?;
    clock.lap("build");
    let order = side * side;
    let report = EmbeddingReport {
        n,
        volume: p.volume(),
        distinct_symbols: p.volume(),
        m: None,
        exponent,
        order,
        bound: bound(n),
        within_bound: order as u64 <= bound(n),
        trades: 0,
        fresh_symbols: 0,
        basic: true,
        timings: Vec::new(),
    };
    let mut embedding = Embedding::from_parts(report, a, b, &[])?;
    embedding
        .check_containment(p, q)
        .map_err(|(which, t)| Error::Invariant {
            stage: "containment",
            detail: format!("{which} cell {t} not reproduced"),
        })?;
    clock.lap("containment");
    embedding.report.timings = clock.timings;
    Ok(embedding)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latin::{are_orthogonal_latin, contains_identity};
    use crate::trades::specs_disjoint;
    use ols_oracle::fixtures::reference_pair_order4;

    fn partial(order: usize, raw: &[(u32, u32, u32)]) -> PartialLatinSquare {
        PartialLatinSquare::new(order, raw.iter().map(|&t| Triple::from(t))).unwrap()
    }

    fn reference() -> (PartialLatinSquare, PartialLatinSquare) {
        let (p, q) = reference_pair_order4();
        (partial(4, &p), partial(4, &q))
    }

    #[test]
    fn choose_m_values() {
        let got: Vec<u32> = (1..=9).map(choose_m).collect();
        assert_eq!(got, vec![1, 1, 2, 2, 3, 3, 3, 3, 4]);
    }

    #[test]
    fn compaction_matches_definition() {
        for (n, m) in [(1usize, 1u32), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3)] {
            for total in [1usize << (2 * m), 1 << (4 * m)] {
                let c = Compaction::dilated(n, m, total).unwrap();
                let step = (1u32 << m) + 1;
                let special: Vec<u32> = (0..n as u32).map(|i| i * step).collect();
                let rest: Vec<u32> = (0..total as u32).filter(|s| !special.contains(s)).collect();
                let mut want = vec![0u32; total];
                for (i, &s) in special.iter().chain(&rest).enumerate() {
                    want[s as usize] = i as u32;
                }
                let got: Vec<u32> = (0..total as u32).map(|s| c.forward(s)).collect();
                assert_eq!(got, want, "n={n} m={m} total={total}");
                for t in 0..total as u32 {
                    assert_eq!(c.forward(c.backward(t)), t);
                }
            }
        }
        let perm = final_column_permutation(4, 2, 4).unwrap();
        let sources: Vec<u32> = [0, 5, 10, 15].iter().map(|&s| perm.apply(s)).collect();
        assert_eq!(sources, vec![0, 1, 2, 3]);
        assert_eq!(final_column_permutation(1, 1, 2).unwrap().apply(0), 0);
    }

    #[test]
    fn dilation_examples() {
        let p = partial(4, &[(1, 3, 3), (0, 0, 0)]);
        let d = dilate_columns(&p, 2).unwrap();
        assert_eq!(d.order(), 16);
        assert_eq!(d.triples(), &[Triple::new(0, 0, 0), Triple::new(1, 15, 3)]);
        assert!(dilate_columns(&p, 1).is_err());
    }

    #[test]
    fn reference_first_occurrences_and_pstar() {
        let (p, _) = reference();
        let fmap = first_occurrences(&p);
        let want: FirstOccurrenceMap = [(0, (0, 0)), (1, (0, 1)), (2, (0, 2)), (3, (1, 3))]
            .into_iter()
            .collect();
        assert_eq!(fmap, want);

        let (pstar, back) = make_pstar(&p, 256).unwrap();
        let fresh: Vec<(u32, u32, u32)> = pstar
            .triples()
            .iter()
            .filter(|t| t.symbol >= 4)
            .map(|t| (t.row, t.col, t.symbol))
            .collect();
        assert_eq!(
            fresh,
            vec![
                (1, 0, 4),
                (1, 1, 5),
                (1, 2, 6),
                (2, 0, 7),
                (2, 2, 8),
                (3, 1, 9),
                (3, 3, 10)
            ]
        );
        assert_eq!(pstar.symbols().len(), pstar.volume());
        assert_eq!(back[&4], 2);
        assert_eq!(back[&10], 1);

        let d = dilate_columns(&p, 2).unwrap();
        let dmap = first_occurrences(&d);
        assert_eq!(dmap[&3], (1, 15));
    }

    #[test]
    fn distinct_symbols_keep_pstar() {
        let p = partial(3, &[(0, 0, 0), (1, 2, 1), (2, 1, 2)]);
        let (pstar, back) = make_pstar(&p, 81).unwrap();
        assert_eq!(pstar.triples(), p.triples());
        assert!(back.is_empty());
        assert!(matches!(
            make_pstar(&partial(2, &[(0, 0, 0), (1, 1, 0)]), 2),
            Err(Error::PoolExhausted { .. })
        ));
    }

    #[test]
    fn reference_trade_set() {
        let (p, q) = reference();
        let e = embed_pair(&p, &q).unwrap();
        let specs = e.trades();
        assert_eq!(specs.len(), 7);
        // repeated occurrences in original coordinates, ordered by symbol
        let step = 5;
        let seconds: Vec<(u32, u32)> = specs.iter().map(|s| (s.r2, s.c2 / step)).collect();
        assert_eq!(
            seconds,
            vec![(1, 1), (2, 2), (1, 2), (3, 3), (1, 0), (3, 1), (2, 0)]
        );
        for (i, s1) in specs.iter().enumerate() {
            for s2 in &specs[i + 1..] {
                assert!(specs_disjoint(s1, s2, 4));
            }
        }
    }

    #[test]
    fn reference_conditions_after_dilation() {
        let (p, q) = reference();
        let e = embed_pair(&p, &q).unwrap();
        let b = e.product().quasigroup();
        let d = dilate_columns(&p, 2).unwrap();
        let mut groups: BTreeMap<u32, Vec<Triple>> = BTreeMap::new();
        for t in d.triples() {
            groups.entry(t.symbol).or_default().push(*t);
        }
        let mut checked = 0;
        for g in groups.values() {
            for i in 0..g.len() {
                for j in i + 1..g.len() {
                    assert!(check_conditions(&[g[i], g[j]], b).unwrap().all());
                    checked += 1;
                    for k in j + 1..g.len() {
                        assert!(check_conditions(&[g[i], g[j], g[k]], b).unwrap().all());
                        checked += 1;
                    }
                }
            }
        }
        assert_eq!(checked, 4 + 4 + 4 + 1);
    }

    #[test]
    fn reference_embedding_order_256() {
        let (p, q) = reference();
        let e = embed_pair(&p, &q).unwrap();
        let r = e.report();
        assert_eq!((r.n, r.volume, r.m, r.exponent), (4, 11, Some(2), 4));
        assert_eq!(
            (r.order, r.bound, r.trades, r.fresh_symbols),
            (256, 4096, 7, 7)
        );
        let (a, b) = e.materialize().unwrap();
        assert!(are_orthogonal_latin(&a, &b).unwrap());
        assert!(contains_identity(&p, &a));
        assert!(contains_identity(&q, &b));
        for (row, col) in [(0, 0), (3, 3), (17, 200), (255, 1)] {
            assert_eq!(a.get(row, col), e.a_at(row, col));
            assert_eq!(b.get(row, col), e.b_at(row, col));
        }
        let records = e.trade_records();
        assert_eq!(records.len(), 7);
        for rec in &records {
            assert_eq!(rec.cells.len(), 8);
            for c in &rec.cells {
                assert_eq!(a.get(c.row, c.col), c.new);
            }
        }
    }

    #[test]
    fn single_cell_order_16() {
        let p = partial(1, &[(0, 0, 0)]);
        let e = embed_pair(&p, &p).unwrap();
        assert_eq!(e.order(), 16);
        assert_eq!(e.report().bound, 16);
        let (a, b) = e.materialize().unwrap();
        assert!(are_orthogonal_latin(&a, &b).unwrap());
        assert_eq!((a.get(0, 0), b.get(0, 0)), (0, 0));
    }

    #[test]
    fn distinct_symbols_zero_trades() {
        let p = partial(2, &[(0, 0, 0), (1, 1, 1)]);
        let q = partial(2, &[(0, 0, 0), (1, 1, 0)]);
        let e = embed_pair(&p, &q).unwrap();
        assert_eq!(e.report().trades, 0);
        assert!(e.product().overlay().is_empty());
    }

    #[test]
    fn basic_construction() {
        let p = partial(1, &[(0, 0, 0)]);
        let e = embed_pair_basic(&p, &p, Some(1)).unwrap();
        assert_eq!(e.order(), 4);
        let (a, b) = e.materialize().unwrap();
        assert!(are_orthogonal_latin(&a, &b).unwrap());

        let (rp, rq) = reference();
        let keep: Vec<Triple> = rp
            .triples()
            .iter()
            .filter(|t| t.row == 0 || (t.row, t.col) == (1, 3))
            .copied()
            .collect();
        let qk: Vec<Triple> = keep
            .iter()
            .map(|t| Triple::new(t.row, t.col, rq.get(t.row, t.col).unwrap()))
            .collect();
        let p = PartialLatinSquare::new(4, keep).unwrap();
        let q = PartialLatinSquare::new(4, qk).unwrap();
        let e = embed_pair_basic(&p, &q, Some(3)).unwrap();
        assert_eq!(e.order(), 64);
        let (a, b) = e.materialize().unwrap();
        assert!(are_orthogonal_latin(&a, &b).unwrap());
        assert!(contains_identity(&p, &a));
        assert!(contains_identity(&q, &b));
        let sa = e.product().symbol_array();
        for r in 0..8 {
            for c in 0..8 {
                assert_eq!(a.get(r, c), sa.get(r, c));
            }
        }

        assert!(matches!(
            embed_pair_basic(&rp, &rq, None),
            Err(Error::RepeatedSymbol { .. })
        ));
    }

    #[test]
    fn rejects_non_orthogonal() {
        let (p, _) = reference();
        assert!(matches!(embed_pair(&p, &p), Err(Error::NotOrthogonal(_))));
    }

    #[test]
    fn deterministic_report() {
        let (p, q) = reference();
        let r1 = embed_pair(&p, &q).unwrap().report().to_key_value();
        let r2 = embed_pair(&p, &q).unwrap().report().to_key_value();
        assert_eq!(r1, r2);
        assert!(r1.contains("order=256\n"));
    }
}
