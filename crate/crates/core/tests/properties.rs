use ols_core::completion::embed_pls;
use ols_core::latin::{apply_isotopy, check_latin, contains_identity};
use ols_core::pipeline::{make_pstar, Compaction};
use ols_core::{Group, LatinSquare, PartialLatinSquare, Permutation, Triple};
use proptest::prelude::*;

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn partial_square(max_order: usize) -> impl Strategy<Value = PartialLatinSquare> {
    (1..=max_order).prop_flat_map(|n| {
        prop::collection::vec((0..n as u32, 0..n as u32, 0..n as u32), 1..=2 * n * n).prop_map(
            move |raw| {
                let mut kept: Vec<Triple> = Vec::new();
                for (r, c, e) in raw {
                    let clash = kept.iter().any(|t| {
                        (t.row == r && t.col == c)
                            || (t.row == r && t.symbol == e)
                            || (t.col == c && t.symbol == e)
                    });
                    if !clash {
                        kept.push(Triple::new(r, c, e));
                    }
                }
                PartialLatinSquare::new(n, kept).unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn isotopy_preserves_latinness(
        (rows, cols, syms) in (permutation(8), permutation(8), permutation(8)),
        exponent in 0u32..=3,
    ) {
        let l = LatinSquare::xor(exponent);
        let n = l.order();
        let pick = |p: &Permutation| {
            Permutation::new(p.as_slice().iter().copied().filter(|&x| (x as usize) < n).collect())
                .unwrap()
        };
        let img = apply_isotopy(&l, &pick(&rows), &pick(&cols), &pick(&syms)).unwrap();
        prop_assert!(check_latin(n, img.cells()).is_ok());
    }

    #[test]
    fn pair_encoding_round_trips(exponent in 1u32..=7, p in any::<u32>(), r in any::<u32>()) {
        let g = Group::new(exponent).unwrap();
        let (p, r) = (p % g.order(), r % g.order());
        let x = g.encode_pair(p, r).unwrap();
        let back = g.decode_pair(x).unwrap();
        prop_assert_eq!((back.hi.value(), back.lo.value()), (p, r));
    }

    #[test]
    fn compaction_is_a_bijection(m in 1u32..=3, n_frac in 0.0f64..1.0) {
        let n = 1 + (n_frac * ((1u32 << m) as f64)) as usize;
        let n = n.min(1 << m);
        let total = 1usize << (2 * m);
        let c = Compaction::dilated(n, m, total).unwrap();
        let mut seen = vec![false; total];
        for s in 0..total as u32 {
            let t = c.forward(s) as usize;
            prop_assert!(!seen[t]);
            seen[t] = true;
            prop_assert_eq!(c.backward(t as u32), s);
        }
        for i in 0..n as u32 {
            prop_assert_eq!(c.forward(i * ((1 << m) + 1)), i);
        }
    }

    #[test]
    fn pstar_has_distinct_symbols_on_same_cells(p in partial_square(5)) {
        let bound = p.order().pow(4).max(16);
        let (pstar, back) = make_pstar(&p, bound).unwrap();
        prop_assert_eq!(pstar.volume(), p.volume());
        prop_assert_eq!(pstar.symbols().len(), pstar.volume());
        for (t, s) in p.triples().iter().zip(pstar.triples()) {
            prop_assert_eq!((t.row, t.col), (s.row, s.col));
            let original = back.get(&s.symbol).copied().unwrap_or(s.symbol);
            prop_assert_eq!(original, t.symbol);
        }
    }

    #[test]
    fn completion_contains_input(p in partial_square(6), extra in 0usize..3) {
        let t = 2 * p.order() + extra;
        let l = embed_pls(&p, t).unwrap();
        prop_assert!(check_latin(t, l.cells()).is_ok());
        prop_assert!(contains_identity(&p, &l));
    }
}
