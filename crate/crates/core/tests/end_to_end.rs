use ols_core::{embed_pair, Embedding, PartialLatinSquare, Triple};
use ols_oracle::{self as oracle, fixtures, RawTriple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn partial(order: usize, raw: &[RawTriple]) -> PartialLatinSquare {
    PartialLatinSquare::new(order, raw.iter().map(|&t| Triple::from(t))).unwrap()
}

fn grids(e: &Embedding) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let (a, b) = e.materialize().unwrap();
    let rows = |sq: &ols_core::LatinSquare| sq.rows().map(<[u32]>::to_vec).collect::<Vec<_>>();
    (rows(&a), rows(&b))
}

fn verify(order: usize, p: &[RawTriple], q: &[RawTriple]) -> usize {
    let e = embed_pair(&partial(order, p), &partial(order, q)).unwrap();
    let (a, b) = grids(&e);
    assert!(oracle::is_latin(&a), "first square not latin for {p:?}");
    assert!(oracle::is_latin(&b), "second square not latin for {q:?}");
    assert!(
        oracle::are_orthogonal(&a, &b),
        "not orthogonal for {p:?} / {q:?}"
    );
    assert!(oracle::contains(&a, p));
    assert!(oracle::contains(&b, q));
    let r = e.report();
    assert!(r.order as u64 <= 16 * (order as u64).pow(4));
    let distinct: std::collections::BTreeSet<u32> = p.iter().map(|t| t.2).collect();
    assert_eq!(r.trades, p.len() - distinct.len());
    e.order()
}

#[test]
fn reference_pair_at_order_256() {
    let (p, q) = fixtures::reference_pair_order4();
    assert_eq!(verify(4, &p, &q), 256);
}

#[test]
fn single_cell_at_order_16() {
    assert_eq!(verify(1, &[(0, 0, 0)], &[(0, 0, 0)]), 16);
}

#[test]
fn random_pairs_up_to_order_4() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..200 {
        let order = 1 + i % 4;
        let (p, q) = oracle::random_orthogonal_pair(&mut rng, order as u32, 2 * order * order);
        verify(order, &p, &q);
    }
}

#[test]
fn one_repeated_symbol_orders_2_and_3() {
    let mut cases = 0;
    for order in 2u32..=3 {
        for r1 in 0..order {
            for r2 in r1 + 1..order {
                for c1 in 0..order {
                    for c2 in (0..order).filter(|&c| c != c1) {
                        for s in 0..order {
                            let p = [(r1, c1, s), (r2, c2, s)];
                            let q = [(r1, c1, 0), (r2, c2, 1)];
                            verify(order as usize, &p, &q);
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    assert_eq!(cases, 4 + 54);
}

#[test]
fn full_latin_square_as_input() {
    // a whole latin square of order 3 paired with an orthogonal mate
    let p: Vec<RawTriple> = (0..3)
        .flat_map(|r| (0..3).map(move |c| (r, c, (r + c) % 3)))
        .collect();
    let q: Vec<RawTriple> = (0..3)
        .flat_map(|r| (0..3).map(move |c| (r, c, (2 * r + c) % 3)))
        .collect();
    assert!(oracle::are_orthogonal_partial(&p, &q));
    assert_eq!(verify(3, &p, &q), 256);
}
