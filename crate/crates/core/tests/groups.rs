use std::collections::{HashMap, VecDeque};

use condense_core::{validate_table, Ambient, AmbientElement, FiniteGroupTable, TableData, TableDiagnostic};
use proptest::prelude::*;

fn free2() -> Ambient {
    Ambient::free(2).unwrap()
}

/// Breadth-first distances in the Cayley graph, by right multiplication with generators.
fn bfs_distances(h: Ambient, radius: usize) -> HashMap<AmbientElement, usize> {
    let gens: Vec<AmbientElement> = (0..h.generator_count())
        .flat_map(|i| [h.generator(i, false), h.generator(i, true)])
        .collect();
    let mut dist = HashMap::from([(h.identity(), 0)]);
    let mut queue = VecDeque::from([h.identity()]);
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        if d == radius {
            continue;
        }
        for x in &gens {
            let n = &g * x;
            if !dist.contains_key(&n) {
                dist.insert(n.clone(), d + 1);
                queue.push_back(n);
            }
        }
    }
    dist
}

#[test]
fn word_length_is_cayley_distance() {
    for h in [free2(), Ambient::free(3).unwrap(), Ambient::zd(2).unwrap()] {
        let dist = bfs_distances(h, 3);
        let ball = h.ball(3, 1 << 20).unwrap();
        assert_eq!(ball.len(), dist.len());
        for g in ball.iter() {
            assert_eq!(g.word_length(), dist[g], "{h}: {g}");
        }
    }
}

#[test]
fn free_census_formula() {
    let h = free2();
    for n in 0..=4u32 {
        assert_eq!(h.ball(n as usize, 1 << 20).unwrap().len(), 1 + 2 * (3usize.pow(n) - 1));
    }
}

#[test]
fn lattice_census_by_brute_force() {
    for d in 1..=3usize {
        let h = Ambient::zd(d).unwrap();
        for n in 0..=4i64 {
            let mut count = 0;
            let side = (2 * n + 1) as usize;
            for code in 0..side.pow(d as u32) {
                let mut c = code;
                let mut l1 = 0;
                for _ in 0..d {
                    l1 += ((c % side) as i64 - n).abs();
                    c /= side;
                }
                if l1 <= n {
                    count += 1;
                }
            }
            assert_eq!(h.ball(n as usize, 1 << 20).unwrap().len(), count, "zd:{d} n={n}");
        }
    }
}

#[test]
fn balls_are_nested_sorted_and_rooted() {
    for h in [free2(), Ambient::zd(2).unwrap(), Ambient::zd(3).unwrap()] {
        let mut previous: Vec<AmbientElement> = Vec::new();
        for n in 0..=4 {
            let ball = h.ball(n, 1 << 20).unwrap();
            assert!(ball.elements[0].is_identity());
            assert!(ball.elements.windows(2).all(|w| w[0] < w[1]));
            assert!(previous.iter().all(|g| ball.contains(g)));
            previous = ball.elements;
        }
    }
}

#[test]
fn table_axioms_for_all_presets() {
    for name in FiniteGroupTable::PRESETS {
        let t = FiniteGroupTable::preset(name).unwrap();
        validate_table(&t.data()).unwrap();
        for g in 0..t.order() {
            assert_eq!(t.power(g, t.element_order(g) as i64), t.id());
            assert_eq!(t.power(g, 0), t.id());
            // oracle: repeated multiplication and inverse
            let mut acc = t.id();
            for e in 1..=7 {
                acc = t.mul(acc, g);
                assert_eq!(t.power(g, e), acc);
                assert_eq!(t.power(g, -e), t.inv(acc));
            }
        }
    }
}

#[test]
fn s3_power_examples() {
    let t = FiniteGroupTable::preset("s3").unwrap();
    assert_eq!(t.power(t.gen_b(), 2), t.id());
    let ab = t.mul(t.gen_a(), t.gen_b());
    assert_ne!(t.power(ab, 1), t.id());
    assert_eq!(t.power(ab, 3), t.id());
}

#[test]
fn table_diagnostics() {
    let c4 = TableData {
        mul: (0..4).map(|i| (0..4).map(|j| (i + j) % 4).collect()).collect(),
        id: 0,
        a: 1,
        b: 2,
    };
    assert_eq!(validate_table(&c4), Err(TableDiagnostic::Abelian));

    let mut broken = FiniteGroupTable::preset("s3").unwrap().data();
    // swap two entries of a non-identity row
    broken.mul[1].swap(2, 3);
    match validate_table(&broken) {
        Err(TableDiagnostic::NonAssociative { x, y, z }) => {
            let m = &broken.mul;
            assert_ne!(m[m[x][y]][z], m[x][m[y][z]]);
        }
        Err(TableDiagnostic::NoInverse { .. }) => {}
        other => panic!("expected a diagnostic, got {other:?}"),
    }
}

fn element(h: Ambient) -> impl Strategy<Value = AmbientElement> {
    let n = h.generator_count();
    prop::collection::vec((0..n, any::<bool>()), 0..10).prop_map(move |letters| {
        let mut g = h.identity();
        for (i, inv) in letters {
            g.push_generator(i, inv);
        }
        g
    })
}

fn backends() -> impl Strategy<Value = Ambient> {
    prop_oneof![
        Just(Ambient::free(2).unwrap()),
        Just(Ambient::free(3).unwrap()),
        Just(Ambient::zd(1).unwrap()),
        Just(Ambient::zd(3).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn multiplication_is_associative((h, f, g, k) in backends().prop_flat_map(|h| (Just(h), element(h), element(h), element(h)))) {
        prop_assert_eq!(&(&f * &g) * &k, &f * &(&g * &k));
        prop_assert_eq!(h.mul(&f, &h.identity()).unwrap(), f.clone());
    }

    #[test]
    fn inverse_is_an_involution((h, g) in backends().prop_flat_map(|h| (Just(h), element(h)))) {
        prop_assert_eq!(g.inverse().inverse(), g.clone());
        prop_assert!((&g * &g.inverse()).is_identity());
        prop_assert_eq!(h.inv(&g).unwrap(), g.inverse());
    }

    #[test]
    fn text_form_round_trips((h, g) in backends().prop_flat_map(|h| (Just(h), element(h)))) {
        prop_assert_eq!(h.parse_element(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn successor_is_the_next_ball_element((h, g) in backends().prop_flat_map(|h| (Just(h), element(h)))) {
        let next = h.successor(&g);
        prop_assert!(g < next);
        prop_assert!(next.word_length() <= g.word_length() + 1);
    }
}
