mod common;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symdelta::homology::{reduced_sphere_quotient_homology, smith_diagonal, SphereQuotientOptions};
use symdelta::permgroup::{act_chain, canonical_rep, closure, Permutation, SubsetChain, DEFAULT_GROUP_CAP};
use symdelta::spherequotient::{build, orbit_counts, SubdivisionLevel};
use symdelta::stablegraphs::{check_stable_type, enumerate, in_bm};
use symdelta::{BoundaryMatrix, HomologyGroup, PermGroup};

fn perm_strategy(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn group_strategy(max_degree: usize) -> impl Strategy<Value = PermGroup> {
    (2..=max_degree).prop_flat_map(|m| {
        prop::collection::vec(perm_strategy(m), 1..=2).prop_map(move |gens| closure(&gens, m, DEFAULT_GROUP_CAP).unwrap())
    })
}

/// A chain of nonempty proper subsets of `{0..m-1}`, built by adding points.
fn chain_strategy(m: usize) -> impl Strategy<Value = SubsetChain> {
    (Just((0..m).collect::<Vec<usize>>()).prop_shuffle(), prop::collection::btree_set(1..m, 1..m)).prop_map(
        move |(order, cuts)| {
            let sets = cuts
                .iter()
                .map(|&c| order[..c].iter().fold(0u32, |acc, &x| acc | 1 << x))
                .collect();
            SubsetChain::new(m, sets).unwrap()
        },
    )
}

fn factorial(m: usize) -> usize {
    (1..=m).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_order_divides_factorial(g in group_strategy(7)) {
        prop_assert_eq!(factorial(g.degree()) % g.order(), 0);
    }

    #[test]
    fn canonical_rep_is_an_orbit_invariant(
        (g, chain, h) in group_strategy(6).prop_flat_map(|g| {
            let m = g.degree();
            let n = g.order();
            (Just(g), chain_strategy(m), 0..n)
        })
    ) {
        let rep = canonical_rep(&g, &chain);
        prop_assert_eq!(canonical_rep(&g, &rep), rep.clone());
        let moved = act_chain(&g.elements()[h], &chain);
        prop_assert_eq!(canonical_rep(&g, &moved), rep.clone());
        prop_assert!(rep <= chain);
    }

    #[test]
    fn action_preserves_profile((chain, p) in (3usize..8).prop_flat_map(|m| (chain_strategy(m), perm_strategy(m)))) {
        prop_assert_eq!(act_chain(&p, &chain).profile(), chain.profile());
    }

    #[test]
    fn smith_form_is_permutation_invariant(
        (rows, cols, data, rp, cp) in (1usize..7, 1usize..7).prop_flat_map(|(r, c)| (
            Just(r),
            Just(c),
            prop::collection::vec(prop::collection::vec(-9i64..=9, c), r),
            Just((0..r).collect::<Vec<usize>>()).prop_shuffle(),
            Just((0..c).collect::<Vec<usize>>()).prop_shuffle(),
        ))
    ) {
        let m = BoundaryMatrix::from_dense(&data).unwrap();
        prop_assert_eq!((m.rows(), m.cols()), (rows, cols));
        prop_assert_eq!(smith_diagonal(&m), smith_diagonal(&m.permuted(&rp, &cp)));
        prop_assert_eq!(smith_diagonal(&m), smith_diagonal(&m.transpose()));
    }
}

#[test]
fn smith_form_matches_determinantal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..500 {
        let data = common::random_matrix(&mut rng, 6, 9);
        let m = BoundaryMatrix::from_dense(&data).unwrap();
        assert_eq!(smith_diagonal(&m), common::determinantal_diagonal(&data), "{data:?}");
    }
}

#[test]
fn large_entries_stay_exact() {
    // unimodular, with entries near i64::MAX / 3
    let big = i64::MAX / 3;
    let data = vec![vec![big, big - 1], vec![big - 1, big - 2]];
    let m = BoundaryMatrix::from_dense(&data).unwrap();
    assert_eq!(smith_diagonal(&m), vec![BigUint::from(1u32), BigUint::from(1u32)]);
}

fn euler_consistent(counts: &[usize], h: &[HomologyGroup]) -> bool {
    let chi: i64 = counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
    let reduced: i64 = h
        .iter()
        .enumerate()
        .map(|(k, g)| if k % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) })
        .sum();
    chi - 1 == reduced
}

#[test]
fn built_complexes_are_chain_complexes_with_consistent_euler_characteristic() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..60 {
        let p = rng.gen_range(1..=6);
        let g = common::random_subgroup(&mut rng, p + 1);
        for level in [SubdivisionLevel::Once, SubdivisionLevel::Twice] {
            if level == SubdivisionLevel::Twice && p > 4 {
                continue;
            }
            let cx = build(p, &g, level).unwrap();
            cx.check_boundary_squared().unwrap();
            let h = cx.reduced_homology().unwrap();
            assert!(euler_consistent(&orbit_counts(&cx), &h), "p = {p}, |G| = {}", g.order());
        }
    }
}

#[test]
fn groups_with_a_transposition_give_acyclic_quotients() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let options = SphereQuotientOptions {
        level: SubdivisionLevel::Once,
        shortcut: false,
    };
    for i in 0..100 {
        let p = 1 + i % 6;
        let g = common::random_subgroup_with_transposition(&mut rng, p + 1);
        let h = reduced_sphere_quotient_homology(p, &g, options).unwrap();
        assert!(h.iter().all(HomologyGroup::is_zero), "p = {p}, gens {:?}: {h:?}", g.generators());
    }
}

#[test]
fn subdivision_levels_agree_up_to_dimension_five() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let options = |level| SphereQuotientOptions { level, shortcut: false };
    for i in 0..40 {
        let p = 1 + i % 5;
        let g = common::random_subgroup(&mut rng, p + 1);
        let a = reduced_sphere_quotient_homology(p, &g, options(SubdivisionLevel::Once)).unwrap();
        let b = reduced_sphere_quotient_homology(p, &g, options(SubdivisionLevel::Twice)).unwrap();
        assert_eq!(a, b, "p = {p}, gens {:?}", g.generators());
    }
}

fn stable_types() -> Vec<(u32, u32)> {
    (1..=4)
        .flat_map(|g| (0..=2).map(move |n| (g, n)))
        .filter(|&(g, n)| check_stable_type(g, n).is_ok())
        .collect()
}

#[test]
fn enumeration_is_closed_under_contraction_and_bm_is_a_subcomplex() {
    for (g, n) in stable_types() {
        let all = enumerate(g, n).unwrap();
        let keys: BTreeSet<_> = all.iter().map(|x| x.canonical_key()).collect();
        assert_eq!(keys.len(), all.len(), "duplicates for ({g}, {n})");
        for graph in &all {
            if graph.num_edges() < 2 {
                continue;
            }
            for e in 0..graph.num_edges() {
                let c = graph.contract(e).unwrap();
                assert_eq!(c.genus(), g);
                assert!(keys.contains(&c.canonical_key()), "({g}, {n}): contraction of {} missing", graph.to_json());
                if in_bm(graph) {
                    assert!(in_bm(&c), "({g}, {n}): bm not closed at {} edge {e}", graph.to_json());
                }
            }
        }
    }
}

#[test]
fn canonical_keys_ignore_vertex_numbering() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let all = enumerate(3, 2).unwrap();
    for graph in &all {
        let mut order: Vec<usize> = (0..graph.num_vertices()).collect();
        rand::seq::SliceRandom::shuffle(&mut order[..], &mut rng);
        let shuffled = graph.relabeled(&order);
        assert_eq!(shuffled.canonical_key(), graph.canonical_key());
        assert_eq!(shuffled.edge_group().unwrap().order(), graph.edge_group().unwrap().order());
    }
}

#[test]
fn edge_group_order_divides_edge_factorial() {
    for graph in enumerate(4, 0).unwrap() {
        let order = graph.edge_group().unwrap().order();
        assert_eq!(factorial(graph.num_edges()) % order, 0, "{}", graph.to_json());
    }
}

#[test]
fn low_dimensional_cells_lie_in_bm() {
    for (g, n) in stable_types() {
        for graph in enumerate(g, n).unwrap().iter().filter(|x| x.num_edges() <= 2) {
            assert!(in_bm(graph), "({g}, {n}): {}", graph.to_json());
        }
    }
}
