//! Independent oracles shared by the integration tests. None of these use the
//! library's own elimination, canonical forms or enumeration.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use symdelta::permgroup::{closure, Permutation, DEFAULT_GROUP_CAP};
use symdelta::stablegraphs::StableGraph;
use symdelta::PermGroup;

/// Determinant by cofactor expansion; fine for the 6×6 matrices used here.
fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .filter(|&j| m[0][j] != 0)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Smith diagonal from determinantal divisors: `d_k` is the gcd of all
/// `k × k` minors and the `k`-th diagonal entry is `d_k / d_{k-1}`.
pub fn determinantal_diagonal(m: &[Vec<i64>]) -> Vec<BigUint> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev: i128 = 1;
    for k in 1..=rows.min(cols) {
        let mut d: i128 = 0;
        for r in subsets(rows, k) {
            for c in subsets(cols, k) {
                let sub: Vec<Vec<i128>> = r.iter().map(|&i| c.iter().map(|&j| m[i][j] as i128).collect()).collect();
                d = d.gcd(&det(&sub));
            }
        }
        if d == 0 {
            out.extend(std::iter::repeat_n(BigUint::from(0u32), rows.min(cols) - k + 1));
            return out;
        }
        out.push(BigUint::from((d / prev) as u128));
        prev = d;
    }
    out
}

pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> Vec<Vec<i64>> {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    // sparse-ish and low-rank matrices exercise more of the elimination
    let density: f64 = rng.gen_range(0.2..=1.0);
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| if rng.gen_bool(density) { rng.gen_range(-bound..=bound) } else { 0 })
                .collect()
        })
        .collect()
}

pub fn random_permutation(rng: &mut ChaCha8Rng, degree: usize) -> Permutation {
    let mut image: Vec<usize> = (0..degree).collect();
    image.shuffle(rng);
    Permutation::from_images(image).unwrap()
}

/// Subgroup generated by one or two random permutations.
pub fn random_subgroup(rng: &mut ChaCha8Rng, degree: usize) -> PermGroup {
    let k = rng.gen_range(1..=2);
    let gens: Vec<Permutation> = (0..k).map(|_| random_permutation(rng, degree)).collect();
    closure(&gens, degree, DEFAULT_GROUP_CAP).unwrap()
}

/// Random subgroup that contains a random transposition.
pub fn random_subgroup_with_transposition(rng: &mut ChaCha8Rng, degree: usize) -> PermGroup {
    let a = rng.gen_range(0..degree);
    let mut b = rng.gen_range(0..degree - 1);
    if b >= a {
        b += 1;
    }
    let mut gens = vec![Permutation::from_cycles(&[vec![a, b]], degree).unwrap()];
    if rng.gen_bool(0.7) {
        gens.push(random_permutation(rng, degree));
    }
    closure(&gens, degree, DEFAULT_GROUP_CAP).unwrap()
}

fn next_perm(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Order of the edge-permutation image of the automorphism group, by trying
/// every vertex bijection.
///
/// Restricted to simple loopless graphs, where a vertex bijection determines
/// the edge permutation; the distinct images form the group.
pub fn brute_force_edge_group_order(graph: &StableGraph) -> usize {
    let v = graph.num_vertices();
    let edges: Vec<(u32, u32)> = graph.edges().to_vec();
    let index: BTreeMap<(u32, u32), usize> = edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| ((a.min(b), a.max(b)), i))
        .collect();
    assert_eq!(index.len(), edges.len(), "oracle needs a simple graph");
    assert!(edges.iter().all(|&(a, b)| a != b), "oracle needs a loopless graph");
    let mut perm: Vec<usize> = (0..v).collect();
    let mut images = std::collections::BTreeSet::new();
    loop {
        let ok_vertices = (0..v).all(|x| graph.weights()[x] == graph.weights()[perm[x]])
            && graph.markings().iter().all(|&m| perm[m as usize] == m as usize);
        if ok_vertices {
            let image: Option<Vec<usize>> = edges
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (perm[a as usize] as u32, perm[b as usize] as u32);
                    index.get(&(x.min(y), x.max(y))).copied()
                })
                .collect();
            if let Some(image) = image {
                images.insert(image);
            }
        }
        if !next_perm(&mut perm) {
            break;
        }
    }
    images.len()
}

/// Genus-2 stable graphs without markings, written out by hand: two with one
/// edge, two with two edges, and the theta and dumbbell graphs with three.
pub fn genus_two_by_hand() -> Vec<StableGraph> {
    let g = |w: Vec<u32>, e: Vec<(u32, u32)>| StableGraph::new(2, w, e, vec![]).unwrap();
    vec![
        // one edge: a loop at a genus-1 vertex; a bridge between two genus-1 vertices
        g(vec![1], vec![(0, 0)]),
        g(vec![1, 1], vec![(0, 1)]),
        // two edges: two loops at one vertex; a genus-1 vertex bridged to a looped vertex
        g(vec![0], vec![(0, 0), (0, 0)]),
        g(vec![1, 0], vec![(0, 1), (1, 1)]),
        // three edges: theta and dumbbell
        g(vec![0, 0], vec![(0, 1), (0, 1), (0, 1)]),
        g(vec![0, 0], vec![(0, 0), (0, 1), (1, 1)]),
    ]
}
