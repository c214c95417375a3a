//! Exhaustive generation of stable graphs up to isomorphism.
//!
//! For each vertex count we pick vertex colors (weight, set of marks) in
//! nondecreasing order, then a degree sequence that is nonincreasing inside
//! each color class, then every symmetric multiplicity matrix realizing it.
//! Survivors are checked for connectivity and stability and deduplicated by
//! canonical key. The ordering constraints only remove relabelings, never
//! isomorphism classes.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{check_stable_type, StableGraph};
use crate::error::Result;

/// Every stable graph of type `(g, n)` with at least one edge, one per
/// isomorphism class, in canonical form. Sorted by (edges, vertices, key).
pub fn enumerate(g: u32, n: u32) -> Result<Vec<StableGraph>> {
    enumerate_with_max_edges(g, n, usize::MAX)
}

/// [`enumerate`] restricted to graphs with at most `max_edges` edges.
pub fn enumerate_with_max_edges(g: u32, n: u32, max_edges: usize) -> Result<Vec<StableGraph>> {
    check_stable_type(g, n)?;
    let top = (3 * g as i64 - 3 + n as i64) as usize;
    let max_edges = max_edges.min(top);
    let max_vertices = (2 * g as i64 - 2 + n as i64) as usize;

    let mut colorings = Vec::new();
    for v in 1..=max_vertices {
        for weights in weight_vectors(v, g) {
            let edges = g as i64 - weights.iter().sum::<u32>() as i64 + v as i64 - 1;
            if edges < 1 || edges as usize > max_edges {
                continue;
            }
            for marks in mark_assignments(v, n) {
                let colors: Vec<(u32, u32)> = (0..v).map(|x| (weights[x], marks[x])).collect();
                if colors.windows(2).all(|w| w[0] <= w[1]) {
                    colorings.push((colors, edges as usize));
                }
            }
        }
    }

    let found: Vec<BTreeMap<Vec<u32>, StableGraph>> = colorings
        .par_iter()
        .map(|(colors, edges)| {
            let mut out = BTreeMap::new();
            for_each_graph(g, n, colors, *edges, |graph| {
                let (order, key) = graph.canonical_form();
                out.entry(key).or_insert_with(|| graph.relabeled(&order));
            });
            out
        })
        .collect();
    let mut all: BTreeMap<Vec<u32>, StableGraph> = BTreeMap::new();
    for part in found {
        for (k, graph) in part {
            all.entry(k).or_insert(graph);
        }
    }
    let mut list: Vec<(Vec<u32>, StableGraph)> = all.into_iter().collect();
    list.sort_by(|(ka, a), (kb, b)| {
        (a.num_edges(), a.num_vertices(), ka).cmp(&(b.num_edges(), b.num_vertices(), kb))
    });
    log::debug!("enumerated {} stable graphs of type ({g}, {n})", list.len());
    Ok(list.into_iter().map(|(_, graph)| graph).collect())
}

/// Nondecreasing weight vectors of length `v` with sum at most `g`.
fn weight_vectors(v: usize, g: u32) -> Vec<Vec<u32>> {
    fn rec(v: usize, min: u32, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == v {
            out.push(cur.clone());
            return;
        }
        let mut w = min;
        while w * (v - cur.len()) as u32 <= budget {
            cur.push(w);
            rec(v, w, budget - w, cur, out);
            cur.pop();
            w += 1;
        }
    }
    let mut out = Vec::new();
    rec(v, 0, g, &mut Vec::new(), &mut out);
    out
}

/// Every map from marks to vertices, as per-vertex bit masks of marks.
fn mark_assignments(v: usize, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total = (v as u64).pow(n);
    for code in 0..total {
        let mut masks = vec![0u32; v];
        let mut c = code;
        for mark in 0..n {
            masks[(c % v as u64) as usize] |= 1 << mark;
            c /= v as u64;
        }
        out.push(masks);
    }
    out
}

/// Calls `f` on each labeled graph with the given vertex colors and edge count
/// whose degree sequence is nonincreasing within color classes.
fn for_each_graph(g: u32, n: u32, colors: &[(u32, u32)], edges: usize, mut f: impl FnMut(&StableGraph)) {
    let v = colors.len();
    let min_degree: Vec<u32> = colors
        .iter()
        .map(|&(w, mask)| {
            let need = if w == 0 { 3u32.saturating_sub(mask.count_ones()) } else { 0 };
            need.max(u32::from(v > 1))
        })
        .collect();
    let mut degrees = vec![0u32; v];
    degree_sequences(colors, &min_degree, 0, 2 * edges as u32, &mut degrees, &mut |deg| {
        let mut mult = vec![0u32; v * v];
        let mut residual = deg.to_vec();
        fill(v, 0, 0, &mut residual, &mut mult, &mut |mult| {
            let mut list = Vec::with_capacity(edges);
            for a in 0..v {
                for b in a..v {
                    for _ in 0..mult[a * v + b] {
                        list.push((a as u32, b as u32));
                    }
                }
            }
            let weights = colors.iter().map(|c| c.0).collect();
            let mut markings = vec![0u32; n as usize];
            for (x, &(_, mask)) in colors.iter().enumerate() {
                for (mark, slot) in markings.iter_mut().enumerate() {
                    if mask >> mark & 1 == 1 {
                        *slot = x as u32;
                    }
                }
            }
            // `new` rejects the disconnected ones; the rest are valid by construction
            if let Ok(graph) = StableGraph::new(g, weights, list, markings) {
                f(&graph);
            }
        });
    });
}

fn degree_sequences(
    colors: &[(u32, u32)],
    min_degree: &[u32],
    i: usize,
    remaining: u32,
    cur: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32]),
) {
    let v = colors.len();
    if i == v {
        if remaining == 0 {
            f(cur);
        }
        return;
    }
    let reserve: u32 = min_degree[i + 1..].iter().sum();
    if reserve > remaining {
        return;
    }
    let mut hi = remaining - reserve;
    if i > 0 && colors[i - 1] == colors[i] {
        hi = hi.min(cur[i - 1]);
    }
    if i + 1 == v {
        if remaining >= min_degree[i] && remaining <= hi {
            cur[i] = remaining;
            degree_sequences(colors, min_degree, i + 1, 0, cur, f);
        }
        return;
    }
    for d in min_degree[i]..=hi {
        cur[i] = d;
        degree_sequences(colors, min_degree, i + 1, remaining - d, cur, f);
    }
}

/// Fills the upper triangle of `mult` cell by cell (loops first in each row),
/// so that each vertex meets its residual degree exactly.
fn fill(v: usize, a: usize, b: usize, residual: &mut [u32], mult: &mut [u32], f: &mut impl FnMut(&[u32])) {
    if a == v {
        f(mult);
        return;
    }
    if b == v {
        if residual[a] == 0 {
            fill(v, a + 1, a + 1, residual, mult, f);
        }
        return;
    }
    if b == a {
        // the rest of row `a` can absorb at most the residual of later vertices
        let later: u32 = residual[a + 1..].iter().sum();
        let mut loops = 0;
        while 2 * loops <= residual[a] {
            if residual[a] - 2 * loops <= later {
                mult[a * v + a] = loops;
                residual[a] -= 2 * loops;
                fill(v, a, a + 1, residual, mult, f);
                residual[a] += 2 * loops;
            }
            loops += 1;
        }
        mult[a * v + a] = 0;
        return;
    }
    let later: u32 = residual[b + 1..].iter().sum();
    let max = residual[a].min(residual[b]);
    for k in 0..=max {
        if residual[a] - k > later {
            continue;
        }
        mult[a * v + b] = k;
        residual[a] -= k;
        residual[b] -= k;
        fill(v, a, b + 1, residual, mult, f);
        residual[a] += k;
        residual[b] += k;
    }
    mult[a * v + b] = 0;
}
