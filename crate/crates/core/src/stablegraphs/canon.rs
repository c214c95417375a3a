//! Canonical forms and automorphisms of stable graphs.
//!
//! Vertices are first split by (weight, markings, loops, degree) and refined
//! to an equitable partition. The canonical form is the minimum encoding over
//! the leaves of a plain individualization-refinement tree; automorphisms are
//! found by trying every ordering within the refined cells.

use std::collections::BTreeMap;

use super::StableGraph;
use crate::error::Result;
use crate::permgroup::{closure, PermGroup, Permutation};

/// Encoding of a graph under its canonical vertex order. Equal keys mean
/// isomorphic graphs (for fixed genus and marking count).
pub type CanonicalKey = Vec<u32>;

pub(crate) struct Adjacency {
    pub(crate) v: usize,
    /// `mult[a * v + b]`: edges between `a` and `b` (loops on the diagonal).
    pub(crate) mult: Vec<u32>,
    pub(crate) label: Vec<(u32, u32)>,
}

impl Adjacency {
    pub(crate) fn of(graph: &StableGraph) -> Self {
        let v = graph.num_vertices();
        let mut mult = vec![0u32; v * v];
        for &(a, b) in graph.edges() {
            let (a, b) = (a as usize, b as usize);
            mult[a * v + b] += 1;
            if a != b {
                mult[b * v + a] += 1;
            }
        }
        let label = (0..v).map(|x| (graph.weights()[x], graph.marks_mask(x))).collect();
        Self { v, mult, label }
    }

    #[inline]
    pub(crate) fn m(&self, a: usize, b: usize) -> u32 {
        self.mult[a * self.v + b]
    }

    fn degree(&self, a: usize) -> u32 {
        (0..self.v).map(|b| if a == b { 2 * self.m(a, a) } else { self.m(a, b) }).sum()
    }

    fn initial_partition(&self) -> Vec<Vec<usize>> {
        let initial: Vec<(u32, u32, u32, u32)> = (0..self.v)
            .map(|a| (self.label[a].0, self.label[a].1, self.m(a, a), self.degree(a)))
            .collect();
        let class = compress(&initial);
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (a, &c) in class.iter().enumerate() {
            cells.entry(c).or_default().push(a);
        }
        cells.into_values().collect()
    }

    /// Splits cells by neighbour counts into every cell until the partition is
    /// equitable. Sub-cells are ordered by signature, so the result depends
    /// only on the isomorphism class of (graph, ordered partition).
    fn refine(&self, cells: &mut Vec<Vec<usize>>) {
        let mut cell_of = vec![0usize; self.v];
        loop {
            for (i, c) in cells.iter().enumerate() {
                for &a in c {
                    cell_of[a] = i;
                }
            }
            let mut changed = false;
            let mut next = Vec::with_capacity(self.v);
            for c in cells.iter() {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<(usize, u32)>, usize)> = c
                    .iter()
                    .map(|&a| {
                        let mut sig: Vec<(usize, u32)> = (0..self.v)
                            .filter(|&b| b != a && self.m(a, b) > 0)
                            .map(|b| (cell_of[b], self.m(a, b)))
                            .collect();
                        sig.sort_unstable();
                        (sig, a)
                    })
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|x| x.1).collect());
                        start = i;
                    }
                }
                changed |= next.last().is_some_and(|l| l.len() != c.len());
            }
            *cells = next;
            if !changed {
                return;
            }
        }
    }

    /// Equitable refinement of the invariant starting partition.
    fn cells(&self) -> Vec<Vec<usize>> {
        let mut cells = self.initial_partition();
        self.refine(&mut cells);
        cells
    }

    /// Minimum encoding over the leaves of the individualization-refinement
    /// search tree.
    fn search(&self, cells: Vec<Vec<usize>>, buf: &mut Vec<u32>, best: &mut Option<(Vec<usize>, Vec<u32>)>) {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            self.encode(&order, buf);
            if best.as_ref().is_none_or(|(_, k)| *buf < *k) {
                *best = Some((order, buf.clone()));
            }
            return;
        };
        for &a in &cells[target] {
            let mut next = cells[..target].to_vec();
            next.push(vec![a]);
            next.push(cells[target].iter().copied().filter(|&b| b != a).collect());
            next.extend_from_slice(&cells[target + 1..]);
            self.refine(&mut next);
            self.search(next, buf, best);
        }
    }

    fn encode(&self, order: &[usize], out: &mut Vec<u32>) {
        out.clear();
        for &a in order {
            out.extend([self.label[a].0, self.label[a].1, self.m(a, a)]);
        }
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                out.push(self.m(order[i], order[j]));
            }
        }
    }
}

/// Ranks distinct values in sorted order; the rank is the class index.
fn compress<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = values.to_vec();
    sorted.sort();
    sorted.dedup();
    values
        .iter()
        .map(|x| sorted.binary_search(x).expect("present"))
        .collect()
}

/// Calls `f` with every ordering that permutes vertices within cells.
fn for_each_cell_ordering(cells: &[Vec<usize>], mut f: impl FnMut(&[usize])) {
    let mut current: Vec<Vec<usize>> = cells.to_vec();
    for c in &mut current {
        c.sort_unstable();
    }
    let mut order: Vec<usize> = Vec::new();
    loop {
        order.clear();
        for c in &current {
            order.extend_from_slice(c);
        }
        f(&order);
        // advance like an odometer, last cell fastest
        let mut i = current.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if next_permutation(&mut current[i]) {
                break;
            }
            // wrapped back to sorted order; carry into the previous cell
        }
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        a.reverse();
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

impl StableGraph {
    /// Canonical vertex order and the resulting encoding.
    pub fn canonical_form(&self) -> (Vec<usize>, CanonicalKey) {
        let adj = Adjacency::of(self);
        let mut best = None;
        adj.search(adj.cells(), &mut Vec::new(), &mut best);
        let (order, mut key) = best.expect("search reaches a leaf");
        key.splice(
            0..0,
            [self.genus(), self.n() as u32, self.num_vertices() as u32, self.num_edges() as u32],
        );
        (order, key)
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        self.canonical_form().1
    }

    /// The isomorphic graph with vertices in canonical order and sorted edges.
    pub fn canonical(&self) -> StableGraph {
        let (order, _) = self.canonical_form();
        self.relabeled(&order)
    }

    pub fn is_isomorphic(&self, other: &StableGraph) -> bool {
        self.canonical_key() == other.canonical_key()
    }
}

/// All vertex permutations preserving weights, markings and edge multiplicities.
pub fn vertex_automorphisms(graph: &StableGraph) -> Vec<Vec<usize>> {
    let adj = Adjacency::of(graph);
    let cells = adj.cells();
    let base: Vec<usize> = cells.iter().flatten().copied().collect();
    let mut out = Vec::new();
    for_each_cell_ordering(&cells, |order| {
        // candidate map: base[i] -> order[i]
        let mut map = vec![0usize; adj.v];
        for (i, &a) in base.iter().enumerate() {
            map[a] = order[i];
        }
        let ok = (0..adj.v).all(|a| {
            adj.label[a] == adj.label[map[a]] && (a..adj.v).all(|b| adj.m(a, b) == adj.m(map[a], map[b]))
        });
        if ok {
            out.push(map);
        }
    });
    out.sort();
    out
}

/// Image of the automorphism group in the symmetric group on the edges.
///
/// Generated by lifts of the vertex automorphisms (matching parallel edges in
/// index order) together with transpositions inside each parallel class.
/// Swapping the two halves of a loop fixes every edge and contributes nothing.
pub fn edge_group_with_cap(graph: &StableGraph, cap: usize) -> Result<PermGroup> {
    let m = graph.num_edges();
    let mut classes: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
    for (e, &(a, b)) in graph.edges().iter().enumerate() {
        classes.entry((a.min(b), a.max(b))).or_default().push(e);
    }
    let mut gens = Vec::new();
    for map in vertex_automorphisms(graph) {
        let mut image = vec![0usize; m];
        for (&(a, b), list) in &classes {
            let (x, y) = (map[a as usize] as u32, map[b as usize] as u32);
            let target = &classes[&(x.min(y), x.max(y))];
            for (k, &e) in list.iter().enumerate() {
                image[e] = target[k];
            }
        }
        gens.push(Permutation::from_images(image)?);
    }
    for list in classes.values() {
        for w in list.windows(2) {
            gens.push(Permutation::from_cycles(&[vec![w[0], w[1]]], m)?);
        }
    }
    gens.retain(|g| !g.is_identity());
    gens.sort();
    gens.dedup();
    closure(&gens, m, cap)
}

/// [`edge_group_with_cap`] with the default cap.
pub fn edge_group(graph: &StableGraph) -> Result<PermGroup> {
    graph.edge_group()
}
