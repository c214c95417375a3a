//! Stable weighted marked multigraphs: the combinatorial types of tropical
//! curves, one per cell of `Δ_{g,n}`.
//!
//! Edges are stored as endpoint pairs in a fixed order; edge `e` consists of
//! half-edges `2e` and `2e + 1`. Markings are a total function from
//! `{0..n-1}` to vertices. Legs are not edges.

mod canon;
mod enumerate;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permgroup::{PermGroup, DEFAULT_GROUP_CAP};

pub use canon::{edge_group, edge_group_with_cap, vertex_automorphisms, CanonicalKey};
pub use enumerate::{enumerate, enumerate_with_max_edges};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableGraph {
    genus: u32,
    weights: Vec<u32>,
    edges: Vec<(u32, u32)>,
    markings: Vec<u32>,
}

/// Checks `2g - 2 + n > 0` and `3g - 3 + n > 0`.
pub fn check_stable_type(g: u32, n: u32) -> Result<()> {
    let (gi, ni) = (g as i64, n as i64);
    if 2 * gi - 2 + ni > 0 && 3 * gi - 3 + ni > 0 {
        Ok(())
    } else {
        Err(Error::Unstable { g, n })
    }
}

impl StableGraph {
    /// Validates connectivity, the genus formula, stability, and the edge bound.
    pub fn new(genus: u32, weights: Vec<u32>, edges: Vec<(u32, u32)>, markings: Vec<u32>) -> Result<Self> {
        let n = markings.len() as u32;
        check_stable_type(genus, n)?;
        let v = weights.len();
        if v == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        if edges.iter().any(|&(a, b)| a as usize >= v || b as usize >= v) {
            return Err(Error::InvalidGraph("edge endpoint out of range".into()));
        }
        if markings.iter().any(|&m| m as usize >= v) {
            return Err(Error::InvalidGraph("marking on a missing vertex".into()));
        }
        let graph = Self {
            genus,
            weights,
            edges,
            markings,
        };
        if graph.edges.is_empty() {
            return Err(Error::InvalidGraph("a cell needs at least one edge".into()));
        }
        let max_edges = 3 * genus as i64 - 3 + n as i64;
        if graph.edges.len() as i64 > max_edges {
            return Err(Error::InvalidGraph(format!(
                "{} edges exceed 3g-3+n = {max_edges}",
                graph.edges.len()
            )));
        }
        if !graph.is_connected() {
            return Err(Error::InvalidGraph("graph is disconnected".into()));
        }
        let actual = graph.h1() + graph.weights.iter().sum::<u32>() as i64;
        if actual != genus as i64 {
            return Err(Error::InvalidGraph(format!(
                "h1 + total weight = {actual}, declared genus {genus}"
            )));
        }
        for vtx in 0..v {
            if graph.weights[vtx] == 0 && graph.valence(vtx) + graph.marks_at(vtx) < 3 {
                return Err(Error::InvalidGraph(format!("vertex {vtx} is unstable")));
            }
        }
        Ok(graph)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn n(&self) -> usize {
        self.markings.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Dimension of the cell: one less than the number of edges.
    pub fn cell_dimension(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn markings(&self) -> &[u32] {
        &self.markings
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (a, b) = self.edges[e];
        a == b
    }

    /// Vertex carrying half-edge `h`.
    pub fn half_edge_vertex(&self, h: usize) -> u32 {
        let (a, b) = self.edges[h / 2];
        if h.is_multiple_of(2) {
            a
        } else {
            b
        }
    }

    /// The other half of the edge containing `h`.
    pub fn opposite_half_edge(h: usize) -> usize {
        h ^ 1
    }

    /// First Betti number `#edges - #vertices + 1` (graph assumed connected).
    pub fn h1(&self) -> i64 {
        self.edges.len() as i64 - self.weights.len() as i64 + 1
    }

    /// Number of half-edges at `v`; loops count twice.
    pub fn valence(&self, v: usize) -> u32 {
        let v = v as u32;
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as u32 + (b == v) as u32)
            .sum()
    }

    pub fn marks_at(&self, v: usize) -> u32 {
        self.markings.iter().filter(|&&m| m as usize == v).count() as u32
    }

    pub(crate) fn marks_mask(&self, v: usize) -> u32 {
        self.markings
            .iter()
            .enumerate()
            .filter(|(_, &m)| m as usize == v)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    fn is_connected(&self) -> bool {
        self.connected_without(None, None)
    }

    /// Connectivity after deleting an edge and/or a vertex.
    fn connected_without(&self, edge: Option<usize>, vertex: Option<usize>) -> bool {
        let v = self.weights.len();
        let mut parent: Vec<usize> = (0..v).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            let (a, b) = (a as usize, b as usize);
            if Some(e) == edge || Some(a) == vertex || Some(b) == vertex {
                continue;
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let mut roots = (0..v)
            .filter(|&x| Some(x) != vertex)
            .map(|x| find(&mut parent, x));
        match roots.next() {
            None => true,
            Some(r) => roots.all(|s| s == r),
        }
    }

    pub fn has_loop(&self) -> bool {
        (0..self.edges.len()).any(|e| self.is_loop(e))
    }

    pub fn has_bridge(&self) -> bool {
        (0..self.edges.len()).any(|e| !self.is_loop(e) && !self.connected_without(Some(e), None))
    }

    /// A vertex whose deletion disconnects the remaining vertices.
    pub fn has_cut_vertex(&self) -> bool {
        self.weights.len() >= 3 && (0..self.weights.len()).any(|v| !self.connected_without(None, Some(v)))
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut pairs: Vec<(u32, u32)> = self
            .edges
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort_unstable();
        pairs.windows(2).any(|w| w[0] == w[1])
    }

    pub fn has_repeated_marking(&self) -> bool {
        (0..self.weights.len()).any(|v| self.marks_at(v) >= 2)
    }

    pub fn has_positive_weight(&self) -> bool {
        self.weights.iter().any(|&w| w > 0)
    }

    /// Contracts edge `e`. A loop is deleted and its vertex gains one unit of
    /// weight; otherwise the endpoints merge, keeping the smaller index.
    pub fn contract(&self, e: usize) -> Result<StableGraph> {
        if e >= self.edges.len() {
            return Err(Error::EdgeOutOfRange {
                edge: e,
                edges: self.edges.len(),
            });
        }
        if self.edges.len() == 1 {
            return Err(Error::LastEdge);
        }
        let (a, b) = self.edges[e];
        let mut weights = self.weights.clone();
        let mut rest: Vec<(u32, u32)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &x)| x)
            .collect();
        let mut markings = self.markings.clone();
        if a == b {
            weights[a as usize] += 1;
        } else {
            let (keep, gone) = (a.min(b), a.max(b));
            weights[keep as usize] += weights[gone as usize];
            weights.remove(gone as usize);
            let relabel = |x: u32| match x.cmp(&gone) {
                std::cmp::Ordering::Equal => keep,
                std::cmp::Ordering::Greater => x - 1,
                std::cmp::Ordering::Less => x,
            };
            for edge in &mut rest {
                *edge = (relabel(edge.0), relabel(edge.1));
            }
            for m in &mut markings {
                *m = relabel(*m);
            }
        }
        StableGraph::new(self.genus, weights, rest, markings)
    }

    /// The same graph with vertices renumbered by `order` (new index `i` is old
    /// vertex `order[i]`) and edges sorted by endpoints.
    pub fn relabeled(&self, order: &[usize]) -> StableGraph {
        let mut new_of_old = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_of_old[old] = new as u32;
        }
        let weights = order.iter().map(|&old| self.weights[old]).collect();
        let mut edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (new_of_old[a as usize], new_of_old[b as usize]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        let markings = self.markings.iter().map(|&m| new_of_old[m as usize]).collect();
        StableGraph {
            genus: self.genus,
            weights,
            edges,
            markings,
        }
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            genus: self.genus,
            n: self.markings.len() as u32,
            vertices: self.weights.iter().map(|&weight| VertexEntry { weight }).collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            markings: self.markings.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_graph()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph serializes")
    }

    /// Symmetry group of the cell, as permutations of the edges.
    pub fn edge_group(&self) -> Result<PermGroup> {
        edge_group_with_cap(self, DEFAULT_GROUP_CAP)
    }
}

/// True iff the graph lies in the bm subcomplex: it has a bridge, a cut
/// vertex, a loop, a repeated marking, a vertex of positive weight, or a
/// pair of parallel edges.
pub fn in_bm(graph: &StableGraph) -> bool {
    graph.has_loop()
        || graph.has_positive_weight()
        || graph.has_repeated_marking()
        || graph.has_parallel_edges()
        || graph.has_bridge()
        || graph.has_cut_vertex()
}

/// Graph interchange format. Edge order fixes the edge indexing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub genus: u32,
    pub n: u32,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[u32; 2]>,
    pub markings: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub weight: u32,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<StableGraph> {
        if self.markings.len() != self.n as usize {
            return Err(Error::InvalidGraph(format!(
                "n = {} but {} markings listed",
                self.n,
                self.markings.len()
            )));
        }
        StableGraph::new(
            self.genus,
            self.vertices.into_iter().map(|v| v.weight).collect(),
            self.edges.into_iter().map(|[a, b]| (a, b)).collect(),
            self.markings,
        )
    }
}

/// Named graphs that recur in the low-genus computations.
pub mod named {
    use super::StableGraph;

    fn simple(genus: u32, vertices: usize, edges: &[(u32, u32)]) -> StableGraph {
        StableGraph::new(genus, vec![0; vertices], edges.to_vec(), Vec::new()).expect("valid named graph")
    }

    pub fn complete_k4() -> StableGraph {
        simple(3, 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    /// Edge graph of the square pyramid (the wheel with four spokes); apex is vertex 4.
    pub fn square_pyramid() -> StableGraph {
        simple(4, 5, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4)])
    }

    /// Edge graph of the triangular prism.
    pub fn triangular_prism() -> StableGraph {
        simple(4, 6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
    }

    pub fn complete_bipartite_k33() -> StableGraph {
        let edges: Vec<(u32, u32)> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        simple(4, 6, &edges)
    }

    /// Two vertices joined by three edges.
    pub fn theta() -> StableGraph {
        simple(2, 2, &[(0, 1), (0, 1), (0, 1)])
    }

    /// Two loops joined by a bridge.
    pub fn dumbbell() -> StableGraph {
        simple(2, 2, &[(0, 0), (0, 1), (1, 1)])
    }
}
