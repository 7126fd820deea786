//! Undirected simple graphs, generators, edge-list IO and component tools.

mod generators;
mod io;

pub use generators::{
    gen_balanced_tree, gen_erdos_renyi, gen_grid, gen_powerlaw_cluster, gen_watts_strogatz,
};
pub use io::{load_edge_list, load_edge_list_file, write_edge_list, write_edge_list_with_header};

use std::collections::{HashMap, VecDeque};

use rand::seq::index;

use crate::error::{Error, Result};
use crate::rng;

/// Undirected simple graph on vertices `0..n` stored in compressed adjacency form.
///
/// Edges are kept as `(u, v)` with `u < v`, sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Graph {
    /// Build a graph from arbitrary vertex pairs. Self-loops are dropped and
    /// both orientations of a pair collapse to one edge.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges = Vec::new();
        for (u, v) in pairs {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u != v {
                edges.push((u.min(v), u.max(v)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted_edges(n, edges))
    }

    fn from_sorted_edges(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0usize; 2 * edges.len()];
        for &(u, v) in &edges {
            targets[cursor[u]] = v;
            cursor[u] += 1;
            targets[cursor[v]] = u;
            cursor[v] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Self {
            n,
            edges,
            offsets,
            targets,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_edges(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Component label per vertex, labels numbered in order of smallest member.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().1 == 1
    }

    /// Subgraph induced by `vertices` (given in any order); new ids follow
    /// the ascending order of the retained original ids.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, VertexMap) {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut compact = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            compact[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| {
                let (a, b) = (compact[u], compact[v]);
                (a != usize::MAX && b != usize::MAX).then_some((a, b))
            })
            .collect();
        let map = VertexMap::new(keep.iter().map(|&v| v as u64).collect());
        (Graph::from_sorted_edges(keep.len(), edges), map)
    }

    /// Apply a vertex relabeling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::InvalidParameter(
                "permutation length mismatch".into(),
            ));
        }
        Graph::from_edges(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }
}

/// Mapping from compact vertex ids back to the labels they had before
/// compaction (file labels, or ids of a parent graph).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexMap {
    original: Vec<u64>,
}

impl VertexMap {
    pub fn new(original: Vec<u64>) -> Self {
        Self { original }
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n as u64).collect())
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    pub fn original(&self, compact: usize) -> u64 {
        self.original[compact]
    }

    pub fn originals(&self) -> &[u64] {
        &self.original
    }

    pub fn compact_of(&self, original: u64) -> Option<usize> {
        self.original.iter().position(|&o| o == original)
    }

    pub fn to_lookup(&self) -> HashMap<u64, usize> {
        self.original
            .iter()
            .enumerate()
            .map(|(c, &o)| (o, c))
            .collect()
    }

    /// `self` maps a child graph into a parent whose own map is `parent`;
    /// the result maps the child straight to the parent's labels.
    pub fn compose(&self, parent: &VertexMap) -> VertexMap {
        VertexMap::new(
            self.original
                .iter()
                .map(|&mid| parent.original(mid as usize))
                .collect(),
        )
    }
}

/// Induced subgraph on the largest connected component. Among equally large
/// components the one containing the smallest vertex id wins.
pub fn largest_connected_component(g: &Graph) -> Result<(Graph, VertexMap)> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let (label, count) = g.components();
    let mut sizes = vec![0usize; count];
    for &l in &label {
        sizes[l] += 1;
    }
    // labels are assigned in order of smallest member, so the first maximum wins ties
    let mut best = 0;
    for (l, &s) in sizes.iter().enumerate() {
        if s > sizes[best] {
            best = l;
        }
    }
    let members: Vec<usize> = (0..g.n()).filter(|&v| label[v] == best).collect();
    Ok(g.induced_subgraph(&members))
}

/// Uniformly sample `ceil(fraction * n)` vertices without replacement and
/// return the largest connected component of the induced subgraph.
pub fn subsample_vertices(g: &Graph, fraction: f64, seed: u64) -> Result<(Graph, VertexMap)> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "subsample fraction {fraction} outside (0, 1]"
        )));
    }
    let n = g.n();
    let keep = ((fraction * n as f64).ceil() as usize).min(n);
    if keep == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = rng::stream(seed, "subsample", 0);
    let chosen = index::sample(&mut rng, n, keep).into_vec();
    let (sub, sub_map) = g.induced_subgraph(&chosen);
    let (lcc, lcc_map) = largest_connected_component(&sub)?;
    Ok((lcc, lcc_map.compose(&sub_map)))
}
