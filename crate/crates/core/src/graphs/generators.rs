//! Synthetic graph families. All generators are deterministic per seed.

use std::collections::BTreeSet;

use rand::RngExt;

use super::Graph;
use crate::error::{Error, Result};
use crate::rng;

/// G(n, p): every unordered pair is present independently with probability `p`.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    let mut rng = rng::stream(seed, "erdos-renyi", 0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Watts–Strogatz small world graph.
///
/// Starts from a ring lattice where each vertex links to `k / 2` neighbors on
/// each side, then visits lattice edges `(u, u + j)` for `j = 1..=k/2` and
/// rewires each with probability `beta` to `(u, w)`, `w` uniform among
/// vertices that are neither `u` nor already adjacent to `u`. The edge count
/// stays `n * k / 2`. The result may be disconnected; callers that need a
/// connected graph take its largest component.
pub fn gen_watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> Result<Graph> {
    if !k.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "ring degree k={k} must be even"
        )));
    }
    if k >= n {
        return Err(Error::InvalidParameter(format!(
            "ring degree k={k} must be below n={n}"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidParameter(format!(
            "rewiring probability {beta} outside [0, 1]"
        )));
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    let mut rng = rng::stream(seed, "watts-strogatz", 0);
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if !adj[u].contains(&v) || rng.random::<f64>() >= beta {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
    Graph::from_edges(n, edges.collect::<Vec<_>>())
}

/// Holme–Kim power law cluster graph.
///
/// Seeding convention: vertices `0..m` form a clique. The attachment pool
/// starts with each core vertex repeated `max(m - 1, 1)` times (its core
/// degree, at least once). Every later vertex `s` draws `m` distinct targets
/// from the pool with probability proportional to multiplicity. The first
/// target is always linked; after each link, with probability `p` the next
/// link instead closes a triangle with a random neighbor of the last target
/// that is not yet adjacent to `s` (falling back to the next preferential
/// target when no such neighbor exists). Every linked target, and `s` itself
/// `m` times, are appended to the pool. With `p = 0` this is Barabási–Albert
/// growth and the edge count is `m (m - 1) / 2 + m (n - m)`.
pub fn gen_powerlaw_cluster(n: usize, m: usize, p: f64, seed: u64) -> Result<Graph> {
    if m < 1 || m >= n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= m < n, got m={m}, n={n}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "triangle probability {p} outside [0, 1]"
        )));
    }
    let mut rng = rng::stream(seed, "powerlaw-cluster", 0);
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut pool = Vec::new();
    for u in 0..m {
        for v in u + 1..m {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        pool.extend(std::iter::repeat_n(u, (m - 1).max(1)));
    }
    for source in m..n {
        let mut targets = BTreeSet::new();
        while targets.len() < m {
            targets.insert(pool[rng.random_range(0..pool.len())]);
        }
        // draw order is fixed by the sorted set, popped from the back
        let mut targets: Vec<usize> = targets.into_iter().collect();
        let mut target = targets.pop().expect("m >= 1");
        link(&mut adj, source, target);
        pool.push(target);
        let mut count = 1;
        while count < m {
            if rng.random::<f64>() < p {
                let closable: Vec<usize> = adj[target]
                    .iter()
                    .copied()
                    .filter(|&w| w != source && !adj[source].contains(&w))
                    .collect();
                if !closable.is_empty() {
                    let w = closable[rng.random_range(0..closable.len())];
                    link(&mut adj, source, w);
                    pool.push(w);
                    count += 1;
                    continue;
                }
            }
            // skip targets already linked through triangle closure
            while let Some(t) = targets.pop() {
                if !adj[source].contains(&t) {
                    target = t;
                    break;
                }
            }
            if adj[source].contains(&target) {
                break;
            }
            link(&mut adj, source, target);
            pool.push(target);
            count += 1;
        }
        pool.extend(std::iter::repeat_n(source, m));
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
    Graph::from_edges(n, edges.collect::<Vec<_>>())
}

fn link(adj: &mut [BTreeSet<usize>], u: usize, v: usize) {
    adj[u].insert(v);
    adj[v].insert(u);
}

/// Complete `r`-ary tree of height `h`, vertices numbered breadth first.
pub fn gen_balanced_tree(r: usize, h: usize) -> Result<Graph> {
    if r < 1 {
        return Err(Error::InvalidParameter(
            "branching factor must be >= 1".into(),
        ));
    }
    let mut n = 0usize;
    let mut level = 1usize;
    for _ in 0..=h {
        n += level;
        level *= r;
    }
    let edges = (1..n).map(|v| ((v - 1) / r, v));
    Graph::from_edges(n, edges.collect::<Vec<_>>())
}

/// `(rows + 1) x (cols + 1)` lattice of vertices, i.e. `rows x cols` unit squares.
pub fn gen_grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows < 1 || cols < 1 {
        return Err(Error::InvalidParameter(
            "grid needs at least one row and column".into(),
        ));
    }
    let width = cols + 1;
    let id = |r: usize, c: usize| r * width + c;
    let mut edges = Vec::new();
    for r in 0..=rows {
        for c in 0..=cols {
            if c < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges((rows + 1) * width, edges)
}
