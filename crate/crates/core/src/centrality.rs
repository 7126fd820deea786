//! Reference centrality measures.
//!
//! Normalizations follow the common network-analysis conventions:
//! degree `deg / (n - 1)`; betweenness and load summed over ordered
//! source/target pairs and scaled by `1 / ((n - 1)(n - 2))` (equivalently
//! `2 / ((n - 1)(n - 2))` per unordered pair); closeness `(n - 1) / sum dist`;
//! eigenvector scores unit Euclidean norm; PageRank sums to one.
//!
//! Per-source work for betweenness, closeness and load runs on rayon over
//! fixed chunks of sources whose partial sums are combined in chunk order,
//! so results do not depend on the thread count.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;

const SOURCE_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Degree,
    Betweenness,
    Eigenvector,
    Pagerank,
    Closeness,
    Load,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::Degree,
        Measure::Betweenness,
        Measure::Eigenvector,
        Measure::Pagerank,
        Measure::Closeness,
        Measure::Load,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Betweenness => "betweenness",
            Measure::Eigenvector => "eigenvector",
            Measure::Pagerank => "pagerank",
            Measure::Closeness => "closeness",
            Measure::Load => "load",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityVector {
    pub measure: Measure,
    pub scores: Vec<f64>,
}

impl CentralityVector {
    /// `vertex,score` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("vertex,score\n");
        for (i, x) in self.scores.iter().enumerate() {
            s.push_str(&format!("{i},{x:.16e}\n"));
        }
        s
    }
}

/// Compute `measure` with default tolerances.
pub fn compute(g: &Graph, measure: Measure) -> Result<CentralityVector> {
    match measure {
        Measure::Degree => degree_centrality(g),
        Measure::Betweenness => Ok(betweenness_centrality(g)),
        Measure::Eigenvector => eigenvector_centrality(g, 1e-10, 10_000),
        Measure::Pagerank => pagerank(g, 0.85, 1e-12, 10_000),
        Measure::Closeness => closeness_centrality(g),
        Measure::Load => Ok(load_centrality(g)),
    }
}

pub fn degree_centrality(g: &Graph) -> Result<CentralityVector> {
    if g.n() < 2 {
        return Err(Error::InvalidParameter(
            "degree centrality needs n >= 2".into(),
        ));
    }
    let scale = 1.0 / (g.n() - 1) as f64;
    Ok(CentralityVector {
        measure: Measure::Degree,
        scores: (0..g.n()).map(|v| g.degree(v) as f64 * scale).collect(),
    })
}

/// Sum `per_source` over all vertices in a thread-count independent order.
fn sum_over_sources<F>(n: usize, per_source: F) -> Vec<f64>
where
    F: Fn(usize, &mut Vec<f64>) + Sync,
{
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            for &s in chunk {
                per_source(s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in partials {
        total.iter_mut().zip(part).for_each(|(a, b)| *a += b);
    }
    total
}

struct Bfs {
    order: Vec<usize>,
    dist: Vec<usize>,
    sigma: Vec<f64>,
}

fn bfs_counts(g: &Graph, s: usize) -> Bfs {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    let mut sigma = vec![0.0; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    dist[s] = 0;
    sigma[s] = 1.0;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
            }
        }
    }
    Bfs { order, dist, sigma }
}

fn pair_scale(n: usize) -> f64 {
    1.0 / ((n - 1) * (n - 2)) as f64
}

/// Brandes' dependency accumulation over BFS shortest paths.
pub fn betweenness_centrality(g: &Graph) -> CentralityVector {
    let n = g.n();
    if n <= 2 {
        return CentralityVector {
            measure: Measure::Betweenness,
            scores: vec![0.0; n],
        };
    }
    let mut scores = sum_over_sources(n, |s, acc| {
        let bfs = bfs_counts(g, s);
        let mut delta = vec![0.0; n];
        for &w in bfs.order.iter().rev() {
            for &v in g.neighbors(w) {
                if bfs.dist[v] != usize::MAX && bfs.dist[v] + 1 == bfs.dist[w] {
                    delta[v] += bfs.sigma[v] / bfs.sigma[w] * (1.0 + delta[w]);
                }
            }
            if w != s {
                acc[w] += delta[w];
            }
        }
    });
    let scale = pair_scale(n);
    scores.iter_mut().for_each(|x| *x *= scale);
    CentralityVector {
        measure: Measure::Betweenness,
        scores,
    }
}

/// Load centrality: a unit packet from every vertex to every other vertex,
/// split equally among shortest-path next hops at each branch point.
///
/// Computed per source by sending each target's packet back toward the
/// source, splitting among BFS predecessors; summed over all ordered pairs
/// this equals forward routing.
pub fn load_centrality(g: &Graph) -> CentralityVector {
    let n = g.n();
    if n <= 2 {
        return CentralityVector {
            measure: Measure::Load,
            scores: vec![0.0; n],
        };
    }
    let mut scores = sum_over_sources(n, |s, acc| {
        let bfs = bfs_counts(g, s);
        let mut carried = vec![0.0; n];
        for &v in &bfs.order {
            carried[v] = 1.0;
        }
        for &w in bfs.order.iter().rev() {
            if w == s {
                continue;
            }
            let preds: Vec<usize> = g
                .neighbors(w)
                .iter()
                .copied()
                .filter(|&v| bfs.dist[v] != usize::MAX && bfs.dist[v] + 1 == bfs.dist[w])
                .collect();
            let share = carried[w] / preds.len() as f64;
            for v in preds {
                if v != s {
                    carried[v] += share;
                }
            }
        }
        for &v in &bfs.order {
            if v != s {
                // remove the packet that originates at v itself
                acc[v] += carried[v] - 1.0;
            }
        }
    });
    let scale = pair_scale(n);
    scores.iter_mut().for_each(|x| *x *= scale);
    CentralityVector {
        measure: Measure::Load,
        scores,
    }
}

/// `(n - 1) / sum_j dist(i, j)` over BFS hop distances; connected graphs only.
pub fn closeness_centrality(g: &Graph) -> Result<CentralityVector> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParameter("closeness needs n >= 2".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected(
            "closeness requires a connected graph; use the largest component".into(),
        ));
    }
    let scores: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|s| {
            let bfs = bfs_counts(g, s);
            let total: usize = bfs.dist.iter().sum();
            (n - 1) as f64 / total as f64
        })
        .collect();
    Ok(CentralityVector {
        measure: Measure::Closeness,
        scores,
    })
}

/// Dominant eigenvector of `A` by power iteration on `A + I`, which shares
/// eigenvectors with `A` but also converges on bipartite graphs.
pub fn eigenvector_centrality(g: &Graph, tol: f64, max_iter: usize) -> Result<CentralityVector> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..max_iter {
        let mut next: Vec<f64> = (0..n)
            .map(|v| x[v] + g.neighbors(v).iter().map(|&w| x[w]).sum::<f64>())
            .collect();
        let norm = next.iter().map(|y| y * y).sum::<f64>().sqrt();
        next.iter_mut().for_each(|y| *y /= norm);
        let change: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if change <= tol {
            return Ok(CentralityVector {
                measure: Measure::Eigenvector,
                scores: x,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "eigenvector centrality",
        iterations: max_iter,
    })
}

/// PageRank on the symmetric digraph of `g`. Isolated vertices redistribute
/// their mass uniformly.
pub fn pagerank(g: &Graph, alpha: f64, tol: f64, max_iter: usize) -> Result<CentralityVector> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "damping {alpha} outside [0, 1)"
        )));
    }
    let uniform = 1.0 / n as f64;
    let mut x = vec![uniform; n];
    for _ in 0..max_iter {
        let dangling: f64 = (0..n).filter(|&v| g.degree(v) == 0).map(|v| x[v]).sum();
        let base = (1.0 - alpha) * uniform + alpha * dangling * uniform;
        let next: Vec<f64> = (0..n)
            .map(|v| {
                base + alpha
                    * g.neighbors(v)
                        .iter()
                        .map(|&w| x[w] / g.degree(w) as f64)
                        .sum::<f64>()
            })
            .collect();
        let change: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if change <= tol {
            let total: f64 = x.iter().sum();
            x.iter_mut().for_each(|y| *y /= total);
            return Ok(CentralityVector {
                measure: Measure::Pagerank,
                scores: x,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "pagerank",
        iterations: max_iter,
    })
}
