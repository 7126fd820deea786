#![allow(dead_code)]

use radial_embed::rng::{stream, StreamRng};
use radial_embed::{Graph, Positions};
use rand::RngExt;

pub fn rng(name: &str, index: u64) -> StreamRng {
    stream(0x7e57, name, index)
}

/// Each pair independently with probability `p`.
pub fn random_graph(n: usize, p: f64, rng: &mut StreamRng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random recursive tree: vertex `v` attaches to a uniform earlier vertex.
pub fn random_tree(n: usize, rng: &mut StreamRng) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (rng.random_range(0..v), v))).unwrap()
}

/// Coordinates uniform in `[-scale, scale]`.
pub fn random_positions(dim: usize, n: usize, scale: f64, rng: &mut StreamRng) -> Positions {
    let coords: Vec<f64> = (0..dim * n)
        .map(|_| scale * (2.0 * rng.random::<f64>() - 1.0))
        .collect();
    Positions::from_columns(dim, coords).unwrap()
}

/// Random orthogonal `dim x dim` matrix by Gram-Schmidt on uniform columns.
pub fn random_rotation(dim: usize, rng: &mut StreamRng) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    while q.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
        for u in &q {
            let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-3 {
            q.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    q
}

pub fn rotate(p: &Positions, q: &[Vec<f64>]) -> Positions {
    let coords: Vec<f64> = (0..p.n())
        .flat_map(|i| {
            let x = p.point(i);
            q.iter()
                .map(move |row| row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
        })
        .collect();
    Positions::from_columns(p.dim(), coords).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
